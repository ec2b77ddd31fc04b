// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Classification-based Verilog generation and evaluation harness"};
    app.require_subcommand(1);

    std::string dataset, config, out_dir = "out";
    auto *run = app.add_subcommand("run", "Generate and test code for every task in a dataset");
    run->add_option("dataset", dataset, "Task directory or .jsonl file")->required();
    run->add_option("-c,--config", config, "JSON run configuration")->required();
    run->add_option("-o,--out", out_dir, "Output directory for report.json and samples.jsonl");

    std::string report;
    std::string filter_dataset;
    int required_samples = 10;
    auto *filter = app.add_subcommand("filter-hard", "List tasks the baseline never solved");
    filter->add_option("report", report, "Baseline report.json")->required();
    filter->add_option("-d,--dataset", filter_dataset, "Restrict to tasks in this dataset");
    filter->add_option("-n,--samples", required_samples, "Baseline executions a task needs to qualify");

    std::string table, header, module_name = "top_module";
    auto *mini = app.add_subcommand("minimize", "Minimize a JSON truth table and emit Verilog");
    mini->add_option("table", table, "Truth-table JSON file")->required();
    mini->add_option("--header", header, "Module header to emit against");
    mini->add_option("--module", module_name, "Module name when no header is given");

    std::string passk_report;
    std::vector<int> ks{1, 5, 10};
    auto *passk = app.add_subcommand("passk", "Aggregate pass@k and error-rate histogram of a report");
    passk->add_option("report", passk_report, "report.json")->required();
    passk->add_option("-k", ks, "Values of k")->delimiter(',');

    std::string prompt_dir;
    auto *dump = app.add_subcommand("dump-prompts", "Write the built-in prompt templates to a directory");
    dump->add_option("dir", prompt_dir, "Destination directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : hdlgen::kExitInput;
    }

    if (*run)
        return hdlgen::cmd_run(dataset, config, out_dir, std::cout, std::cerr);
    if (*filter)
        return hdlgen::cmd_filter_hard(
            report,
            filter_dataset.empty() ? std::nullopt : std::optional<std::filesystem::path>(filter_dataset),
            required_samples,
            std::cout,
            std::cerr);
    if (*mini)
        return hdlgen::cmd_minimize(
            table,
            header.empty() ? std::nullopt : std::optional<std::filesystem::path>(header),
            module_name,
            std::cout,
            std::cerr);
    if (*passk)
        return hdlgen::cmd_passk(passk_report, ks, std::cout, std::cerr);
    return hdlgen::cmd_dump_prompts(prompt_dir, std::cout, std::cerr);
}
