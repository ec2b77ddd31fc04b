// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/commands.hpp"
#include "hdlgen/config.hpp"
#include "hdlgen/dataset.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/report.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace hdlgen;
using hdlgen::testing::fixture_path;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name)
{
    auto dir = fs::temp_directory_path() / ("hdlgen_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void put(const fs::path &p, const std::string &text)
{
    std::ofstream(p) << text;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_fixture(const fs::path &out_dir, const std::string &config = "config.json")
{
    std::ostringstream out, err;
    int code = cmd_run(fixture_path("dataset"), fixture_path(config), out_dir, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Config, ReferenceBudgets)
{
    auto a = load_config(fs::path(HDLGEN_CONFIG_DIR) / "721.json");
    EXPECT_EQ(a.search.samples_per_iteration, (std::vector<int>{7, 2, 1}));
    EXPECT_EQ(a.search.top_candidates[1], 2);
    EXPECT_EQ(a.search.top_candidates[2], 1);
    EXPECT_EQ(a.search.shortcut_threshold, Rational(95, 100));
    EXPECT_EQ(a.search.max_format_errors, 10);
    EXPECT_FALSE(a.search.stop_on_pass);
    EXPECT_EQ(a.backend.kind, BackendKind::Remote);
    EXPECT_DOUBLE_EQ(a.backend.generation.temperature, 0.5);
    EXPECT_EQ(a.backend.generation.max_context_tokens, 4096u);
    EXPECT_EQ(a.sim.iverilog.timeout, std::chrono::seconds(60));
    EXPECT_EQ(a.search.total_budget(), 10);

    auto b = load_config(fs::path(HDLGEN_CONFIG_DIR) / "532.json");
    EXPECT_EQ(b.search.samples_per_iteration, (std::vector<int>{5, 3, 2}));
    EXPECT_EQ(b.search.top_candidates[1], 3);
    EXPECT_EQ(b.search.top_candidates[2], 2);
    EXPECT_EQ(b.search.total_budget(), 10);
}

TEST(Config, DefaultsAndDerivedCandidates)
{
    auto d = parse_config(json::parse(R"({"backend": {"script": "s.json"}, "sim": {"kind": "mock", "mock": "m.json"}})"), "/base");
    EXPECT_EQ(d.search.samples_per_iteration, (std::vector<int>{7, 2, 1}));
    EXPECT_EQ(d.search.top_candidates[1], 2);
    EXPECT_EQ(d.search.top_candidates[2], 1);
    EXPECT_EQ(d.backend.script, fs::path("/base/s.json"));
    EXPECT_EQ(d.sim.mock, fs::path("/base/m.json"));

    auto e = parse_config(json::parse(R"({"backend": {"script": "s"}, "search": {"N_s": [4, 3, 2, 1], "W": 0.9}})"));
    EXPECT_EQ(e.search.top_candidates[1], 3);
    EXPECT_EQ(e.search.top_candidates[2], 2);
    EXPECT_EQ(e.search.top_candidates[3], 1);
    EXPECT_EQ(e.search.shortcut_threshold, Rational(9, 10));
}

TEST(Config, RejectsBadInput)
{
    EXPECT_THROW(parse_config(json::parse("[]")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"kind": "scripted"}})")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"kind": "carrier-pigeon"}})")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"script": "s"}, "search": {"N_s": [0]}})")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"script": "s"}, "search": {"W": "2/1"}})")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"script": "s"}, "run": {"workers": 0}})")), InputError);
    EXPECT_THROW(parse_config(json::parse(R"({"backend": {"script": "s"}, "sim": {"kind": "mock"}})")), InputError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), InputError);
}

TEST(Dataset, DirectoryLayout)
{
    auto tasks = load_dataset(fixture_path("dataset"));
    ASSERT_EQ(tasks.size(), 3u);
    EXPECT_EQ(tasks[0].id, "fsm_bytes");
    EXPECT_EQ(tasks[1].id, "kmap3");
    EXPECT_EQ(tasks[2].id, "mux2");
    EXPECT_EQ(tasks[2].split, DatasetSplit::Machine);
    EXPECT_EQ(tasks[0].split, DatasetSplit::Human);
    EXPECT_NE(tasks[1].module_header.find("output out"), std::string::npos);
    EXPECT_EQ(filter_tasks(tasks, {"mux2"}).size(), 1u);
    EXPECT_THROW(filter_tasks(tasks, {"missing"}), InputError);
}

TEST(Dataset, JsonLines)
{
    auto dir = scratch("jsonl");
    put(dir / "a.jsonl",
        R"({"task_id": "t1", "prompt": "spec one", "test": "module tb; endmodule", "module_header": "module top_module();"})"
        "\n\n"
        R"({"id": "t2", "detail_description": "spec two", "testbench": "module tb; endmodule", "split": "machine"})"
        "\n");
    auto tasks = load_dataset(dir / "a.jsonl");
    ASSERT_EQ(tasks.size(), 2u);
    EXPECT_EQ(tasks[0].spec_text, "spec one");
    EXPECT_EQ(tasks[1].split, DatasetSplit::Machine);

    put(dir / "dup.jsonl",
        R"({"task_id": "t1", "prompt": "a", "test": "x"})"
        "\n"
        R"({"task_id": "t1", "prompt": "b", "test": "y"})"
        "\n");
    EXPECT_THROW(load_dataset(dir / "dup.jsonl"), InputError);
    put(dir / "empty.jsonl", "");
    EXPECT_THROW(load_dataset(dir / "empty.jsonl"), InputError);
    EXPECT_THROW(load_dataset(dir / "missing"), InputError);
    fs::remove_all(dir);
}

TEST(RunCommand, FixtureReportIsDeterministic)
{
    auto a = scratch("run_a");
    auto b = scratch("run_b");
    auto ra = run_fixture(a);
    auto rb = run_fixture(b);
    ASSERT_EQ(ra.code, kExitOk) << ra.err;
    ASSERT_EQ(rb.code, kExitOk) << rb.err;
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_NE(ra.out.find("kmap3: 4/4 passing samples"), std::string::npos);

    auto report = json::parse(slurp(a / "report.json"));
    EXPECT_EQ(report["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(report["aggregate"]["histogram"], json::parse("[1, 1, 0, 0, 1]"));
    EXPECT_TRUE(report["aggregate"]["pass_at_k"]["5"].is_null());

    std::map<std::string, json> by_id;
    for (const auto &t : report["tasks"])
        by_id[t["task_id"]] = t;
    EXPECT_EQ(by_id["kmap3"]["samples"][1]["mode"], "shortcut");
    EXPECT_EQ(by_id["fsm_bytes"]["samples"][0]["procedure"], "SEQU");
    EXPECT_EQ(by_id["fsm_bytes"]["samples"][2]["procedure"], "BEHAV");
    EXPECT_EQ(by_id["mux2"]["format_errors"], 1);
    EXPECT_EQ(by_id["mux2"]["best_error_rate"], "9/10");

    std::istringstream lines(slurp(a / "samples.jsonl"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        auto s = json::parse(line);
        EXPECT_TRUE(s.contains("task_id"));
        EXPECT_TRUE(s.contains("wall_ms"));
        ++count;
    }
    EXPECT_EQ(count, 12);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunCommand, ReportRoundTrip)
{
    auto dir = scratch("roundtrip");
    ASSERT_EQ(run_fixture(dir).code, kExitOk);
    auto tasks = parse_report(json::parse(slurp(dir / "report.json")));
    ASSERT_EQ(tasks.size(), 3u);
    for (const auto &t : tasks)
        EXPECT_EQ(t.n, 4);
    fs::remove_all(dir);
}

TEST(RunCommand, BadConfigIsInputError)
{
    auto dir = scratch("badcfg");
    put(dir / "cfg.json", "{ not json");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(fixture_path("dataset"), dir / "cfg.json", dir / "out", out, err), kExitInput);
    fs::remove_all(dir);
}

TEST(RunCommand, ExhaustedScriptFailsTheTask)
{
    auto dir = scratch("exhausted");
    put(dir / "script.json", R"({"tasks": {"kmap3": [], "fsm_bytes": [], "mux2": []}})");
    fs::copy_file(fixture_path("mock_sim.json"), dir / "mock_sim.json");
    fs::copy_file(fixture_path("config.json"), dir / "config.json");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(fixture_path("dataset"), dir / "config.json", dir / "out", out, err), kExitRuntime);
    auto report = json::parse(slurp(dir / "out" / "report.json"));
    EXPECT_EQ(report["aggregate"]["tasks_failed"], 3);
    fs::remove_all(dir);
}

TEST(FilterHard, BaselineReport)
{
    auto dir = scratch("hard");
    auto r = run_fixture(dir, "baseline_config.json");
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_filter_hard(dir / "report.json", fixture_path("dataset"), 3, out, err), kExitOk);
    EXPECT_EQ(out.str(), "fsm_bytes\nmux2\n");

    std::ostringstream out2, err2;
    EXPECT_EQ(cmd_filter_hard(dir / "report.json", std::nullopt, 10, out2, err2), kExitOk);
    EXPECT_EQ(out2.str(), "");
    EXPECT_NE(err2.str().find("warning"), std::string::npos);

    std::ostringstream out3, err3;
    EXPECT_EQ(cmd_filter_hard(dir / "missing.json", std::nullopt, 10, out3, err3), kExitInput);
    fs::remove_all(dir);
}

TEST(PassK, FromReport)
{
    auto dir = scratch("passk");
    ASSERT_EQ(run_fixture(dir).code, kExitOk);
    std::ostringstream out, err;
    EXPECT_EQ(cmd_passk(dir / "report.json", {1, 4}, out, err), kExitOk);
    EXPECT_NE(out.str().find("pass@1: 0.333333 (1/3)"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("pass@4: 0.333333 (1/3)"), std::string::npos) << out.str();

    std::ostringstream out2, err2;
    EXPECT_EQ(cmd_passk(dir / "report.json", {5}, out2, err2), kExitInput);
    std::ostringstream out3, err3;
    EXPECT_EQ(cmd_passk(dir / "nothing.json", {1}, out3, err3), kExitInput);
    fs::remove_all(dir);
}

TEST(Minimize, ExemplarTable)
{
    auto dir = scratch("minimize");
    put(dir / "table.json",
        R"({"table": [[0,0,0],[0,1,1],[1,0,1],[1,1,1]], "inputs": ["a[1]","a[2]"], "outputs": ["x"],
            "header_inputs": ["a[2]","a[1]"], "header_outputs": ["x"]})");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_minimize(dir / "table.json", std::nullopt, "top_module", out, err), kExitOk) << err.str();
    EXPECT_NE(out.str().find("x = a[1] | a[2]"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("endmodule"), std::string::npos);

    put(dir / "bad.json", R"({"table": [[0,2]], "inputs": ["a"], "outputs": ["y"]})");
    std::ostringstream out2, err2;
    EXPECT_EQ(cmd_minimize(dir / "bad.json", std::nullopt, "top_module", out2, err2), kExitInput);
    put(dir / "broken.json", "{");
    std::ostringstream out3, err3;
    EXPECT_EQ(cmd_minimize(dir / "broken.json", std::nullopt, "top_module", out3, err3), kExitInput);
    fs::remove_all(dir);
}

TEST(DumpPrompts, WritesEveryTemplate)
{
    auto dir = scratch("prompts");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_dump_prompts(dir, out, err), kExitOk);
    for (const auto &[name, body] : PromptLibrary::defaults())
        EXPECT_EQ(slurp(dir / (name + ".txt")), body) << name;
    fs::remove_all(dir);
}
