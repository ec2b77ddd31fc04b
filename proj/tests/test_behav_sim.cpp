// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/behav.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/sim.hpp"
#include "hdlgen/verilog_text.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <unistd.h>

using namespace hdlgen;
namespace fs = std::filesystem;

namespace {

struct Env {
    explicit Env(std::vector<std::string> replies)
        : backend(replies)
        , session(backend, prompts)
    {}
    ScriptedBackend backend;
    PromptLibrary prompts;
    LlmSession session;
};

const char *kHeader = "module top_module(\n\tinput clk,\n\tinput [7:0] d,\n\toutput [7:0] q\n);";

Task make_task()
{
    return {"behav_task", "An 8-bit register with an adder.", "module tb; endmodule", kHeader, {}};
}

InformationList some_list()
{
    return make_information_list({"clk: clock", "q: registered d plus one"}, 1);
}

fs::path temp_dir(const std::string &name)
{
    auto dir = fs::temp_directory_path() / ("hdlgen_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_script(const fs::path &path, const std::string &body)
{
    std::ofstream(path) << "#!/bin/sh\n" << body;
    fs::permissions(path, fs::perms::owner_all);
}

} // namespace

TEST(ComponentPlan, ParsesNamesAndDescriptions)
{
    auto plan = parse_component_plan("Plan:\n1. datapath: adds one to d\n2. **control**: registers the sum");
    ASSERT_EQ(plan.components.size(), 2u);
    EXPECT_EQ(plan.components[0].name, "datapath");
    EXPECT_EQ(plan.components[0].description, "adds one to d");
    EXPECT_EQ(plan.components[1].name, "control");
    EXPECT_EQ(plan.render(), "1. datapath: adds one to d\n2. control: registers the sum\n");
}

TEST(ComponentPlan, UnnamedAndDuplicateItems)
{
    auto plan = parse_component_plan("1. just a sentence\n2. reg: a\n3. reg: b");
    ASSERT_EQ(plan.components.size(), 3u);
    EXPECT_EQ(plan.components[0].name, "component 1");
    EXPECT_EQ(plan.components[1].name, "reg");
    EXPECT_NE(plan.components[2].name, "reg");
}

TEST(ComponentPlan, EmptyPlanIsFormatError)
{
    Env env({"no components"});
    EXPECT_THROW(plan_components(some_list(), make_task(), env.session), FormatError);
}

TEST(Component, CodeKeptVerbatimAndOrderEnforced)
{
    auto plan = parse_component_plan("1. sum: d plus one\n2. store: register");
    Env env({"```verilog\nwire [7:0] sum = d + 8'd1;\n```", "```verilog\nalways @(posedge clk) q <= sum;\n```"});
    EXPECT_THROW(generate_component(plan, 1, some_list(), make_task(), env.session), ContractViolation);
    EXPECT_THROW(generate_component(plan, 5, some_list(), make_task(), env.session), ContractViolation);
    plan = generate_component(plan, 0, some_list(), make_task(), env.session);
    EXPECT_EQ(plan.components[0].code, "wire [7:0] sum = d + 8'd1;");
    plan = generate_component(plan, 1, some_list(), make_task(), env.session);
    EXPECT_EQ(plan.components[1].code, "always @(posedge clk) q <= sum;");
    EXPECT_NE(env.backend.prompts()[1].find("wire [7:0] sum = d + 8'd1;"), std::string::npos);
}

TEST(Component, MissingCodeIsFormatError)
{
    auto plan = parse_component_plan("1. sum: d plus one");
    Env env({""});
    EXPECT_THROW(generate_component(plan, 0, some_list(), make_task(), env.session), FormatError);
}

TEST(Integrate, FallsBackWhenReplyDropsAComponent)
{
    ComponentPlan plan{{{"sum", "d plus one", "wire [7:0] sum = d + 8'd1;"}, {"store", "register", "always @(posedge clk) q <= sum;"}}};
    Env env({"```verilog\nmodule top_module(input clk, input [7:0] d, output reg [7:0] q);\n"
             "always @(posedge clk) q <= d;\nendmodule\n```"});
    auto code = integrate(plan, kHeader, env.session);
    EXPECT_EQ(code, assemble_components(plan, kHeader));
    EXPECT_TRUE(verilog::has_balanced_module(code));
    EXPECT_NE(code.find("wire [7:0] sum = d + 8'd1;"), std::string::npos);
    EXPECT_NE(code.find("always @(posedge clk) q <= sum;"), std::string::npos);
    EXPECT_NE(code.find("output reg [7:0] q"), std::string::npos);
}

TEST(Integrate, AcceptsFaithfulReply)
{
    ComponentPlan plan{{{"sum", "", "wire [7:0] sum = d + 8'd1;"}, {"store", "", "always @(posedge clk) q <= sum;"}}};
    std::string module = "module top_module(input clk, input [7:0] d, output reg [7:0] q);\n"
                         "wire [7:0] sum = d + 8'd1;\nalways @(posedge clk)\n  q <= sum;\nendmodule";
    Env env({"Here:\n```verilog\n" + module + "\n```"});
    EXPECT_EQ(integrate(plan, kHeader, env.session), module);
}

TEST(Integrate, UncodedComponentIsContractViolation)
{
    ComponentPlan plan{{{"sum", "", ""}}};
    Env env({"x"});
    EXPECT_THROW(integrate(plan, kHeader, env.session), ContractViolation);
}

TEST(Behav, EndToEnd)
{
    Env env({"1. sum: d plus one\n2. store: register",
             "```verilog\nwire [7:0] sum = d + 8'd1;\n```",
             "```verilog\nalways @(posedge clk) q <= sum;\n```",
             "I could not do it."});
    auto code = run_behav(some_list(), make_task(), env.session);
    EXPECT_EQ(env.backend.cursor(), 4u);
    EXPECT_TRUE(verilog::has_balanced_module(code));
}

TEST(Protocol, MismatchLines)
{
    PassCountProtocol p;
    auto o = p.outcome("Hint: blah\nMismatches: 3 in 439 samples\n", 0);
    EXPECT_EQ(o.status, TestStatus::PartialFail);
    EXPECT_EQ(o.passed, 436);
    EXPECT_EQ(o.total, 439);

    o = p.outcome("Mismatches: 0 in 439 samples\n", 0);
    EXPECT_EQ(o.status, TestStatus::Pass);
    EXPECT_EQ(o.passed, 439);

    o = p.outcome("Total mismatched samples is 10 out of 20 samples\n", 0);
    EXPECT_EQ(o.passed, 10);
    EXPECT_EQ(o.total, 20);
}

TEST(Protocol, LastLineWins)
{
    PassCountProtocol p;
    auto counts = p.parse("Mismatches: 5 in 10 samples\nMismatches: 1 in 10 samples\n");
    ASSERT_TRUE(counts);
    EXPECT_EQ(counts->first, 1);
}

TEST(Protocol, NoSummaryUsesExitCode)
{
    PassCountProtocol p;
    EXPECT_EQ(p.outcome("", 0).status, TestStatus::Pass);
    auto fail = p.outcome("error", 3);
    EXPECT_EQ(fail.status, TestStatus::PartialFail);
    EXPECT_EQ(fail.passed, 0);
    EXPECT_EQ(fail.total, 1);
}

TEST(Protocol, PatternsNeedNamedGroups)
{
    EXPECT_THROW(PassCountProtocol(std::vector<std::string>{"Mismatches: (\\d+)"}), InputError);
    PassCountProtocol custom(std::vector<std::string>{"ERR (?<mismatches>\\d+)/(?<total>\\d+)"});
    EXPECT_EQ(custom.outcome("ERR 2/8", 0).passed, 6);
}

TEST(Mock, TaskRulesBeforeShared)
{
    auto mock = parse_mock_simulator(nlohmann::json::parse(R"({
        "default": [{"key": "GOOD", "passed": 10, "total": 10}, {"key": "HANG", "status": "timeout"}],
        "tasks": {"t1": [{"key": "GOOD", "passed": 3, "total": 10}]}})"));
    EXPECT_EQ(mock.simulate("GOOD", "t1").passed, 3);
    EXPECT_EQ(mock.simulate("GOOD", "t2").status, TestStatus::Pass);
    EXPECT_EQ(mock.simulate("HANG").status, TestStatus::SimTimeout);
    EXPECT_EQ(mock.simulate("other").status, TestStatus::CompileError);
    EXPECT_THROW(parse_mock_simulator(nlohmann::json::parse(R"([{"key": "a", "passed": 5, "total": 2}])")), InputError);
    EXPECT_THROW(parse_mock_simulator(nlohmann::json::parse(R"([{"key": "a", "status": "weird"}])")), InputError);
}

TEST(Process, ExitCodeAndOutput)
{
    auto dir = temp_dir("proc");
    auto r = run_process({"/bin/sh", "-c", "echo hi; echo err >&2; exit 4"}, dir, dir / "out.txt", std::chrono::seconds(5));
    EXPECT_FALSE(r.timed_out);
    EXPECT_EQ(r.exit_code, 4);
    std::ifstream in(dir / "out.txt");
    std::string all((std::istreambuf_iterator<char>(in)), {});
    EXPECT_NE(all.find("hi"), std::string::npos);
    EXPECT_NE(all.find("err"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Process, TimeoutKillsGroup)
{
    auto dir = temp_dir("timeout");
    auto start = std::chrono::steady_clock::now();
    auto r = run_process({"/bin/sh", "-c", "sleep 10 & sleep 10"}, dir, dir / "out.txt", std::chrono::milliseconds(300));
    EXPECT_TRUE(r.timed_out);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
    fs::remove_all(dir);
}

TEST(Process, MissingProgram)
{
    auto dir = temp_dir("missing");
    EXPECT_THROW(
        run_process({"/nonexistent/program"}, dir, dir / "out.txt", std::chrono::seconds(1)), InfrastructureError);
    fs::remove_all(dir);
}

TEST(Iverilog, MissingExecutable)
{
    IverilogConfig cfg;
    cfg.compiler = "/nonexistent/iverilog";
    EXPECT_THROW(IverilogSimulator{cfg}, InfrastructureError);
}

TEST(Iverilog, HarnessWithStandInTools)
{
    auto dir = temp_dir("iverilog");
    write_script(
        dir / "fake-iverilog",
        "out=''\nwhile [ $# -gt 0 ]; do\n  if [ \"$1\" = -o ]; then out=$2; shift; fi\n  last=$1; shift\ndone\n"
        "grep -q SYNTAX_ERROR \"$last\" && { echo 'syntax error'; exit 1; }\ncp \"$last\" \"$out\"\n");
    write_script(
        dir / "fake-vvp",
        "grep -q HANG \"$1\" && sleep 10\n"
        "n=$(sed -n 's/.*MISMATCH \\([0-9]*\\).*/\\1/p' \"$1\")\n"
        "echo \"Mismatches: ${n:-0} in 439 samples\"\n");
    IverilogConfig cfg;
    cfg.compiler = (dir / "fake-iverilog").string();
    cfg.runtime = (dir / "fake-vvp").string();
    cfg.timeout = std::chrono::seconds(1);
    cfg.scratch_root = dir / "scratch";
    IverilogSimulator sim(cfg);
    Task task{"t/1", "spec", "module tb; endmodule", "", {}};

    auto run = [&](const std::string &code, const std::string &key) {
        return sim.run(CodeSample{code, Procedure::Baseline, std::nullopt, 1}, task, key);
    };
    auto partial = run("// MISMATCH 3\nmodule top_module; endmodule", "s1");
    EXPECT_EQ(partial.status, TestStatus::PartialFail);
    EXPECT_EQ(partial.passed, 436);
    EXPECT_EQ(run("module top_module; endmodule", "s2").status, TestStatus::Pass);
    EXPECT_EQ(run("SYNTAX_ERROR", "s3").status, TestStatus::CompileError);
    EXPECT_EQ(run("// HANG", "s4").status, TestStatus::SimTimeout);

    bool found = false;
    for (const auto &entry : fs::recursive_directory_iterator(cfg.scratch_root))
        if (entry.path().filename() == "candidate.v" && entry.path().parent_path().filename() == "s1")
            found = true;
    EXPECT_TRUE(found);
    fs::remove_all(dir);
}
