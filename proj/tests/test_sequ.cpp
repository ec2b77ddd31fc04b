// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/classify.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/sequ.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hdlgen;
using hdlgen::testing::read_fixture;

namespace {

std::vector<AlwaysBlockPlan> shift_register_blocks()
{
    return {
        {BlockRole::StateRegister, "", read_fixture("worked/block_state_register.v")},
        {BlockRole::NextStateLogic, "", read_fixture("worked/block_next_state.v")},
        {BlockRole::OutputLogic, "", read_fixture("worked/block_output.v")},
    };
}

struct Env {
    explicit Env(std::vector<std::string> replies)
        : backend(replies)
        , session(backend, prompts)
    {}
    ScriptedBackend backend;
    PromptLibrary prompts;
    LlmSession session;
};

} // namespace

TEST(SttParse, ByteFsmTableWithoutPorts)
{
    auto stt = parse_stt(read_fixture("worked/stt_reply.md"));
    ASSERT_EQ(stt.columns.size(), 5u);
    std::vector<ColumnRole> roles;
    for (const auto &c : stt.columns)
        roles.push_back(c.role);
    EXPECT_EQ(
        roles,
        (std::vector<ColumnRole>{
            ColumnRole::CurrentState, ColumnRole::Input, ColumnRole::Input, ColumnRole::NextState, ColumnRole::Output}));
    ASSERT_EQ(stt.rows.size(), 12u);
    std::vector<std::string> first;
    for (const auto &c : stt.rows[0])
        first.push_back(c.text);
    EXPECT_EQ(first, (std::vector<std::string>{"IDLE", "0", "0", "IDLE", "0"}));
    EXPECT_EQ(stt.rows[4][1].kind, SttCell::Kind::DontCare);
    EXPECT_EQ(stt.rows[4][1].text, "X");
    EXPECT_EQ(stt.rows[0][0].kind, SttCell::Kind::Identifier);
    EXPECT_EQ(stt.rows[0][1].kind, SttCell::Kind::Bit);
    EXPECT_EQ(stt.state_names(), (std::vector<std::string>{"IDLE", "BYTE1", "BYTE2", "BYTE3"}));
}

TEST(SttParse, DeclaredPortsDecideRoles)
{
    auto header = verilog::parse_module_header(read_fixture("worked/fsm_header.v"));
    // Output column placed left of the next-state column: position alone would call it an input.
    std::string text = "| state | done | in[3] | next |\n|---|---|---|---|\n| A | 0 | 1 | B |\n";
    auto with_ports = parse_stt(text, &header);
    EXPECT_EQ(with_ports.columns[1].role, ColumnRole::Output);
    EXPECT_EQ(with_ports.columns[2].role, ColumnRole::Input);
    auto without = parse_stt(text);
    EXPECT_EQ(without.columns[1].role, ColumnRole::Input);
}

TEST(SttParse, FormatErrors)
{
    EXPECT_THROW(parse_stt("Just prose, no table."), FormatError);
    EXPECT_THROW(parse_stt("| state | next |\n|---|---|\n| A | B | C |\n"), FormatError);
    EXPECT_THROW(parse_stt("| a | b |\n|---|---|\n| 0 | 1 |\n"), FormatError);
    EXPECT_THROW(parse_stt("| state | other state | next |\n|---|---|---|\n| A | B | C |\n"), FormatError);
    EXPECT_THROW(parse_stt("| state | next |\n|---|---|\n"), FormatError);
}

TEST(SttParse, RoundTripsThroughSerialization)
{
    auto header = verilog::parse_module_header(read_fixture("worked/fsm_header.v"));
    auto stt = parse_stt(read_fixture("worked/stt_reply.md"), &header);
    auto again = parse_stt(serialize_stt(stt), &header);
    EXPECT_EQ(again, stt);
    EXPECT_EQ(serialize_stt(again), serialize_stt(stt));
}

TEST(ExtractSingleAlways, FencedBareAndMultiple)
{
    EXPECT_EQ(extract_single_always("```verilog\nalways @(posedge clk) q <= d;\n```"), "always @(posedge clk) q <= d;");
    EXPECT_EQ(
        extract_single_always("Here it is: always @(posedge clk) begin q <= d; end and that is all."),
        "always @(posedge clk) begin q <= d; end");
    EXPECT_THROW(
        extract_single_always("```\nalways @(posedge clk) q <= d;\nalways @(*) y = q;\n```"), FormatError);
    EXPECT_THROW(extract_single_always("no code"), FormatError);
    auto inner = extract_single_always("```\nmodule m(input clk);\nreg q;\nalways @(posedge clk) q <= ~q;\nendmodule\n```");
    EXPECT_EQ(inner, "always @(posedge clk) q <= ~q;");
}

TEST(GenerateBlock, TwoCallsDescriptionThenCode)
{
    Env env({"1. State Register: updates Q on the rising edge when enable is high.",
             "```verilog\n" + read_fixture("worked/block_state_register.v") + "```"});
    auto stt = parse_stt(read_fixture("worked/stt_reply.md"));
    Task task{"t", "spec", "tb", read_fixture("worked/shift_header.v"), DatasetSplit::Human};
    auto plan = generate_block(BlockRole::StateRegister, stt, make_information_list({"x"}, 1), {}, task, env.session);
    EXPECT_EQ(plan.role, BlockRole::StateRegister);
    EXPECT_NE(plan.code.find("if(enable)"), std::string::npos);
    EXPECT_NE(plan.description.find("rising edge"), std::string::npos);
    ASSERT_EQ(env.backend.prompts().size(), 2u);
    EXPECT_NE(env.backend.prompts()[1].find("rising edge"), std::string::npos);
    EXPECT_NE(env.backend.prompts()[0].find("| IDLE |"), std::string::npos);
}

TEST(GenerateBlock, OrderPreconditionAndFormatError)
{
    Env env({"desc", "```\nalways @(posedge clk) a <= b;\nalways @(*) c = d;\n```"});
    auto stt = parse_stt(read_fixture("worked/stt_reply.md"));
    Task task{"t", "spec", "tb", "", DatasetSplit::Human};
    auto list = make_information_list({"x"}, 1);
    EXPECT_THROW(generate_block(BlockRole::OutputLogic, stt, list, {}, task, env.session), ContractViolation);
    EXPECT_THROW(generate_block(BlockRole::StateRegister, stt, list, {}, task, env.session), FormatError);
}

TEST(MergeBlocks, LocalAssemblyMatchesMergedFigure)
{
    auto blocks = shift_register_blocks();
    auto module = assemble_blocks(blocks, read_fixture("worked/shift_header.v"));
    for (const auto &b : blocks)
        EXPECT_NE(module.find(b.code), std::string::npos) << module;
    EXPECT_NE(module.find("reg [7:0] Q;"), std::string::npos) << module;
    EXPECT_NE(module.find("reg [7:0] nextState;"), std::string::npos) << module;
    EXPECT_TRUE(verilog::has_balanced_module(module));
    EXPECT_EQ(verilog::count_always(module), 3);
    EXPECT_EQ(deduce_type_from_code(module), CircuitKind::Sequential);
    EXPECT_EQ(module, assemble_blocks(blocks, read_fixture("worked/shift_header.v")));
}

TEST(MergeBlocks, AcceptsCompleteReplyAndFallsBackOnDroppedBlock)
{
    auto blocks = shift_register_blocks();
    std::string header = read_fixture("worked/shift_header.v");
    std::string good = "```verilog\n" + header + "reg [7:0] Q;\nreg [7:0] nextState;\n" + blocks[0].code
                       + blocks[1].code + blocks[2].code + "endmodule\n```";
    Env accept({good});
    auto merged = merge_blocks(blocks, header, accept.session);
    EXPECT_NE(merged.find("reg [7:0] Q;\nreg [7:0] nextState;"), std::string::npos);

    std::string dropped = "```verilog\n" + header + blocks[0].code + blocks[1].code + "endmodule\n```";
    Env fallback({dropped});
    EXPECT_EQ(merge_blocks(blocks, header, fallback.session), assemble_blocks(blocks, header));
}

TEST(MergeBlocks, MissingRoleIsPreconditionError)
{
    auto blocks = shift_register_blocks();
    blocks.pop_back();
    Env env({});
    EXPECT_THROW(merge_blocks(blocks, read_fixture("worked/shift_header.v"), env.session), ContractViolation);
    EXPECT_EQ(env.backend.cursor(), 0u);
}

TEST(MergeBlocks, StateNamesBecomeLocalparams)
{
    std::vector<AlwaysBlockPlan> blocks{
        {BlockRole::StateRegister, "", "always @(posedge clk) begin\n\tif (reset) state <= IDLE;\n\telse state <= next;\nend\n"},
        {BlockRole::NextStateLogic, "", "always @(*) begin\n\tcase (state)\n\t\tIDLE: next = in[3] ? BYTE1 : IDLE;\n\t\tBYTE1: next = BYTE2;\n\t\tBYTE2: next = BYTE3;\n\t\tBYTE3: next = in[3] ? BYTE1 : IDLE;\n\tendcase\nend\n"},
        {BlockRole::OutputLogic, "", "always @(*) begin\n\tdone = (state == BYTE3);\nend\n"},
    };
    auto module = assemble_blocks(blocks, read_fixture("worked/fsm_header.v"), {"IDLE", "BYTE1", "BYTE2", "BYTE3"});
    EXPECT_NE(module.find("localparam"), std::string::npos) << module;
    EXPECT_NE(module.find("output reg done"), std::string::npos) << module;
    EXPECT_NE(module.find("IDLE"), std::string::npos);
}

TEST(RunSequ, FullProcedureOnScriptedReplies)
{
    auto blocks = shift_register_blocks();
    std::string header = read_fixture("worked/shift_header.v");
    Env env({
        "| Current State | S | Next State | Z |\n|---|---|---|---|\n| Q | 1 | {Q[6:0],1} | Q[{A,B,C}] |\n",
        "desc 1", "```\n" + blocks[0].code + "```",
        "desc 2", "```\n" + blocks[1].code + "```",
        "desc 3", "```\n" + blocks[2].code + "```",
        "I could not merge that.",
    });
    Task task{"shift", "spec", "tb", header, DatasetSplit::Human};
    auto code = run_sequ(make_information_list({"x"}, 1), task, env.session);
    EXPECT_EQ(env.backend.cursor(), 8u);
    for (const auto &b : blocks)
        EXPECT_NE(code.find(b.code), std::string::npos);
}
