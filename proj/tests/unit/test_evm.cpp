#include "../support/cfg_programs.hpp"
#include "../support/graph_oracle.hpp"
#include "../support/test_support.hpp"

#include <soldefect/evm/cfg.hpp>
#include <soldefect/evm/opcodes.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace soldefect;
using namespace soldefect::test;

namespace
{

bool ends_block(std::uint8_t opcode)
{
	using namespace evm::op;
	return opcode == JUMP || opcode == JUMPI || opcode == STOP || opcode == RETURN || opcode == REVERT ||
		opcode == SELFDESTRUCT || opcode == INVALID;
}

void check_partition(evm::ControlFlowGraph const& cfg, std::vector<evm::Instruction> const& instructions,
	std::string const& name)
{
	std::size_t next = 0;
	for (std::size_t i = 0; i < cfg.blocks.size(); ++i)
	{
		auto const& b = cfg.blocks[i];
		ASSERT_EQ(b.id, i) << name;
		ASSERT_FALSE(b.instructions.empty()) << name;
		for (std::size_t k = 0; k < b.instructions.size(); ++k)
		{
			ASSERT_LT(next, instructions.size()) << name;
			ASSERT_EQ(b.instructions[k].pc, instructions[next].pc) << name;
			++next;
			auto const op = b.instructions[k].opcode;
			if (op == evm::op::JUMPDEST)
				ASSERT_EQ(k, 0u) << name << ": JUMPDEST inside block " << i;
			if (k + 1 < b.instructions.size())
				ASSERT_FALSE(ends_block(op) && b.instructions[k].is_valid()) << name << ": terminator inside block " << i;
		}
		if (i + 1 < cfg.blocks.size())
			ASSERT_EQ(b.end_pc(), cfg.blocks[i + 1].start_pc()) << name;
		for (auto const s: b.successors)
			ASSERT_LT(s, cfg.blocks.size()) << name;
		if (b.fallthrough)
		{
			ASSERT_EQ(*b.fallthrough, i + 1) << name;
			ASSERT_NE(std::find(b.successors.begin(), b.successors.end(), i + 1), b.successors.end()) << name;
		}
	}
	ASSERT_EQ(next, instructions.size()) << name << ": blocks do not cover the code";
}

void check_against_oracle(evm::ControlFlowGraph const& cfg, std::string const& name)
{
	auto const dom = brute_dominance(cfg.blocks, cfg.entry);
	auto const reachable = reach(cfg.blocks, cfg.entry);
	for (std::size_t a = 0; a < cfg.blocks.size(); ++a)
	{
		EXPECT_EQ(cfg.idom[a].has_value(), static_cast<bool>(reachable[a])) << name << " block " << a;
		for (std::size_t b = 0; b < cfg.blocks.size(); ++b)
			if (reachable[a] && reachable[b])
				EXPECT_EQ(cfg.dominates(a, b), static_cast<bool>(dom[a][b])) << name << " " << a << " dom " << b;
	}

	auto const expected = brute_loops(cfg.blocks, cfg.entry);
	std::map<std::size_t, std::set<std::size_t>> actual;
	for (auto const& loop: cfg.loops)
		actual[loop.header] = loop.body;
	EXPECT_EQ(actual, expected) << name;

	// Every block on a cycle sits inside some reported loop (the programs are reducible).
	for (auto const n: cyclic_blocks(cfg.blocks, cfg.entry))
	{
		bool const covered = std::any_of(cfg.loops.begin(), cfg.loops.end(), [&](evm::Loop const& l) { return l.body.count(n); });
		EXPECT_TRUE(covered) << name << ": cyclic block " << n << " outside every loop";
	}
}

}

TEST(Disassembler, RoundTripsEveryProgram)
{
	for (auto const& program: cfg_programs())
	{
		auto const code = program.code();
		EXPECT_EQ(evm::assemble(evm::disassemble(code)), code) << program.name;
	}
}

TEST(Disassembler, RoundTripsRandomBytes)
{
	std::mt19937_64 rng(31337);
	for (int round = 0; round < 500; ++round)
	{
		bytes code(rng() % 120);
		for (auto& b: code)
			b = static_cast<std::uint8_t>(rng());
		auto const instructions = evm::disassemble(code);
		ASSERT_EQ(evm::assemble(instructions), code);
		std::size_t pc = 0;
		for (auto const& ins: instructions)
		{
			ASSERT_EQ(ins.pc, pc);
			pc += ins.size();
		}
	}
}

TEST(Disassembler, TruncatedPushAndHexInput)
{
	auto const instructions = evm::disassemble(evm::parse_hex("0x600160"));
	ASSERT_EQ(instructions.size(), 2u);
	EXPECT_TRUE(instructions[1].truncated);
	EXPECT_THROW(evm::parse_hex("0x123"), evm::BytecodeInputError);
	EXPECT_THROW(evm::parse_hex("0xzz"), evm::BytecodeInputError);
	EXPECT_EQ(evm::load_bytecode(" 6001\n"), (bytes{0x60, 0x01}));
}

TEST(Cfg, ProgramSuiteHasTwentyPrograms)
{
	EXPECT_GE(cfg_programs().size(), 20u);
}

TEST(Cfg, PartitionAndOracleOnEveryProgram)
{
	for (auto const& program: cfg_programs())
	{
		auto const instructions = evm::disassemble(program.code());
		auto const cfg = evm::build_cfg(instructions);
		check_partition(cfg, instructions, program.name);
		check_against_oracle(cfg, program.name);
	}
}

TEST(Cfg, LoopCountsAndBounds)
{
	for (auto const& program: cfg_programs())
	{
		auto const cfg = evm::build_cfg(evm::disassemble(program.code()));
		EXPECT_EQ(cfg.loops.size(), program.loops) << program.name;
		auto const unbounded = std::count_if(cfg.loops.begin(), cfg.loops.end(), [](evm::Loop const& l) { return !l.is_bounded(); });
		EXPECT_EQ(static_cast<std::size_t>(unbounded), program.unbounded_loops) << program.name;
	}
}

TEST(Cfg, CountedLoopBoundIsTheComparedConstant)
{
	auto const cfg = evm::build_cfg(evm::disassemble(cfg_programs()[2].code()));
	ASSERT_EQ(cfg.loops.size(), 1u);
	ASSERT_TRUE(cfg.loops[0].bound);
	EXPECT_EQ(*cfg.loops[0].bound, 10);
}

TEST(Cfg, ResolvesReturnAddressesThroughTheStack)
{
	for (auto const& program: cfg_programs())
	{
		if (program.name != "subroutine" && program.name != "subroutine_twice")
			continue;
		auto const cfg = evm::build_cfg(evm::disassemble(program.code()));
		for (auto const& b: cfg.blocks)
			EXPECT_FALSE(b.has_unknown_successor) << program.name << " block " << b.id;
		EXPECT_TRUE(std::all_of(cfg.blocks.begin(), cfg.blocks.end(), [](evm::BasicBlock const& b) { return b.reachable; }))
			<< program.name;
	}
}

TEST(Cfg, ComputedJumpIsUnknownAndDeadCodeUnreachable)
{
	for (auto const& program: cfg_programs())
	{
		auto const cfg = evm::build_cfg(evm::disassemble(program.code()));
		if (program.name == "computed_jump")
			EXPECT_TRUE(cfg.blocks[0].has_unknown_successor);
		if (program.name == "dead_code")
		{
			ASSERT_GE(cfg.blocks.size(), 2u);
			EXPECT_FALSE(cfg.blocks[1].reachable);
		}
	}
}

TEST(Cfg, DispatcherSelectors)
{
	for (auto const& program: cfg_programs())
	{
		if (program.name != "dispatcher")
			continue;
		auto const cfg = evm::build_cfg(evm::disassemble(program.code()));
		auto const table = evm::extract_selectors(cfg);
		ASSERT_EQ(table.size(), 2u);
		EXPECT_TRUE(table.count(0xa9059cbb));
		EXPECT_TRUE(table.count(0x70a08231));
	}
}

TEST(Cfg, JoinNeverDropsTaint)
{
	std::mt19937_64 rng(5);
	for (int i = 0; i < 200; ++i)
	{
		evm::StackState a, b;
		for (std::size_t k = rng() % 6; k > 0; --k)
			a.values.push_back({std::nullopt, static_cast<std::uint32_t>(rng() & 0x7ff)});
		for (std::size_t k = rng() % 6; k > 0; --k)
			b.values.push_back({std::nullopt, static_cast<std::uint32_t>(rng() & 0x7ff)});
		auto const j = evm::join(a, b);
		auto const common = std::min(a.values.size(), b.values.size());
		ASSERT_GE(j.values.size(), common);
		for (std::size_t k = 1; k <= common; ++k)
		{
			auto const t = j.values[j.values.size() - k].taint;
			ASSERT_EQ(t & a.values[a.values.size() - k].taint, a.values[a.values.size() - k].taint);
			ASSERT_EQ(t & b.values[b.values.size() - k].taint, b.values[b.values.size() - k].taint);
		}
	}
}

TEST(BytecodeDetectors, NestedCallOnlyOnUnboundedCallLoops)
{
	for (auto const& program: cfg_programs())
	{
		auto const findings = analyze_hex(to_hex(program.code()));
		EXPECT_EQ(count(findings, "D08"), program.nested_calls) << program.name;
	}
}

TEST(BytecodeDetectors, BalanceEqualityAndPush20)
{
	for (auto const& program: cfg_programs())
	{
		auto const findings = analyze_hex(to_hex(program.code()));
		EXPECT_EQ(count(findings, "D03"), program.name == "balance_equality" ? 1u : 0u) << program.name;
		EXPECT_EQ(count(findings, "D17"), program.name == "hardcoded_push20" ? 1u : 0u) << program.name;
	}
}

TEST(BytecodeDetectors, BalancePushEqJumpiPattern)
{
	// BALANCE; PUSH; EQ; JUMPI with the balance of an address from calldata.
	auto const code = evm::assemble_text("PUSH1 0x04 CALLDATALOAD BALANCE PUSH1 0x0a EQ PUSH1 @t JUMPI STOP t: JUMPDEST STOP");
	auto const findings = analyze_hex(to_hex(code));
	ASSERT_EQ(count(findings, "D03"), 1u);
	EXPECT_TRUE(findings[0].pc.has_value());
	EXPECT_FALSE(findings[0].line.has_value());
}

TEST(BytecodeDetectors, MetadataTrailerIsIgnored)
{
	auto const code = evm::parse_hex(read_file(fixture("probes/token.runtime.hex")));
	EXPECT_LT(evm::code_size_without_metadata(code), code.size());
}
