#pragma once

#include <soldefect/evm/disassembler.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace soldefect::evm
{

/// Where an abstract stack value may have come from.
enum Taint: std::uint32_t
{
	taint_balance = 1u << 0,
	taint_caller = 1u << 1,
	taint_origin = 1u << 2,
	taint_block_info = 1u << 3,
	taint_storage = 1u << 4,
	taint_calldata = 1u << 5,
	taint_callvalue = 1u << 6,
	taint_memory = 1u << 7,
	taint_call_result = 1u << 8,
	taint_environment = 1u << 9,
	/// Result of EQ with a balance-derived operand.
	taint_balance_equality = 1u << 10
};

/// Operands of the comparison a value was computed from (LT, GT, SLT, SGT or EQ).
struct Comparison
{
	std::uint8_t opcode = 0;
	std::size_t pc = 0;
	std::array<std::optional<uint256>, 2> constants;
	std::array<std::uint32_t, 2> taints{};

	bool operator==(Comparison const&) const = default;
};

struct AbstractValue
{
	std::optional<uint256> constant;
	std::uint32_t taint = 0;
	/// n when the constant was produced by PUSHn.
	unsigned push_width = 0;
	std::optional<Comparison> comparison;
	/// Logical negation count parity applied on top of `comparison` (ISZERO).
	bool negated = false;
	/// PUSH4 constant compared for equality with a calldata-derived value.
	std::optional<std::uint32_t> selector;

	bool operator==(AbstractValue const&) const = default;
};

/// Top of the stack is values.back(). With bottom_unknown set, values below the tracked part
/// exist but are unknown (the state is a join of stacks of different heights).
struct StackState
{
	std::vector<AbstractValue> values;
	bool bottom_unknown = false;

	bool operator==(StackState const&) const = default;
};

AbstractValue join(AbstractValue const& a, AbstractValue const& b);
/// Pointwise join aligned at the top; never drops a taint bit present in either input.
StackState join(StackState const& a, StackState const& b);

enum class Terminator
{
	jump,
	jumpi,
	fallthrough,
	stop,
	return_,
	revert,
	selfdestruct,
	invalid
};

std::string_view to_string(Terminator terminator);

struct BranchRecord
{
	AbstractValue condition;
	std::optional<std::size_t> target;
	bool operator==(BranchRecord const&) const = default;
};

struct BasicBlock
{
	std::size_t id = 0;
	std::vector<Instruction> instructions;
	std::vector<std::size_t> successors;
	Terminator terminator = Terminator::fallthrough;
	/// A jump whose target could not be resolved to a constant.
	bool has_unknown_successor = false;
	/// Reached from the entry by stack emulation.
	bool reachable = false;
	bool stack_underflow = false;
	/// Distinct conditions observed at the final JUMPI.
	std::vector<BranchRecord> branches;

	std::size_t start_pc() const { return instructions.empty() ? 0 : instructions.front().pc; }
	std::size_t end_pc() const { return instructions.empty() ? 0 : instructions.back().pc + instructions.back().size(); }
	/// Id of the next block in code order if execution can fall into it.
	std::optional<std::size_t> fallthrough;
};

struct Loop
{
	std::size_t header = 0;
	std::set<std::size_t> body;
	std::vector<std::size_t> back_edge_sources;
	/// Constant iteration bound; nullopt means unbounded.
	std::optional<uint256> bound;

	bool is_bounded() const { return bound.has_value(); }
};

struct CfgOptions
{
	/// Distinct entry stacks explored per block before widening.
	unsigned max_entry_states = 4;
	/// Total instructions emulated before remaining jumps are left unresolved.
	std::size_t max_steps = 2'000'000;
};

struct ControlFlowGraph
{
	std::vector<BasicBlock> blocks;
	std::size_t entry = 0;
	/// Immediate dominator per block; the entry maps to itself, unreachable blocks to nullopt.
	std::vector<std::optional<std::size_t>> idom;
	std::vector<Loop> loops;
	bool step_limit_hit = false;

	std::optional<std::size_t> block_at(std::size_t pc) const;
	std::vector<std::vector<std::size_t>> predecessors() const;
	bool dominates(std::size_t a, std::size_t b) const;
};

ControlFlowGraph build_cfg(std::vector<Instruction> const& instructions, CfgOptions const& options = {});

/// Cooper-Harvey-Kennedy iterative dominators over blocks reachable through `successors` from
/// `entry`.
std::vector<std::optional<std::size_t>> compute_dominators(std::vector<BasicBlock> const& blocks, std::size_t entry);

/// Natural loops (one per header, bodies of back edges merged) with bound classification.
std::vector<Loop> detect_loops(ControlFlowGraph const& cfg);

/// 4-byte selector -> entry block of the function it dispatches to.
using SelectorTable = std::map<std::uint32_t, std::size_t>;
SelectorTable extract_selectors(ControlFlowGraph const& cfg);

}
