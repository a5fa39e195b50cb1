#include <soldefect/evm/cfg.hpp>
#include <soldefect/evm/opcodes.hpp>

#include <algorithm>
#include <deque>

namespace soldefect::evm
{

std::string_view to_string(Terminator terminator)
{
	switch (terminator)
	{
	case Terminator::jump: return "jump";
	case Terminator::jumpi: return "jumpi";
	case Terminator::fallthrough: return "fallthrough";
	case Terminator::stop: return "stop";
	case Terminator::return_: return "return";
	case Terminator::revert: return "revert";
	case Terminator::selfdestruct: return "selfdestruct";
	case Terminator::invalid: return "invalid";
	}
	return "invalid";
}

AbstractValue join(AbstractValue const& a, AbstractValue const& b)
{
	AbstractValue r;
	if (a.constant == b.constant)
		r.constant = a.constant;
	r.taint = a.taint | b.taint;
	if (r.constant && a.push_width == b.push_width)
		r.push_width = a.push_width;
	if (a.comparison && b.comparison && a.comparison->opcode == b.comparison->opcode &&
		a.comparison->pc == b.comparison->pc && a.negated == b.negated)
	{
		Comparison c = *a.comparison;
		for (std::size_t k = 0; k < 2; ++k)
		{
			if (a.comparison->constants[k] != b.comparison->constants[k])
				c.constants[k].reset();
			c.taints[k] = a.comparison->taints[k] | b.comparison->taints[k];
		}
		r.comparison = c;
		r.negated = a.negated;
	}
	if (a.selector == b.selector && a.negated == b.negated)
	{
		r.selector = a.selector;
		r.negated = a.negated;
	}
	return r;
}

StackState join(StackState const& a, StackState const& b)
{
	StackState r;
	auto const n = std::min(a.values.size(), b.values.size());
	r.bottom_unknown = a.bottom_unknown || b.bottom_unknown || a.values.size() != b.values.size();
	r.values.resize(n);
	for (std::size_t i = 0; i < n; ++i)
		r.values[n - 1 - i] = join(a.values[a.values.size() - 1 - i], b.values[b.values.size() - 1 - i]);
	return r;
}

std::optional<std::size_t> ControlFlowGraph::block_at(std::size_t pc) const
{
	auto it = std::upper_bound(blocks.begin(), blocks.end(), pc,
		[](std::size_t value, BasicBlock const& b) { return value < b.start_pc(); });
	if (it == blocks.begin())
		return std::nullopt;
	--it;
	if (pc >= it->end_pc())
		return std::nullopt;
	return it->id;
}

std::vector<std::vector<std::size_t>> ControlFlowGraph::predecessors() const
{
	std::vector<std::vector<std::size_t>> preds(blocks.size());
	for (auto const& b: blocks)
		for (auto const s: b.successors)
			preds[s].push_back(b.id);
	return preds;
}

bool ControlFlowGraph::dominates(std::size_t a, std::size_t b) const
{
	if (b >= idom.size() || !idom[b])
		return false;
	while (true)
	{
		if (a == b)
			return true;
		auto const parent = *idom[b];
		if (parent == b)
			return false;
		b = parent;
	}
}

namespace
{

uint256 exp_mod(uint256 base, uint256 exponent)
{
	uint256 result = 1;
	while (exponent != 0)
	{
		if ((exponent & 1) != 0)
			result *= base;
		base *= base;
		exponent >>= 1;
	}
	return result;
}

bool is_negative(uint256 const& v) { return (v >> 255) != 0; }

std::uint32_t source_taint(std::uint8_t opcode)
{
	switch (opcode)
	{
	case op::BALANCE: return taint_balance;
	case op::CALLER: return taint_caller;
	case op::ORIGIN: return taint_origin;
	case op::BLOCKHASH:
	case op::COINBASE:
	case op::TIMESTAMP:
	case op::NUMBER:
	case op::DIFFICULTY:
	case op::GASLIMIT: return taint_block_info;
	case op::SLOAD: return taint_storage;
	case op::CALLDATALOAD:
	case op::CALLDATASIZE: return taint_calldata;
	case op::CALLVALUE: return taint_callvalue;
	case op::MLOAD:
	case op::SHA3:
	case op::MSIZE: return taint_memory;
	case op::CALL:
	case op::CALLCODE:
	case op::DELEGATECALL:
	case op::STATICCALL:
	case op::CREATE:
	case op::RETURNDATASIZE: return taint_call_result;
	case op::ADDRESS:
	case op::GAS:
	case op::GASPRICE:
	case op::EXTCODESIZE: return taint_environment;
	default: return 0;
	}
}

std::optional<uint256> fold(std::uint8_t opcode, std::vector<AbstractValue> const& args)
{
	for (auto const& a: args)
		if (!a.constant)
			return std::nullopt;
	auto const v = [&](std::size_t i) { return *args[i].constant; };
	switch (opcode)
	{
	case op::ADD: return v(0) + v(1);
	case op::MUL: return v(0) * v(1);
	case op::SUB: return v(0) - v(1);
	case op::DIV: return v(1) == 0 ? uint256(0) : v(0) / v(1);
	case op::MOD: return v(1) == 0 ? uint256(0) : v(0) % v(1);
	case op::EXP: return exp_mod(v(0), v(1));
	case op::LT: return uint256(v(0) < v(1) ? 1 : 0);
	case op::GT: return uint256(v(0) > v(1) ? 1 : 0);
	case op::SLT:
	case op::SGT:
	{
		bool const na = is_negative(v(0));
		bool const nb = is_negative(v(1));
		bool less = na != nb ? na : v(0) < v(1);
		bool greater = na != nb ? nb : v(0) > v(1);
		return uint256((opcode == op::SLT ? less : greater) ? 1 : 0);
	}
	case op::EQ: return uint256(v(0) == v(1) ? 1 : 0);
	case op::ISZERO: return uint256(v(0) == 0 ? 1 : 0);
	case op::AND: return v(0) & v(1);
	case op::OR: return v(0) | v(1);
	case op::XOR: return v(0) ^ v(1);
	case op::NOT: return ~v(0);
	case op::BYTE: return v(0) >= 32 ? uint256(0) : uint256((v(1) >> (8 * (31 - static_cast<unsigned>(v(0))))) & 0xff);
	default: return std::nullopt;
	}
}

class Builder
{
public:
	Builder(std::vector<Instruction> const& instructions, CfgOptions const& options): m_options(options)
	{
		if (!instructions.empty())
			m_code_size = instructions.back().pc + instructions.back().size();
		partition(instructions);
	}

	ControlFlowGraph run()
	{
		if (!m_cfg.blocks.empty())
		{
			enqueue(0, StackState{});
			while (!m_queue.empty())
			{
				if (m_steps > m_options.max_steps)
				{
					m_cfg.step_limit_hit = true;
					break;
				}
				auto [id, state] = std::move(m_queue.front());
				m_queue.pop_front();
				emulate(id, std::move(state), false);
			}
			for (auto& b: m_cfg.blocks)
				b.reachable = m_visits[b.id].processed;
			// Blocks never reached from the entry still get their locally resolvable jumps.
			for (auto& b: m_cfg.blocks)
				if (!b.reachable)
					emulate(b.id, StackState{{}, true}, true);
		}
		for (auto& b: m_cfg.blocks)
			b.successors.assign(m_edges[b.id].begin(), m_edges[b.id].end());
		m_cfg.idom = compute_dominators(m_cfg.blocks, m_cfg.entry);
		m_cfg.loops = detect_loops(m_cfg);
		return std::move(m_cfg);
	}

private:
	struct Visits
	{
		std::vector<StackState> seen;
		std::optional<StackState> widened;
		bool processed = false;
	};

	static bool ends_block(Instruction const& ins)
	{
		switch (ins.opcode)
		{
		case op::JUMP:
		case op::JUMPI:
		case op::STOP:
		case op::RETURN:
		case op::REVERT:
		case op::INVALID:
		case op::SELFDESTRUCT: return true;
		default: return !ins.is_valid();
		}
	}

	static Terminator terminator_of(Instruction const& ins)
	{
		switch (ins.opcode)
		{
		case op::JUMP: return Terminator::jump;
		case op::JUMPI: return Terminator::jumpi;
		case op::STOP: return Terminator::stop;
		case op::RETURN: return Terminator::return_;
		case op::REVERT: return Terminator::revert;
		case op::SELFDESTRUCT: return Terminator::selfdestruct;
		default: return ins.is_valid() ? Terminator::fallthrough : Terminator::invalid;
		}
	}

	void partition(std::vector<Instruction> const& instructions)
	{
		BasicBlock current;
		auto flush = [&] {
			if (current.instructions.empty())
				return;
			current.id = m_cfg.blocks.size();
			current.terminator = terminator_of(current.instructions.back());
			m_cfg.blocks.push_back(std::move(current));
			current = BasicBlock{};
		};
		for (auto const& ins: instructions)
		{
			if (ins.opcode == op::JUMPDEST)
				flush();
			current.instructions.push_back(ins);
			if (ends_block(ins))
				flush();
		}
		flush();
		for (auto& b: m_cfg.blocks)
		{
			auto const t = b.terminator;
			if ((t == Terminator::fallthrough || t == Terminator::jumpi) && b.id + 1 < m_cfg.blocks.size())
				b.fallthrough = b.id + 1;
			if (b.instructions.front().opcode == op::JUMPDEST)
				m_jumpdests[b.start_pc()] = b.id;
		}
		m_edges.resize(m_cfg.blocks.size());
		m_visits.resize(m_cfg.blocks.size());
	}

	void enqueue(std::size_t id, StackState state)
	{
		auto& v = m_visits[id];
		if (std::find(v.seen.begin(), v.seen.end(), state) != v.seen.end())
			return;
		if (v.seen.size() < m_options.max_entry_states)
		{
			v.seen.push_back(state);
			m_queue.emplace_back(id, std::move(state));
			return;
		}
		StackState widened = v.widened ? *v.widened : v.seen.front();
		if (!v.widened)
			for (auto const& s: v.seen)
				widened = join(widened, s);
		widened = join(widened, state);
		if (v.widened && *v.widened == widened)
			return;
		v.widened = widened;
		m_queue.emplace_back(id, std::move(widened));
	}

	/// Makes at least `depth` values explicit; false on underflow.
	static bool materialize(StackState& s, std::size_t depth)
	{
		if (s.values.size() >= depth)
			return true;
		if (!s.bottom_unknown)
			return false;
		s.values.insert(s.values.begin(), depth - s.values.size(), AbstractValue{});
		return true;
	}

	std::optional<std::size_t> jump_target(AbstractValue const& target) const
	{
		if (!target.constant || *target.constant >= m_code_size)
			return std::nullopt;
		auto const it = m_jumpdests.find(static_cast<std::size_t>(*target.constant));
		if (it == m_jumpdests.end())
			return std::nullopt;
		return it->second;
	}

	AbstractValue compute(Instruction const& ins, std::vector<AbstractValue> const& args) const
	{
		AbstractValue r;
		for (auto const& a: args)
			r.taint |= a.taint;
		r.taint |= source_taint(ins.opcode);
		r.constant = fold(ins.opcode, args);
		switch (ins.opcode)
		{
		case op::PC: r.constant = ins.pc; break;
		case op::CODESIZE: r.constant = m_code_size; break;
		case op::LT:
		case op::GT:
		case op::SLT:
		case op::SGT:
		case op::EQ:
		{
			Comparison c;
			c.opcode = ins.opcode;
			c.pc = ins.pc;
			for (std::size_t k = 0; k < 2; ++k)
			{
				c.constants[k] = args[k].constant;
				c.taints[k] = args[k].taint;
			}
			r.comparison = c;
			if (ins.opcode == op::EQ)
			{
				if ((args[0].taint | args[1].taint) & taint_balance)
					r.taint |= taint_balance_equality;
				for (std::size_t k = 0; k < 2; ++k)
					if (args[k].constant && args[k].push_width == 4 && (args[1 - k].taint & taint_calldata))
						r.selector = static_cast<std::uint32_t>(*args[k].constant);
			}
			break;
		}
		case op::ISZERO:
			r.comparison = args[0].comparison;
			r.selector = args[0].selector;
			r.negated = !args[0].negated;
			break;
		default: break;
		}
		return r;
	}

	void emulate(std::size_t id, StackState state, bool local_only)
	{
		auto& block = m_cfg.blocks[id];
		if (!local_only)
			m_visits[id].processed = true;
		for (auto const& ins: block.instructions)
		{
			++m_steps;
			auto const& info = opcode_info(ins.opcode);
			if (is_push(ins.opcode))
			{
				AbstractValue v;
				v.constant = ins.push_value();
				v.push_width = push_size(ins.opcode);
				state.values.push_back(std::move(v));
			}
			else if (is_dup(ins.opcode))
			{
				std::size_t const n = ins.opcode - op::DUP1 + 1u;
				if (!materialize(state, n))
					return underflow(block);
				state.values.push_back(state.values[state.values.size() - n]);
			}
			else if (is_swap(ins.opcode))
			{
				std::size_t const n = ins.opcode - op::SWAP1 + 1u;
				if (!materialize(state, n + 1))
					return underflow(block);
				std::swap(state.values.back(), state.values[state.values.size() - 1 - n]);
			}
			else if (ins.opcode == op::JUMP)
			{
				if (!materialize(state, 1))
					return underflow(block);
				auto const target = state.values.back();
				state.values.pop_back();
				follow(block, target, state, local_only);
				return;
			}
			else if (ins.opcode == op::JUMPI)
			{
				if (!materialize(state, 2))
					return underflow(block);
				auto const target = state.values.back();
				state.values.pop_back();
				auto const condition = state.values.back();
				state.values.pop_back();
				if (!local_only)
				{
					BranchRecord record{condition, jump_target(target)};
					if (block.branches.size() < 64 &&
						std::find(block.branches.begin(), block.branches.end(), record) == block.branches.end())
						block.branches.push_back(std::move(record));
				}
				follow(block, target, state, local_only);
				if (block.fallthrough)
				{
					m_edges[id].insert(*block.fallthrough);
					if (!local_only)
						enqueue(*block.fallthrough, state);
				}
				return;
			}
			else if (!ins.is_valid())
				return;
			else
			{
				if (!materialize(state, info.inputs))
					return underflow(block);
				std::vector<AbstractValue> args(info.inputs);
				for (std::size_t i = 0; i < info.inputs; ++i)
				{
					args[i] = std::move(state.values.back());
					state.values.pop_back();
				}
				if (info.outputs == 1)
					state.values.push_back(compute(ins, args));
			}
			if (state.values.size() > 1024)
				return;
		}
		if (block.terminator == Terminator::fallthrough && block.fallthrough)
		{
			m_edges[id].insert(*block.fallthrough);
			if (!local_only)
				enqueue(*block.fallthrough, std::move(state));
		}
	}

	void follow(BasicBlock& block, AbstractValue const& target, StackState const& state, bool local_only)
	{
		if (!target.constant)
		{
			block.has_unknown_successor = true;
			return;
		}
		if (auto dest = jump_target(target))
		{
			m_edges[block.id].insert(*dest);
			if (!local_only)
				enqueue(*dest, state);
		}
	}

	void underflow(BasicBlock& block) { block.stack_underflow = true; }

	CfgOptions m_options;
	ControlFlowGraph m_cfg;
	std::size_t m_code_size = 0;
	std::map<std::size_t, std::size_t> m_jumpdests;
	std::vector<std::set<std::size_t>> m_edges;
	std::vector<Visits> m_visits;
	std::deque<std::pair<std::size_t, StackState>> m_queue;
	std::size_t m_steps = 0;
};

}

ControlFlowGraph build_cfg(std::vector<Instruction> const& instructions, CfgOptions const& options)
{
	return Builder(instructions, options).run();
}

std::vector<std::optional<std::size_t>> compute_dominators(std::vector<BasicBlock> const& blocks, std::size_t entry)
{
	std::vector<std::optional<std::size_t>> idom(blocks.size());
	if (entry >= blocks.size())
		return idom;

	// Reverse postorder by iterative DFS.
	std::vector<std::size_t> postorder;
	std::vector<char> visited(blocks.size(), 0);
	std::vector<std::pair<std::size_t, std::size_t>> stack{{entry, 0}};
	visited[entry] = 1;
	while (!stack.empty())
	{
		auto& [node, next] = stack.back();
		auto const& succ = blocks[node].successors;
		if (next < succ.size())
		{
			auto const s = succ[next++];
			if (!visited[s])
			{
				visited[s] = 1;
				stack.emplace_back(s, 0);
			}
		}
		else
		{
			postorder.push_back(node);
			stack.pop_back();
		}
	}
	std::vector<std::size_t> order(blocks.size(), 0);
	for (std::size_t i = 0; i < postorder.size(); ++i)
		order[postorder[i]] = i;
	std::vector<std::vector<std::size_t>> preds(blocks.size());
	for (auto const n: postorder)
		for (auto const s: blocks[n].successors)
			preds[s].push_back(n);

	auto intersect = [&](std::size_t a, std::size_t b) {
		while (a != b)
		{
			while (order[a] < order[b])
				a = *idom[a];
			while (order[b] < order[a])
				b = *idom[b];
		}
		return a;
	};

	idom[entry] = entry;
	bool changed = true;
	while (changed)
	{
		changed = false;
		for (auto it = postorder.rbegin(); it != postorder.rend(); ++it)
		{
			auto const b = *it;
			if (b == entry)
				continue;
			std::optional<std::size_t> candidate;
			for (auto const p: preds[b])
				if (idom[p])
					candidate = candidate ? intersect(p, *candidate) : p;
			if (candidate && idom[b] != candidate)
			{
				idom[b] = candidate;
				changed = true;
			}
		}
	}
	return idom;
}

std::vector<Loop> detect_loops(ControlFlowGraph const& cfg)
{
	std::map<std::size_t, Loop> by_header;
	auto const preds = cfg.predecessors();
	for (auto const& b: cfg.blocks)
	{
		if (b.id >= cfg.idom.size() || !cfg.idom[b.id])
			continue;
		for (auto const h: b.successors)
		{
			if (!cfg.dominates(h, b.id))
				continue;
			auto& loop = by_header[h];
			loop.header = h;
			loop.back_edge_sources.push_back(b.id);
			loop.body.insert(h);
			std::vector<std::size_t> work;
			if (loop.body.insert(b.id).second)
				work.push_back(b.id);
			while (!work.empty())
			{
				auto const n = work.back();
				work.pop_back();
				for (auto const p: preds[n])
					if (cfg.idom[p] && loop.body.insert(p).second)
						work.push_back(p);
			}
		}
	}

	std::vector<Loop> loops;
	for (auto& [header, loop]: by_header)
	{
		for (auto const id: loop.body)
		{
			auto const& b = cfg.blocks[id];
			if (b.terminator != Terminator::jumpi || b.branches.empty())
				continue;
			bool const exits = std::any_of(b.successors.begin(), b.successors.end(),
				[&](std::size_t s) { return !loop.body.count(s); });
			if (!exits)
				continue;
			for (std::size_t k = 0; k < 2 && !loop.bound; ++k)
			{
				auto const& first = b.branches.front().condition.comparison;
				if (!first || !first->constants[k])
					continue;
				auto const c = *first->constants[k];
				bool const all = std::all_of(b.branches.begin(), b.branches.end(), [&](BranchRecord const& r) {
					auto const& cmp = r.condition.comparison;
					return cmp && cmp->constants[k] == c && cmp->taints[k] == 0 && cmp->taints[1 - k] == 0;
				});
				if (all)
					loop.bound = c;
			}
			if (loop.bound)
				break;
		}
		loops.push_back(std::move(loop));
	}
	return loops;
}

SelectorTable extract_selectors(ControlFlowGraph const& cfg)
{
	SelectorTable table;
	for (auto const& b: cfg.blocks)
	{
		if (!b.reachable)
			continue;
		for (auto const& r: b.branches)
		{
			if (!r.condition.selector)
				continue;
			auto const entry = r.condition.negated ? b.fallthrough : r.target;
			if (entry)
				table.emplace(*r.condition.selector, *entry);
		}
	}
	return table;
}

}
