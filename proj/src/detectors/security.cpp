#include "common.hpp"

#include <soldefect/evm/opcodes.hpp>

#include <algorithm>
#include <map>

namespace soldefect
{

using namespace detail;

namespace
{

bool returns_status(ExternalCallKind kind)
{
	return kind != ExternalCallKind::transfer && kind != ExternalCallKind::contract_call;
}

std::string line_of(Expression const& e)
{
	return std::to_string(e.span.line);
}

}

std::vector<Finding> detect_unchecked_external_calls(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
		walk(*b.body, [&](Statement const& s) {
			if (s.kind != StmtKind::expression || !s.expression)
				return true;
			auto const call = decode_external_call(*s.expression, &b.facts->symbols);
			if (call && returns_status(call->kind))
				out.push_back(source_finding(ctx, "D01", s.span,
					"return value of " + std::string(to_string(call->kind)) + " is not checked"));
			return true;
		});
	return out;
}

std::vector<Finding> detect_dos_under_external_influence(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		auto const& symbols = b.facts->symbols;
		walk(*b.body, [&](Statement const& loop) {
			if (!is_loop(loop) || !loop.body || has_constant_bound(loop, symbols))
				return true;
			walk(*loop.body, [&](Statement const& s) {
				if (s.kind == StmtKind::throw_)
					out.push_back(source_finding(ctx, "D02", s.span, "throw inside a loop with a non-constant bound"));
				for (auto const* root: own_expressions(s))
					walk(*root, [&](Expression const& e) {
						if (e.kind != ExprKind::call)
							return true;
						if (auto call = decode_external_call(e, &symbols); call && call->kind == ExternalCallKind::transfer)
							out.push_back(source_finding(ctx, "D02", e.span,
								"transfer inside a loop with a non-constant bound reverts every iteration if one "
								"recipient fails"));
						for (std::string_view name: {"require", "assert", "revert"})
							if (is_builtin_call(e, name, symbols))
								out.push_back(source_finding(ctx, "D02", e.span,
									std::string(name) + " inside a loop with a non-constant bound"));
						return true;
					});
				return true;
			});
			return false;
		});
	}
	return out;
}

std::vector<Finding> detect_strict_balance_equality(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	bool const neq = ctx.config && ctx.config->balance_neq;
	if (ctx.source)
		for (auto const& b: declared_bodies(*ctx.source))
		{
			std::set<std::uint32_t> seen;
			for (auto const* root: condition_roots(*b.body))
				walk(*root, [&](Expression const& e) {
					if (e.kind != ExprKind::binary || (e.name != "==" && !(neq && e.name == "!=")))
						return true;
					if (!is_self_balance(e.operand(0)) && !is_self_balance(e.operand(1)))
						return true;
					if (!seen.insert(e.span.byte_offset).second)
						return true;
					auto f = source_finding(ctx, "D03", e.span,
						e.name == "=="
							? "contract balance compared with == in a branch condition"
							: "contract balance compared with != in a branch condition (informational)");
					if (e.name == "!=")
						f.impact = Impact::IP5;
					out.push_back(std::move(f));
					return true;
				});
		}
	if (ctx.bytecode)
		for (auto const& block: ctx.bytecode->cfg.blocks)
		{
			if (block.terminator != evm::Terminator::jumpi || block.instructions.empty())
				continue;
			for (auto const& r: block.branches)
				if (r.condition.taint & evm::taint_balance_equality)
				{
					out.push_back(bytecode_finding(ctx, "D03", block.instructions.back().pc, block.id,
						"JUMPI condition depends on EQ over a BALANCE value"));
					break;
				}
		}
	return out;
}

std::vector<Finding> detect_unmatched_type_assignment(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		auto const& symbols = b.facts->symbols;
		walk(*b.body, [&](Statement const& loop) {
			if (loop.kind != StmtKind::for_ || !loop.condition || loop.condition->kind != ExprKind::binary)
				return true;
			auto const& cond = *loop.condition;
			if (cond.name != "<" && cond.name != "<=" && cond.name != ">" && cond.name != ">=" && cond.name != "!=")
				return true;
			VariableDeclaration const* counter = nullptr;
			Span location = loop.span;
			if (loop.init && loop.init->kind == StmtKind::variable_declaration && loop.init->declarations.size() == 1)
			{
				counter = &loop.init->declarations.front();
				location = counter->span;
			}
			else if (loop.init && loop.init->kind == StmtKind::expression && loop.init->expression &&
				loop.init->expression->kind == ExprKind::assignment)
				counter = root_variable(loop.init->expression->operand(0), symbols);
			if (!counter)
				return true;

			Expression const* bound = nullptr;
			for (std::size_t k = 0; k < 2; ++k)
				if (cond.operand(k).kind == ExprKind::identifier)
					if (auto const* s = symbols.resolve(cond.operand(k)); s && s->variable == counter)
						bound = &cond.operand(1 - k);
			if (!bound)
				return true;

			std::optional<TypeName> counter_type;
			if (counter->type.kind == TypeKind::var_inferred)
			{
				auto const* init = counter->initializer ? counter->initializer.get() : loop.init->initializer.get();
				counter_type = infer_var_type(init, &symbols);
			}
			else
				counter_type = counter->type;
			auto const bound_type = static_type(*bound, &symbols);
			if (!counter_type || !bound_type || !counter_type->is_integer() || !bound_type->is_integer())
				return true;
			if (counter_type->bit_width >= bound_type->bit_width)
				return true;
			if (auto v = constant_value(*bound))
			{
				unsigned const usable = counter_type->bit_width - (counter_type->is_signed ? 1 : 0);
				if (*v >= 0 && *v < (boost::multiprecision::cpp_int(1) << usable))
					return true;
			}
			out.push_back(source_finding(ctx, "D04", location,
				"loop counter '" + counter->name + "' of type " + counter_type->canonical() +
					" is narrower than its bound of type " + bound_type->canonical()));
			return true;
		});
	}
	return out;
}

std::vector<Finding> detect_transaction_state_dependency(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	bool const all_uses = ctx.config && ctx.config->tx_origin_all_uses;
	auto is_origin = [](Expression const& e) {
		return e.kind == ExprKind::member_access && member_chain(e) == "tx.origin";
	};
	for (auto const& b: declared_bodies(*ctx.source))
	{
		std::set<std::uint32_t> seen;
		auto report = [&](Expression const& root, char const* where) {
			walk(root, [&](Expression const& e) {
				if (is_origin(e) && seen.insert(e.span.byte_offset).second)
					out.push_back(source_finding(ctx, "D05", e.span, std::string("tx.origin used ") + where));
				return true;
			});
		};
		if (all_uses)
			for_each_expression(*b.body, [&](Expression const& root) { report(root, "in the contract logic"); });
		for (auto const* root: condition_roots(*b.body))
			report(*root, "in a condition");
		if (b.modifier)
			for_each_expression(*b.body, [&](Expression const& root) {
				walk(root, [&](Expression const& e) {
					if (e.kind == ExprKind::binary && (e.name == "==" || e.name == "!="))
						report(e, "in a comparison inside a modifier");
					return true;
				});
			});
	}
	return out;
}

namespace
{

bool is_block_source(Expression const& e, SymbolTable const& symbols)
{
	if (e.kind == ExprKind::member_access)
	{
		auto const chain = member_chain(e);
		return chain == "block.timestamp" || chain == "block.number" || chain == "block.difficulty" ||
			chain == "block.coinbase";
	}
	if (e.kind == ExprKind::identifier && e.name == "now")
	{
		auto const* s = symbols.resolve(e);
		return !s || s->kind == SymbolKind::builtin;
	}
	if (e.kind == ExprKind::call)
		return member_chain(e.callee()) == "block.blockhash" || is_builtin_call(e, "blockhash", symbols);
	return false;
}

/// Outermost block-information reads inside `root`.
std::vector<Expression const*> block_sources(Expression const& root, SymbolTable const& symbols)
{
	std::vector<Expression const*> out;
	walk(root, [&](Expression const& e) {
		if (is_block_source(e, symbols))
		{
			out.push_back(&e);
			return false;
		}
		return true;
	});
	return out;
}

}

std::vector<Finding> detect_block_info_dependency(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		auto const& symbols = b.facts->symbols;
		auto const flows = assignments(*b.body, symbols);
		std::map<VariableDeclaration const*, std::set<Expression const*>> taint;

		auto sources_of = [&](Expression const& e) {
			std::set<Expression const*> s;
			for (auto const* src: block_sources(e, symbols))
				s.insert(src);
			for (auto const* v: variables_read(e, symbols))
				if (auto it = taint.find(v); it != taint.end())
					s.insert(it->second.begin(), it->second.end());
			return s;
		};
		for (bool changed = true; changed;)
		{
			changed = false;
			for (auto const& a: flows)
			{
				auto const s = sources_of(*a.value);
				for (auto const* t: a.targets)
					for (auto const* src: s)
						changed |= taint[t].insert(src).second;
			}
		}

		std::map<Expression const*, std::string> hits;
		auto sink = [&](Expression const& e, std::string const& what) {
			for (auto const* src: sources_of(e))
				hits.emplace(src, what);
		};
		for (auto const* root: condition_roots(*b.body))
			sink(*root, "a branch condition");
		for_each_expression(*b.body, [&](Expression const& root) {
			walk(root, [&](Expression const& e) {
				if (e.kind == ExprKind::index_access && e.operands.size() > 1 && e.operands[1])
					sink(*e.operands[1], "an array index at line " + line_of(e));
				return true;
			});
			for (auto const& call: collect_external_calls(root, &symbols))
				if (call.transfers_ether())
				{
					if (call.value)
						sink(*call.value, "an Ether amount at line " + line_of(*call.expression));
					if (call.target)
						sink(*call.target, "an Ether recipient at line " + line_of(*call.expression));
				}
		});
		for (auto const& [src, what]: hits)
		{
			auto text = src->kind == ExprKind::call ? member_chain(src->callee()) : member_chain(*src);
			out.push_back(source_finding(ctx, "D06", src->span, text + " flows into " + what));
		}
	}
	return out;
}

namespace
{

bool is_value_call(ExternalCall const& call)
{
	return call.kind == ExternalCallKind::call && call.value && call.invoked;
}

/// Expressions that may run after `stmt` (reached through `parents`) on some path.
std::vector<Expression const*> expressions_after(Statement const& stmt, std::vector<Statement const*> const& parents,
	SymbolTable const& symbols)
{
	std::vector<Expression const*> out;
	auto add_all = [&](Statement const& s) {
		for_each_expression(s, [&](Expression const& e) { out.push_back(&e); });
	};
	for (auto const* child: {&stmt.then_branch, &stmt.else_branch, &stmt.body})
		if (*child)
			add_all(**child);
	if (is_loop(stmt))
		add_all(stmt);

	Statement const* child = &stmt;
	for (auto it = parents.rbegin(); it != parents.rend(); ++it)
	{
		auto const& parent = **it;
		if (parent.kind == StmtKind::block)
		{
			bool after = false;
			for (auto const& s: parent.statements)
			{
				if (after)
				{
					add_all(*s);
					if (is_terminating(*s, symbols))
						return out;
				}
				else if (s.get() == child)
				{
					after = true;
					if (is_terminating(*s, symbols))
						return out;
				}
			}
		}
		else if (is_loop(parent))
			add_all(parent);
		child = &parent;
	}
	return out;
}

}

std::vector<Finding> detect_reentrancy(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		if (!b.function)
			continue;
		auto const& symbols = b.facts->symbols;
		auto is_state = [&](VariableDeclaration const* v) {
			return symbols.kind_of(*v) == SymbolKind::state_variable;
		};

		// State variables each local is derived from.
		auto const flows = assignments(*b.body, symbols);
		std::map<VariableDeclaration const*, std::set<VariableDeclaration const*>> origin;
		for (bool changed = true; changed;)
		{
			changed = false;
			for (auto const& a: flows)
			{
				std::set<VariableDeclaration const*> from;
				for (auto const* v: variables_read(*a.value, symbols))
				{
					if (is_state(v))
						from.insert(v);
					else if (auto it = origin.find(v); it != origin.end())
						from.insert(it->second.begin(), it->second.end());
				}
				for (auto const* t: a.targets)
					if (!is_state(t))
						for (auto const* v: from)
							changed |= origin[t].insert(v).second;
			}
		}
		auto state_behind = [&](Expression const& e) {
			std::set<VariableDeclaration const*> s;
			for (auto const* v: variables_read(e, symbols))
			{
				if (is_state(v))
					s.insert(v);
				else if (auto it = origin.find(v); it != origin.end())
					s.insert(it->second.begin(), it->second.end());
			}
			return s;
		};
		auto const conditions = condition_roots(*b.body);

		walk_with_parents(*b.body, [&](Statement const& stmt, std::vector<Statement const*> const& parents) {
			for (auto const* root: own_expressions(stmt))
				for (auto const& call: collect_external_calls(*root, &symbols))
				{
					if (!is_value_call(call))
						continue;
					std::set<VariableDeclaration const*> guard = state_behind(*call.value);
					for (auto const* c: conditions)
						if (c->span.byte_offset < call.expression->span.byte_offset)
						{
							auto const s = state_behind(*c);
							guard.insert(s.begin(), s.end());
						}
					std::set<VariableDeclaration const*> written;
					for (auto const* e: expressions_after(stmt, parents, symbols))
					{
						auto const w = state_writes(*e, symbols);
						written.insert(w.begin(), w.end());
					}
					for (auto const* v: guard)
						if (written.count(v))
						{
							out.push_back(source_finding(ctx, "D07", call.expression->span,
								"state variable '" + v->name + "' guarding this call.value is written after the "
								"call"));
							break;
						}
				}
		});
	}
	return out;
}

std::vector<Finding> detect_nested_call(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (ctx.source)
		for (auto const& b: declared_bodies(*ctx.source))
		{
			auto const& symbols = b.facts->symbols;
			walk_with_parents(*b.body, [&](Statement const& stmt, std::vector<Statement const*> const& parents) {
				for (auto const* root: own_expressions(stmt))
					for (auto const& call: collect_external_calls(*root, &symbols))
					{
						if (call.kind == ExternalCallKind::contract_call || !call.invoked)
							continue;
						Statement const* loop = nullptr;
						if (is_loop(stmt) && !has_constant_bound(stmt, symbols))
							loop = &stmt;
						for (auto it = parents.rbegin(); !loop && it != parents.rend(); ++it)
							if (is_loop(**it) && !has_constant_bound(**it, symbols))
								loop = *it;
						if (loop)
							out.push_back(source_finding(ctx, "D08", loop->span,
								std::string(to_string(call.kind)) + " at line " + line_of(*call.expression) +
									" runs inside a loop with a non-constant bound"));
					}
			});
		}
	if (ctx.bytecode)
	{
		auto const& cfg = ctx.bytecode->cfg;
		for (auto const& loop: cfg.loops)
		{
			if (loop.is_bounded())
				continue;
			for (auto const id: loop.body)
			{
				auto const& instructions = cfg.blocks[id].instructions;
				auto const it = std::find_if(instructions.begin(), instructions.end(),
					[](evm::Instruction const& i) { return evm::is_call(i.opcode); });
				if (it != instructions.end())
				{
					out.push_back(bytecode_finding(ctx, "D08", cfg.blocks[loop.header].start_pc(), loop.header,
						"loop without a constant bound contains " + std::string(it->mnemonic) + " at pc " +
							std::to_string(it->pc)));
					break;
				}
			}
		}
	}
	return out;
}

std::vector<Finding> detect_misleading_data_location(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
		walk(*b.body, [&](Statement const& s) {
			if (s.kind != StmtKind::variable_declaration)
				return true;
			for (auto const& d: s.declarations)
			{
				if (d.location != DataLocation::unspecified)
					continue;
				bool reference = d.type.kind == TypeKind::array || d.type.kind == TypeKind::mapping;
				if (d.type.kind == TypeKind::user_defined)
				{
					auto const& name = d.type.name;
					auto const dot = name.rfind('.');
					reference = b.facts->view.find_struct(name) ||
						(dot != std::string::npos && b.facts->view.find_struct(name.substr(dot + 1)));
				}
				if (reference)
					out.push_back(source_finding(ctx, "D09", d.span,
						"local variable '" + d.name + "' of type " + d.type.canonical() +
							" has no data location and defaults to storage"));
			}
			return true;
		});
	return out;
}

}
