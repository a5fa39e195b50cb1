#include "common.hpp"

#include <soldefect/evm/eip55.hpp>
#include <soldefect/evm/opcodes.hpp>

#include <algorithm>
#include <deque>

namespace soldefect
{

using namespace detail;

std::vector<Finding> detect_unused_statement(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& c: ctx.source->contracts)
		for (auto const& [fn, facts]: c->def_use)
			for (auto const& v: facts.variables)
			{
				if (v.live || !v.declaration || v.kind == SymbolKind::return_parameter)
					continue;
				auto const what = v.kind == SymbolKind::parameter ? "parameter" : "local variable";
				out.push_back(source_finding(ctx, "D14", v.declaration->span,
					std::string(what) + " '" + v.declaration->name + "' in '" + fn->display_name() +
						"' does not affect the result"));
			}
	return out;
}

namespace
{

bool is_array_like(TypeName const& t)
{
	return t.kind == TypeKind::array ||
		(t.kind == TypeKind::elementary && (t.name == "bytes" || t.name == "string"));
}

}

std::vector<Finding> detect_high_gas_function_type(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& c: ctx.source->contracts)
		for (auto const& fn: c->contract->functions)
		{
			if (fn.kind != FunctionKind::function || !fn.body || !fn.is_public())
				continue;
			auto const param = std::find_if(fn.parameters.begin(), fn.parameters.end(),
				[](VariableDeclaration const& p) { return is_array_like(p.type); });
			if (param == fn.parameters.end())
				continue;
			bool called = false;
			for (auto const& other: ctx.source->contracts)
				if (auto i = other->call_graph.index_of(&fn))
					called |= other->call_graph.in_degree(*i) > 0;
			if (!called)
				out.push_back(source_finding(ctx, "D15", fn.span,
					"public function '" + fn.name + "' takes " + param->type.canonical() +
						" and is never called internally; external avoids copying it to memory"));
		}
	return out;
}

namespace
{

bool has_byte_array(TypeName const& t)
{
	if (t.kind == TypeKind::array && t.element && t.element->kind == TypeKind::elementary && t.element->name == "byte")
		return true;
	return (t.element && has_byte_array(*t.element)) || (t.key && has_byte_array(*t.key));
}

}

std::vector<Finding> detect_high_gas_data_type(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	auto check = [&](VariableDeclaration const& d) {
		if (has_byte_array(d.type))
			out.push_back(source_finding(ctx, "D16", d.span,
				"'" + (d.name.empty() ? std::string("<unnamed>") : d.name) + "' is declared as " + d.type.canonical()));
	};
	for (auto const& c: ctx.source->unit.contracts)
	{
		for (auto const& v: c.state_variables)
			check(v);
		for (auto const& s: c.structs)
			for (auto const& m: s.members)
				check(m);
		for (auto const& e: c.events)
			for (auto const& p: e.parameters)
				check(p);
		for (auto const& m: c.modifiers)
		{
			for (auto const& p: m.parameters)
				check(p);
			if (m.body)
				walk(*m.body, [&](Statement const& s) {
					for (auto const& d: s.declarations)
						check(d);
					return true;
				});
		}
		for (auto const& fn: c.functions)
		{
			for (auto const& p: fn.parameters)
				check(p);
			for (auto const& r: fn.returns)
				check(r);
			if (fn.body)
				walk(*fn.body, [&](Statement const& s) {
					for (auto const& d: s.declarations)
						check(d);
					return true;
				});
		}
	}
	return out;
}

std::vector<Finding> detect_hard_code_address(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (ctx.source)
		for (auto const& c: ctx.source->contracts)
			for_each_contract_expression(*c, [&](Expression const& root) {
				walk(root, [&](Expression const& e) {
					if (e.kind != ExprKind::literal || e.literal_kind != LiteralKind::address)
						return true;
					if (e.value && *e.value == 0)
						return true;
					std::string message = "hard-coded address " + e.literal_text;
					try
					{
						if (!evm::eip55_is_valid(e.literal_text))
							message += "; illegal address: EIP-55 checksum mismatch, expected " +
								evm::eip55_checksum(e.literal_text);
					}
					catch (evm::InvalidAddressLiteral const&)
					{
						message += "; illegal address: not 40 hex digits";
					}
					out.push_back(source_finding(ctx, "D17", e.span, std::move(message)));
					return true;
				});
			});
	if (ctx.bytecode)
	{
		uint256 const mask = (uint256(1) << 160) - 1;
		for (auto const& block: ctx.bytecode->cfg.blocks)
		{
			if (!block.reachable)
				continue;
			for (auto const& i: block.instructions)
			{
				if (i.opcode != evm::op::PUSH20 || i.truncated)
					continue;
				auto const v = i.push_value();
				if (v == 0 || v == mask)
					continue;
				out.push_back(bytecode_finding(ctx, "D17", i.pc, block.id, "PUSH20 of constant address 0x" +
					to_hex(bytes_view(i.push_bytes))));
			}
		}
	}
	return out;
}

namespace
{

/// Nodes reachable from the externally callable functions, modifiers included.
std::vector<bool> externally_reachable(CallGraph const& graph)
{
	std::vector<bool> seen(graph.nodes.size(), false);
	std::deque<std::size_t> work;
	for (std::size_t i = 0; i < graph.nodes.size(); ++i)
		if (auto const* fn = graph.nodes[i].function;
			fn && (fn->kind == FunctionKind::fallback ||
				(fn->kind == FunctionKind::function && fn->is_externally_callable())))
		{
			seen[i] = true;
			work.push_back(i);
		}
	while (!work.empty())
	{
		auto const n = work.front();
		work.pop_front();
		for (auto const m: graph.edges[n])
			if (!seen[m])
			{
				seen[m] = true;
				work.push_back(m);
			}
	}
	return seen;
}

Statement const* node_body(CallGraphNode const& node)
{
	if (node.function)
		return node.function->body.get();
	return node.modifier ? node.modifier->body.get() : nullptr;
}

bool checks_caller(Statement const& body)
{
	bool found = false;
	for (auto const* root: condition_roots(body))
		walk(*root, [&](Expression const& e) {
			if (e.kind == ExprKind::binary && (e.name == "==" || e.name == "!="))
				for (std::size_t k = 0; k < 2; ++k)
				{
					auto const chain = member_chain(e.operand(k));
					found |= chain == "msg.sender" || chain == "tx.origin";
				}
			return true;
		});
	return found;
}

bool has_circuit_breaker(ContractFacts const& c, std::vector<bool> const& reachable)
{
	auto const& graph = c.call_graph;
	std::set<VariableDeclaration const*> flags;
	for (auto const* v: c.view.state_variables)
		if (v->type.kind == TypeKind::elementary && v->type.name == "bool")
			flags.insert(v);
	if (flags.empty())
		return false;

	std::set<VariableDeclaration const*> checked;
	std::set<VariableDeclaration const*> guarded_writes;
	for (std::size_t i = 0; i < graph.nodes.size(); ++i)
	{
		auto const* body = node_body(graph.nodes[i]);
		if (!reachable[i] || !body)
			continue;
		for (auto const* root: condition_roots(*body))
			for (auto const* v: variables_read(*root, c.symbols))
				if (flags.count(v))
					checked.insert(v);
		if (!graph.nodes[i].function)
			continue;
		bool guarded = checks_caller(*body);
		for (auto const m: graph.edges[i])
			if (graph.nodes[m].modifier && graph.nodes[m].modifier->body)
				guarded |= checks_caller(*graph.nodes[m].modifier->body);
		if (!guarded)
			continue;
		for_each_expression(*body, [&](Expression const& root) {
			for (auto const* v: state_writes(root, c.symbols))
				if (flags.count(v))
					guarded_writes.insert(v);
		});
	}
	for (auto const* v: checked)
		if (guarded_writes.count(v))
			return true;
	return false;
}

}

std::vector<Finding> detect_missing_interrupter(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const* c: deployable_contracts(*ctx.source))
	{
		auto const* payable = first_payable(c->view);
		if (!payable)
			continue;
		auto const reachable = externally_reachable(c->call_graph);
		bool destructible = false;
		for (std::size_t i = 0; i < c->call_graph.nodes.size(); ++i)
			if (auto const* body = node_body(c->call_graph.nodes[i]); reachable[i] && body)
				for_each_expression(*body, [&](Expression const& root) {
					walk(root, [&](Expression const& e) {
						destructible |= is_selfdestruct_call(e, c->symbols);
						return true;
					});
				});
		if (destructible || has_circuit_breaker(*c, reachable))
			continue;
		out.push_back(source_finding(ctx, "D18", c->contract->span,
			"contract '" + c->contract->name + "' holds Ether but has no reachable selfdestruct and no "
			"owner-controlled stop flag"));
	}
	return out;
}

std::vector<Finding> detect_deprecated_apis(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	std::vector<std::string> const none;
	auto const& extra = ctx.config ? ctx.config->deprecated_extra : none;
	for (auto const& c: ctx.source->contracts)
	{
		auto const& symbols = c->symbols;
		for (auto const& fn: c->contract->functions)
		{
			if (fn.mutability == Mutability::constant)
				out.push_back(source_finding(ctx, "D19", fn.span,
					"function '" + fn.display_name() + "' uses the deprecated constant mutability; use view"));
			if (fn.body)
				walk(*fn.body, [&](Statement const& s) {
					if (s.kind == StmtKind::throw_)
						out.push_back(source_finding(ctx, "D19", s.span, "throw is deprecated; use revert()"));
					return true;
				});
		}
		for (auto const& m: c->contract->modifiers)
			if (m.body)
				walk(*m.body, [&](Statement const& s) {
					if (s.kind == StmtKind::throw_)
						out.push_back(source_finding(ctx, "D19", s.span, "throw is deprecated; use revert()"));
					return true;
				});

		auto builtin_identifier = [&](Expression const& e) {
			auto const* s = symbols.resolve(e);
			return !s || s->kind == SymbolKind::builtin;
		};
		for_each_contract_expression(*c, [&](Expression const& root) {
			walk(root, [&](Expression const& e) {
				if (is_builtin_call(e, "suicide", symbols))
					out.push_back(source_finding(ctx, "D19", e.span, "suicide is deprecated; use selfdestruct"));
				else if (is_builtin_call(e, "sha3", symbols))
					out.push_back(source_finding(ctx, "D19", e.span, "sha3 is deprecated; use keccak256"));
				if (e.kind == ExprKind::member_access)
				{
					auto const chain = member_chain(e);
					if (e.name == "callcode")
						out.push_back(source_finding(ctx, "D19", e.span, "callcode is deprecated; use delegatecall"));
					else if (chain == "block.blockhash")
						out.push_back(source_finding(ctx, "D19", e.span,
							"block.blockhash is deprecated; use blockhash"));
					else if (chain == "msg.gas")
						out.push_back(source_finding(ctx, "D19", e.span, "msg.gas is deprecated; use gasleft()"));
					for (auto const& name: extra)
						if (name == e.name || name == chain)
							out.push_back(source_finding(ctx, "D19", e.span, "'" + name + "' is configured as deprecated"));
				}
				else if (e.kind == ExprKind::identifier)
				{
					for (auto const& name: extra)
						if (name == e.name && builtin_identifier(e))
							out.push_back(source_finding(ctx, "D19", e.span, "'" + name + "' is configured as deprecated"));
				}
				return true;
			});
		});
	}
	return out;
}

std::vector<Finding> detect_unspecified_compiler_version(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	bool any = false;
	for (auto const& p: ctx.source->unit.pragmas)
	{
		if (p.name != "solidity")
			continue;
		any = true;
		if (p.constraint_kind != VersionConstraint::exact)
			out.push_back(source_finding(ctx, "D20", p.span,
				"compiler version '" + p.version_text + "' is not pinned to one release"));
	}
	if (!any)
	{
		Span start;
		start.file_id = ctx.source->unit.file_id;
		out.push_back(source_finding(ctx, "D20", start, "no pragma solidity directive"));
	}
	return out;
}

}
