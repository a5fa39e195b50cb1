#include "common.hpp"

#include <soldefect/evm/keccak.hpp>
#include <soldefect/evm/opcodes.hpp>

#include <algorithm>
#include <array>

namespace soldefect
{

using namespace detail;

namespace
{

struct StandardFunction
{
	std::string_view name;
	std::string_view parameters;
	std::string_view returns;
	bool mandatory;

	std::string signature() const { return std::string(name) + "(" + std::string(parameters) + ")"; }
};

constexpr std::array<StandardFunction, 9> erc20_functions{{
	{"totalSupply", "", "uint256", true},
	{"balanceOf", "address", "uint256", true},
	{"transfer", "address,uint256", "bool", true},
	{"transferFrom", "address,address,uint256", "bool", true},
	{"approve", "address,uint256", "bool", true},
	{"allowance", "address,address", "uint256", true},
	{"name", "", "string", false},
	{"symbol", "", "string", false},
	{"decimals", "", "uint8", false},
}};

constexpr std::array<std::string_view, 2> erc20_events{
	"Transfer(address,address,uint256)", "Approval(address,address,uint256)"};

/// An externally visible function, declared or generated as a public state variable getter.
struct Interface
{
	std::string signature;
	std::vector<std::string> returns;
	Span span;
};

std::vector<Interface> external_interface(ContractView const& view)
{
	std::vector<Interface> out;
	for (auto const* fn: view.functions)
	{
		if (fn->kind != FunctionKind::function || !fn->is_externally_callable())
			continue;
		Interface i{fn->signature(), {}, fn->span};
		for (auto const& r: fn->returns)
			i.returns.push_back(r.type.canonical());
		out.push_back(std::move(i));
	}
	for (auto const* v: view.state_variables)
	{
		if (v->visibility != Visibility::public_)
			continue;
		std::vector<std::string> params;
		TypeName const* t = &v->type;
		while (t && (t->kind == TypeKind::mapping || t->kind == TypeKind::array) && t->element)
		{
			params.push_back(t->kind == TypeKind::mapping && t->key ? t->key->canonical() : "uint256");
			t = t->element.get();
		}
		std::string sig = v->name + "(";
		for (std::size_t k = 0; k < params.size(); ++k)
			sig += (k ? "," : "") + params[k];
		out.push_back({sig + ")", {t ? t->canonical() : std::string()}, v->span});
	}
	return out;
}

std::string join(std::vector<std::string> const& items)
{
	std::string s;
	for (auto const& item: items)
		s += (s.empty() ? "" : ", ") + item;
	return s;
}

std::vector<Finding> erc20_bytecode(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	auto const& bc = *ctx.bytecode;
	bool any = false;
	std::vector<std::string> missing;
	for (auto const& f: erc20_functions)
	{
		if (!f.mandatory)
			continue;
		if (bc.selectors.count(evm::selector(f.signature())))
			any = true;
		else
			missing.push_back(f.signature() + " [0x" + evm::selector_hex(evm::selector(f.signature())) + "]");
	}
	if (!any)
		return out;
	for (auto const event: erc20_events)
	{
		auto const hash = evm::keccak256(event);
		auto const topic = from_big_endian(hash);
		bool found = false;
		for (auto const& i: bc.instructions)
			if (i.opcode == evm::op::PUSH32 && !i.truncated && i.push_value() == topic)
				found = true;
		if (!found)
			missing.push_back("event " + std::string(event));
	}
	if (!missing.empty())
		out.push_back(bytecode_finding(ctx, "D10", bc.cfg.blocks.empty() ? 0 : bc.cfg.blocks[bc.cfg.entry].start_pc(),
			bc.cfg.entry, "ERC-20 dispatcher is missing " + join(missing)));
	return out;
}

}

std::vector<Finding> detect_unmatched_erc20(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (ctx.bytecode)
		out = erc20_bytecode(ctx);
	if (!ctx.source)
		return out;
	for (auto const* c: deployable_contracts(*ctx.source))
	{
		auto const interface = external_interface(c->view);
		auto find = [&](std::string const& sig) -> Interface const* {
			for (auto const& i: interface)
				if (i.signature == sig)
					return &i;
			return nullptr;
		};
		bool gated = false;
		for (auto const& f: erc20_functions)
			if (f.mandatory && find(f.signature()))
				gated = true;
		if (!gated)
			continue;

		std::vector<std::string> missing;
		for (auto const& f: erc20_functions)
		{
			auto const* i = find(f.signature());
			if (!i)
			{
				if (f.mandatory)
					missing.push_back(f.signature());
				continue;
			}
			if (i->returns.size() != 1 || i->returns.front() != f.returns)
				out.push_back(source_finding(ctx, "D10", i->span,
					f.signature() + " returns (" + join(i->returns) + ") instead of (" + std::string(f.returns) + ")"));
		}
		for (auto const event: erc20_events)
		{
			bool found = false;
			for (auto const* e: c->view.events)
				found |= e->signature() == event;
			if (!found)
				missing.push_back("event " + std::string(event));
		}
		if (!missing.empty())
			out.push_back(source_finding(ctx, "D10", c->contract->span,
				"token contract '" + c->contract->name + "' is missing " + join(missing)));
	}
	return out;
}

namespace
{

bool emits_event(Statement const& body, SymbolTable const& symbols)
{
	bool found = false;
	walk(body, [&](Statement const& s) {
		if (s.kind == StmtKind::emit)
			found = true;
		else if (s.kind == StmtKind::expression && s.expression && s.expression->kind == ExprKind::call &&
			s.expression->callee().kind == ExprKind::identifier)
			if (auto const* sym = symbols.resolve(s.expression->callee()); sym && sym->kind == SymbolKind::event)
				found = true;
		return !found;
	});
	return found;
}

bool may_revert(Statement const& body, SymbolTable const& symbols)
{
	bool found = false;
	walk(body, [&](Statement const& s) {
		if (s.kind == StmtKind::throw_)
			found = true;
		return !found;
	});
	for_each_expression(body, [&](Expression const& root) {
		walk(root, [&](Expression const& e) {
			for (std::string_view name: {"require", "assert", "revert"})
				found |= is_builtin_call(e, name, symbols);
			return true;
		});
	});
	return found;
}

bool writes_state(Statement const& body, SymbolTable const& symbols)
{
	bool found = false;
	for_each_expression(body, [&](Expression const& root) { found |= !state_writes(root, symbols).empty(); });
	return found;
}

}

std::vector<Finding> detect_missing_reminder(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		if (!b.function || !b.function->is_payable)
			continue;
		auto const& symbols = b.facts->symbols;
		bool const acts = writes_state(*b.body, symbols) || may_revert(*b.body, symbols);
		if (acts && !emits_event(*b.body, symbols))
			out.push_back(source_finding(ctx, "D11", b.function->span,
				"payable function '" + b.function->display_name() + "' changes state or rejects Ether without "
				"emitting an event"));
	}
	return out;
}

namespace
{

bool contains_break(Statement const& body)
{
	bool found = false;
	walk(body, [&](Statement const& s) {
		if (s.kind == StmtKind::break_)
			found = true;
		// A break inside a nested loop leaves only that loop.
		return !found && (&s == &body || !is_loop(s));
	});
	return found;
}

bool always_exits(Statement const& s, SymbolTable const& symbols)
{
	switch (s.kind)
	{
	case StmtKind::block:
		for (auto const& child: s.statements)
			if (child && always_exits(*child, symbols))
				return true;
		return false;
	case StmtKind::if_:
		return s.then_branch && s.else_branch && always_exits(*s.then_branch, symbols) &&
			always_exits(*s.else_branch, symbols);
	case StmtKind::return_:
	case StmtKind::throw_:
	case StmtKind::inline_assembly:
		return true;
	case StmtKind::expression:
		return is_terminating(s, symbols);
	case StmtKind::while_:
	case StmtKind::for_:
	{
		bool const forever = !s.condition ||
			(s.condition->kind == ExprKind::literal && s.condition->literal_kind == LiteralKind::boolean &&
				s.condition->literal_text == "true");
		return forever && !(s.body && contains_break(*s.body));
	}
	case StmtKind::do_while:
		return s.body && always_exits(*s.body, symbols);
	default:
		return false;
	}
}

}

std::vector<Finding> detect_missing_return_statement(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const& b: declared_bodies(*ctx.source))
	{
		auto const* fn = b.function;
		if (!fn || fn->returns.empty())
			continue;
		bool const named = std::any_of(fn->returns.begin(), fn->returns.end(), [](auto const& r) { return !r.name.empty(); });
		if (named || always_exits(*b.body, b.facts->symbols))
			continue;
		std::string types;
		for (auto const& r: fn->returns)
			types += (types.empty() ? "" : ",") + r.type.canonical();
		out.push_back(source_finding(ctx, "D12", fn->span,
			"function '" + fn->display_name() + "' declares returns (" + types + ") but can finish without a "
			"return statement"));
	}
	return out;
}

std::vector<Finding> detect_greedy_contract(AnalysisContext const& ctx)
{
	std::vector<Finding> out;
	if (!ctx.source)
		return out;
	for (auto const* c: deployable_contracts(*ctx.source))
	{
		auto const* payable = first_payable(c->view);
		if (!payable)
			continue;
		bool releases = false;
		for (auto const& b: view_bodies(*c))
		{
			walk(*b.body, [&](Statement const& s) {
				releases |= s.kind == StmtKind::inline_assembly;
				return true;
			});
			for_each_expression(*b.body, [&](Expression const& root) {
				for (auto const& call: collect_external_calls(root, &c->symbols))
					releases |= call.transfers_ether() || call.kind == ExternalCallKind::delegatecall ||
						call.kind == ExternalCallKind::callcode;
				walk(root, [&](Expression const& e) {
					releases |= is_selfdestruct_call(e, c->symbols);
					return true;
				});
			});
		}
		if (!releases)
			out.push_back(source_finding(ctx, "D13", c->contract->span,
				"contract '" + c->contract->name + "' accepts Ether (payable " + payable->display_name() +
					") but never sends Ether or self-destructs"));
	}
	return out;
}

}
