#include <soldefect/semantic.hpp>

#include <algorithm>
#include <array>
#include <functional>

namespace soldefect
{

namespace mp = boost::multiprecision;

namespace
{

std::string last_segment(std::string const& dotted)
{
	auto const pos = dotted.rfind('.');
	return pos == std::string::npos ? dotted : dotted.substr(pos + 1);
}

ContractDefinition const* find_contract(SourceUnit const& unit, std::string_view name)
{
	for (auto const& c: unit.contracts)
		if (c.name == name)
			return &c;
	return nullptr;
}

std::string function_key(FunctionDefinition const& fn)
{
	if (fn.kind == FunctionKind::fallback)
		return "#fallback";
	if (fn.kind == FunctionKind::constructor)
		return "#constructor";
	return fn.signature();
}

}

// ---------------------------------------------------------------------------------------------
// ContractView

ContractDefinition const* ContractView::owner_of(void const* member) const
{
	auto const it = owner.find(member);
	return it == owner.end() ? nullptr : it->second;
}

StructDefinition const* ContractView::find_struct(std::string_view name) const
{
	auto const short_name = last_segment(std::string(name));
	for (auto const* s: structs)
		if (s->name == short_name)
			return s;
	return nullptr;
}

std::vector<FunctionDefinition const*> ContractView::functions_named(std::string_view name) const
{
	std::vector<FunctionDefinition const*> out;
	for (auto const* f: functions)
		if (f->kind == FunctionKind::function && f->name == name)
			out.push_back(f);
	return out;
}

bool ContractView::declares_contract_type(std::string_view name) const
{
	return unit && find_contract(*unit, last_segment(std::string(name)));
}

ContractView flatten(SourceUnit const& unit, ContractDefinition const& contract, Diagnostics* diagnostics)
{
	ContractView view;
	view.unit = &unit;
	view.contract = &contract;

	std::set<ContractDefinition const*> visited{&contract};
	bool diamond = false;
	std::function<void(ContractDefinition const&)> visit = [&](ContractDefinition const& c) {
		// The right-most base is the most derived one.
		for (auto it = c.bases.rbegin(); it != c.bases.rend(); ++it)
		{
			auto const* base = find_contract(unit, last_segment(*it));
			if (!base)
			{
				if (std::find(view.unresolved_bases.begin(), view.unresolved_bases.end(), *it) ==
					view.unresolved_bases.end())
					view.unresolved_bases.push_back(*it);
				continue;
			}
			if (!visited.insert(base).second)
			{
				diamond = true;
				continue;
			}
			view.bases.push_back(base);
			visit(*base);
		}
	};
	visit(contract);
	if (diamond && diagnostics)
		diagnostics->push_back({Severity::warning, contract.name_span,
			"contract '" + contract.name + "' inherits a base through several paths; members are merged once"});

	std::set<std::string> seen_vars, seen_functions, seen_modifiers, seen_events, seen_structs, seen_enums;
	auto absorb = [&](ContractDefinition const& c, bool is_self) {
		for (auto const& v: c.state_variables)
			if (seen_vars.insert(v.name).second)
			{
				view.state_variables.push_back(&v);
				view.owner[&v] = &c;
			}
		for (auto const& f: c.functions)
		{
			if (f.kind == FunctionKind::constructor && !is_self)
				continue;
			if (seen_functions.insert(function_key(f)).second)
			{
				view.functions.push_back(&f);
				view.owner[&f] = &c;
			}
		}
		for (auto const& m: c.modifiers)
			if (seen_modifiers.insert(m.name).second)
			{
				view.modifiers.push_back(&m);
				view.owner[&m] = &c;
			}
		for (auto const& e: c.events)
			if (seen_events.insert(e.signature()).second)
			{
				view.events.push_back(&e);
				view.owner[&e] = &c;
			}
		for (auto const& s: c.structs)
			if (seen_structs.insert(s.name).second)
			{
				view.structs.push_back(&s);
				view.owner[&s] = &c;
			}
		for (auto const& e: c.enums)
			if (seen_enums.insert(e.name).second)
			{
				view.enums.push_back(&e);
				view.owner[&e] = &c;
			}
	};
	absorb(contract, true);
	for (auto const* base: view.bases)
		absorb(*base, false);
	return view;
}

std::set<std::string> leaf_contracts(SourceUnit const& unit)
{
	std::set<std::string> inherited;
	for (auto const& c: unit.contracts)
		for (auto const& b: c.bases)
			inherited.insert(last_segment(b));
	std::set<std::string> leaves;
	for (auto const& c: unit.contracts)
		if (!inherited.count(c.name))
			leaves.insert(c.name);
	return leaves;
}

// ---------------------------------------------------------------------------------------------
// Symbols

bool is_builtin_identifier(std::string_view name)
{
	static constexpr std::array<std::string_view, 26> names{"msg", "tx", "block", "now", "this", "super",
		"require", "assert", "revert", "keccak256", "sha3", "sha256", "ripemd160", "ecrecover", "addmod",
		"mulmod", "selfdestruct", "suicide", "blockhash", "gasleft", "abi", "address", "payable", "type",
		"bytes", "string"};
	if (std::find(names.begin(), names.end(), name) != names.end())
		return true;
	return elementary_type(name).has_value();
}

SymbolTable::SymbolTable(ContractView const& view): m_view(&view)
{
	auto add = [&](Symbol symbol) { m_contract_scope[symbol.name] = std::move(symbol); };
	if (view.unit)
		for (auto const& c: view.unit->contracts)
		{
			Symbol s;
			s.kind = SymbolKind::contract;
			s.name = c.name;
			s.contract = &c;
			add(std::move(s));
		}
	for (auto const* st: view.structs)
	{
		Symbol s;
		s.kind = SymbolKind::struct_type;
		s.name = st->name;
		add(std::move(s));
	}
	for (auto const* en: view.enums)
	{
		Symbol s;
		s.kind = SymbolKind::enum_type;
		s.name = en->name;
		add(std::move(s));
	}
	for (auto const* ev: view.events)
	{
		Symbol s;
		s.kind = SymbolKind::event;
		s.name = ev->name;
		s.event = ev;
		add(std::move(s));
	}
	for (auto const* m: view.modifiers)
	{
		Symbol s;
		s.kind = SymbolKind::modifier;
		s.name = m->name;
		s.modifier = m;
		add(std::move(s));
	}
	for (auto const* f: view.functions)
	{
		if (f->kind != FunctionKind::function)
			continue;
		auto& s = m_contract_scope[f->name];
		if (s.kind != SymbolKind::function)
			s = Symbol{};
		s.kind = SymbolKind::function;
		s.name = f->name;
		s.functions.push_back(f);
	}
	for (auto const* v: view.state_variables)
	{
		Symbol s;
		s.kind = SymbolKind::state_variable;
		s.name = v->name;
		s.variable = v;
		m_declaration_kinds[v] = SymbolKind::state_variable;
		add(std::move(s));
	}

	auto variable_symbol = [&](VariableDeclaration const& v, SymbolKind kind) {
		Symbol s;
		s.kind = kind;
		s.name = v.name;
		s.variable = &v;
		m_declaration_kinds[&v] = kind;
		return s;
	};
	auto hoist = [&](Statement const& body, std::map<std::string, Symbol>& hoisted) {
		walk(body, [&](Statement const& st) {
			if (st.kind == StmtKind::variable_declaration)
				for (auto const& d: st.declarations)
					hoisted.emplace(d.name, variable_symbol(d, SymbolKind::local));
			return true;
		});
	};

	for (auto const* f: view.functions)
	{
		std::vector<std::map<std::string, Symbol>> scopes(1);
		for (auto const& p: f->parameters)
			if (!p.name.empty())
				scopes[0][p.name] = variable_symbol(p, SymbolKind::parameter);
		for (auto const& r: f->returns)
			if (!r.name.empty())
				scopes[0][r.name] = variable_symbol(r, SymbolKind::return_parameter);
		std::map<std::string, Symbol> hoisted;
		if (f->body)
			hoist(*f->body, hoisted);
		for (auto const& mod: f->modifiers)
			for (auto const& arg: mod.arguments)
				resolve_expression(*arg, scopes, hoisted);
		if (f->body)
			resolve_body(*f->body, scopes, hoisted);
	}
	for (auto const* m: view.modifiers)
	{
		std::vector<std::map<std::string, Symbol>> scopes(1);
		for (auto const& p: m->parameters)
			if (!p.name.empty())
				scopes[0][p.name] = variable_symbol(p, SymbolKind::parameter);
		std::map<std::string, Symbol> hoisted;
		if (m->body)
		{
			hoist(*m->body, hoisted);
			resolve_body(*m->body, scopes, hoisted);
		}
	}
	for (auto const* v: view.state_variables)
		if (v->initializer)
		{
			std::vector<std::map<std::string, Symbol>> scopes;
			resolve_expression(*v->initializer, scopes, {});
		}
}

void SymbolTable::resolve_body(Statement const& stmt, std::vector<std::map<std::string, Symbol>>& scopes,
	std::map<std::string, Symbol> const& hoisted)
{
	auto expr = [&](Expression const* e) {
		if (e)
			resolve_expression(*e, scopes, hoisted);
	};
	auto child = [&](Statement const* s) {
		if (s)
			resolve_body(*s, scopes, hoisted);
	};
	switch (stmt.kind)
	{
	case StmtKind::block:
		scopes.emplace_back();
		for (auto const& s: stmt.statements)
			child(s.get());
		scopes.pop_back();
		break;
	case StmtKind::for_:
		scopes.emplace_back();
		child(stmt.init.get());
		expr(stmt.condition.get());
		expr(stmt.expression.get());
		child(stmt.body.get());
		scopes.pop_back();
		break;
	case StmtKind::variable_declaration:
		expr(stmt.initializer.get());
		for (auto const& d: stmt.declarations)
		{
			Symbol s;
			s.kind = SymbolKind::local;
			s.name = d.name;
			s.variable = &d;
			scopes.back()[d.name] = std::move(s);
		}
		break;
	default:
		expr(stmt.condition.get());
		expr(stmt.expression.get());
		child(stmt.then_branch.get());
		child(stmt.else_branch.get());
		child(stmt.body.get());
		break;
	}
}

void SymbolTable::resolve_expression(Expression const& root, std::vector<std::map<std::string, Symbol>> const& scopes,
	std::map<std::string, Symbol> const& hoisted)
{
	walk(root, [&](Expression const& e) {
		if (e.kind != ExprKind::identifier)
			return true;
		for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
			if (auto found = it->find(e.name); found != it->end())
			{
				m_resolved[&e] = found->second;
				return true;
			}
		if (auto found = hoisted.find(e.name); found != hoisted.end())
		{
			m_resolved[&e] = found->second;
			return true;
		}
		if (auto found = m_contract_scope.find(e.name); found != m_contract_scope.end())
		{
			m_resolved[&e] = found->second;
			return true;
		}
		if (is_builtin_identifier(e.name))
		{
			Symbol s;
			s.kind = SymbolKind::builtin;
			s.name = e.name;
			m_resolved[&e] = std::move(s);
			return true;
		}
		m_unresolved.push_back(&e);
		return true;
	});
}

Symbol const* SymbolTable::lookup(std::string_view name) const
{
	auto const it = m_contract_scope.find(name);
	return it == m_contract_scope.end() ? nullptr : &it->second;
}

Symbol const* SymbolTable::resolve(Expression const& identifier) const
{
	auto const it = m_resolved.find(&identifier);
	return it == m_resolved.end() ? nullptr : &it->second;
}

bool SymbolTable::is_state_variable(Expression const& expr) const
{
	auto const* s = resolve(expr);
	return s && s->kind == SymbolKind::state_variable;
}

VariableDeclaration const* SymbolTable::local_variable(Expression const& expr) const
{
	auto const* s = resolve(expr);
	return s && s->is_local_variable() ? s->variable : nullptr;
}

SymbolKind SymbolTable::kind_of(VariableDeclaration const& declaration) const
{
	auto const it = m_declaration_kinds.find(&declaration);
	return it == m_declaration_kinds.end() ? SymbolKind::local : it->second;
}

// ---------------------------------------------------------------------------------------------
// Types

namespace
{

std::optional<TypeName> smallest_integer_type(mp::cpp_int const& v)
{
	unsigned bits = 0;
	bool is_signed = false;
	if (v >= 0)
		bits = v == 0 ? 1 : static_cast<unsigned>(mp::msb(v)) + 1;
	else
	{
		is_signed = true;
		mp::cpp_int const magnitude = -v - 1;
		bits = (magnitude == 0 ? 0 : static_cast<unsigned>(mp::msb(magnitude)) + 1) + 1;
	}
	bits = (bits + 7) / 8 * 8;
	if (bits > 256)
		return std::nullopt;
	return integer_type(bits, is_signed);
}

TypeName named_type(std::string name)
{
	if (auto t = elementary_type(name))
		return *t;
	TypeName t;
	t.kind = TypeKind::user_defined;
	t.name = std::move(name);
	return t;
}

std::optional<TypeName> variable_type(VariableDeclaration const& v, SymbolTable const* symbols, int depth);

std::optional<TypeName> static_type_impl(Expression const& expr, SymbolTable const* symbols, int depth)
{
	if (depth > 32)
		return std::nullopt;
	if (auto c = constant_value(expr))
		return smallest_integer_type(*c);

	auto sub = [&](Expression const& e) { return static_type_impl(e, symbols, depth + 1); };
	switch (expr.kind)
	{
	case ExprKind::literal:
		switch (expr.literal_kind)
		{
		case LiteralKind::boolean: return named_type("bool");
		case LiteralKind::address: return named_type("address");
		case LiteralKind::string:
		case LiteralKind::hex_string: return named_type("string");
		default: return std::nullopt;
		}
	case ExprKind::identifier:
	{
		if (expr.name == "now")
			return named_type("uint256");
		if (expr.name == "this" && symbols && symbols->view() && symbols->view()->contract)
			return named_type(symbols->view()->contract->name);
		if (!symbols)
			return std::nullopt;
		auto const* s = symbols->resolve(expr);
		if (!s)
			return std::nullopt;
		if (s->is_variable() && s->variable)
			return variable_type(*s->variable, symbols, depth + 1);
		if (s->kind == SymbolKind::contract)
			return named_type(s->name);
		return std::nullopt;
	}
	case ExprKind::member_access:
	{
		auto const chain = member_chain(expr);
		if (chain == "msg.sender" || chain == "tx.origin" || chain == "block.coinbase")
			return named_type("address");
		if (chain == "msg.value" || chain == "msg.gas" || chain == "block.number" || chain == "block.timestamp" ||
			chain == "block.difficulty" || chain == "block.gaslimit" || chain == "tx.gasprice")
			return named_type("uint256");
		if (chain == "msg.data")
			return named_type("bytes");
		if (chain == "msg.sig")
			return named_type("bytes4");
		if (expr.name == "length" || expr.name == "balance")
			return named_type("uint256");
		auto const object = sub(expr.operand(0));
		if (object && object->kind == TypeKind::user_defined && symbols && symbols->view())
			if (auto const* st = symbols->view()->find_struct(object->name))
				for (auto const& m: st->members)
					if (m.name == expr.name)
						return m.type;
		return std::nullopt;
	}
	case ExprKind::index_access:
	{
		auto const base = sub(expr.operand(0));
		if (!base)
			return std::nullopt;
		if ((base->kind == TypeKind::mapping || base->kind == TypeKind::array) && base->element)
			return *base->element;
		if (base->kind == TypeKind::elementary && (base->name == "bytes" || base->name.rfind("bytes", 0) == 0))
			return named_type("bytes1");
		return std::nullopt;
	}
	case ExprKind::call:
	{
		auto const& callee = expr.callee();
		if (callee.kind == ExprKind::identifier)
		{
			auto const& n = callee.name;
			if (auto t = elementary_type(n))
				return t;
			if (n == "keccak256" || n == "sha3" || n == "sha256" || n == "blockhash")
				return named_type("bytes32");
			if (n == "ripemd160")
				return named_type("bytes20");
			if (n == "ecrecover")
				return named_type("address");
			if (n == "gasleft" || n == "addmod" || n == "mulmod")
				return named_type("uint256");
			if (!symbols)
				return std::nullopt;
			auto const* s = symbols->resolve(callee);
			if (s && s->kind == SymbolKind::contract)
				return named_type(s->name);
			if (s && s->kind == SymbolKind::function)
				for (auto const* f: s->functions)
					if (f->parameters.size() == expr.argument_count() && f->returns.size() == 1)
						return f->returns[0].type;
			return std::nullopt;
		}
		if (callee.kind == ExprKind::member_access)
		{
			if (member_chain(callee) == "block.blockhash")
				return named_type("bytes32");
			if (callee.name == "send" || callee.name == "call" || callee.name == "delegatecall" ||
				callee.name == "callcode" || callee.name == "staticcall")
				return named_type("bool");
		}
		if (callee.kind == ExprKind::new_expression && callee.type)
			return *callee.type;
		return std::nullopt;
	}
	case ExprKind::binary:
	{
		auto const& op = expr.name;
		if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=" || op == "&&" || op == "||")
			return named_type("bool");
		auto const lhs = sub(expr.operand(0));
		if (op == "**" || op == "<<" || op == ">>")
			return lhs;
		auto const rhs = sub(expr.operand(1));
		bool const lhs_const = constant_value(expr.operand(0)).has_value();
		bool const rhs_const = constant_value(expr.operand(1)).has_value();
		if (lhs_const && rhs)
			return rhs;
		if (rhs_const && lhs)
			return lhs;
		if (lhs && rhs && lhs->is_integer() && rhs->is_integer())
			return lhs->bit_width >= rhs->bit_width ? lhs : rhs;
		return lhs ? lhs : rhs;
	}
	case ExprKind::unary:
		if (expr.name == "!")
			return named_type("bool");
		if (expr.name == "delete")
			return std::nullopt;
		return sub(expr.operand(0));
	case ExprKind::assignment:
		return sub(expr.operand(0));
	case ExprKind::conditional:
		if (auto t = sub(expr.operand(1)))
			return t;
		return sub(expr.operand(2));
	case ExprKind::tuple:
		if (expr.operands.size() == 1 && expr.name.empty())
			return sub(expr.operand(0));
		return std::nullopt;
	case ExprKind::new_expression:
		if (expr.type)
			return *expr.type;
		return std::nullopt;
	}
	return std::nullopt;
}

std::optional<TypeName> infer_impl(Expression const& init, SymbolTable const* symbols, int depth)
{
	if (init.kind == ExprKind::literal)
	{
		if (init.literal_kind == LiteralKind::address)
			return named_type("address");
		if (init.literal_kind == LiteralKind::boolean)
			return named_type("bool");
	}
	return static_type_impl(init, symbols, depth);
}

std::optional<TypeName> variable_type(VariableDeclaration const& v, SymbolTable const* symbols, int depth)
{
	if (v.type.kind != TypeKind::var_inferred)
		return v.type;
	if (!v.initializer || v.initializer->kind == ExprKind::tuple)
		return std::nullopt;
	return infer_impl(*v.initializer, symbols, depth + 1);
}

}

std::optional<mp::cpp_int> constant_value(Expression const& expr)
{
	if (expr.kind == ExprKind::literal)
	{
		if ((expr.literal_kind == LiteralKind::number || expr.literal_kind == LiteralKind::hex_number) && expr.value)
			return mp::cpp_int(*expr.value);
		return std::nullopt;
	}
	if (expr.kind == ExprKind::tuple && expr.operands.size() == 1 && expr.name.empty())
		return constant_value(expr.operand(0));
	if (expr.kind == ExprKind::unary && expr.prefix && (expr.name == "-" || expr.name == "+"))
	{
		auto v = constant_value(expr.operand(0));
		if (v && expr.name == "-")
			*v = -*v;
		return v;
	}
	if (expr.kind != ExprKind::binary)
		return std::nullopt;
	auto const a = constant_value(expr.operand(0));
	if (!a)
		return std::nullopt;
	auto const b = constant_value(expr.operand(1));
	if (!b)
		return std::nullopt;
	// Guard against absurd intermediate sizes; anything past 4096 bits is not a valid type anyway.
	constexpr unsigned limit = 4096;
	auto const& op = expr.name;
	if (op == "+")
		return *a + *b;
	if (op == "-")
		return *a - *b;
	if (op == "*")
		return *a * *b;
	if (op == "/" || op == "%")
	{
		if (*b == 0)
			return std::nullopt;
		if (op == "%")
			return *a % *b;
		if (*a % *b != 0)
			return std::nullopt;
		return *a / *b;
	}
	if (op == "**")
	{
		if (*b < 0 || *b > limit)
			return std::nullopt;
		auto const result = mp::pow(*a, static_cast<unsigned>(*b));
		if (result != 0 && mp::msb(mp::abs(result)) > limit)
			return std::nullopt;
		return result;
	}
	if (op == "<<" || op == ">>")
	{
		if (*b < 0 || *b > limit)
			return std::nullopt;
		auto const shift = static_cast<unsigned>(*b);
		return op == "<<" ? mp::cpp_int(*a << shift) : mp::cpp_int(*a >> shift);
	}
	if ((op == "&" || op == "|" || op == "^") && *a >= 0 && *b >= 0)
		return op == "&" ? mp::cpp_int(*a & *b) : op == "|" ? mp::cpp_int(*a | *b) : mp::cpp_int(*a ^ *b);
	return std::nullopt;
}

std::optional<TypeName> static_type(Expression const& expr, SymbolTable const* symbols)
{
	return static_type_impl(expr, symbols, 0);
}

std::optional<TypeName> infer_var_type(Expression const* initializer, SymbolTable const* symbols)
{
	if (!initializer)
		return std::nullopt;
	return infer_impl(*initializer, symbols, 0);
}

// ---------------------------------------------------------------------------------------------
// External calls

std::string_view to_string(ExternalCallKind kind)
{
	switch (kind)
	{
	case ExternalCallKind::send: return "send";
	case ExternalCallKind::transfer: return "transfer";
	case ExternalCallKind::call: return "call";
	case ExternalCallKind::delegatecall: return "delegatecall";
	case ExternalCallKind::callcode: return "callcode";
	case ExternalCallKind::staticcall: return "staticcall";
	case ExternalCallKind::contract_call: return "contract_call";
	}
	return "call";
}

namespace
{

std::optional<ExternalCallKind> raw_call_kind(std::string_view member)
{
	if (member == "call")
		return ExternalCallKind::call;
	if (member == "delegatecall")
		return ExternalCallKind::delegatecall;
	if (member == "callcode")
		return ExternalCallKind::callcode;
	if (member == "staticcall")
		return ExternalCallKind::staticcall;
	return std::nullopt;
}

bool is_option_member(Expression const& e)
{
	return e.kind == ExprKind::member_access && (e.name == "value" || e.name == "gas");
}

/// True when `object` denotes a contract instance (not a contract type name, not a library).
bool is_contract_instance(Expression const& object, SymbolTable const* symbols)
{
	if (!symbols || !symbols->view())
		return false;
	if (object.kind == ExprKind::identifier)
	{
		if (object.name == "this")
			return true;
		auto const* s = symbols->resolve(object);
		if (!s || s->kind == SymbolKind::contract || s->kind == SymbolKind::builtin)
			return false;
	}
	if (object.kind == ExprKind::call && object.callee().kind == ExprKind::identifier)
	{
		auto const* s = symbols->resolve(object.callee());
		return s && s->kind == SymbolKind::contract && s->contract && s->contract->kind != ContractKind::library &&
			object.argument_count() == 1;
	}
	auto const type = static_type(object, symbols);
	if (!type || type->kind != TypeKind::user_defined || !symbols->view()->unit)
		return false;
	for (auto const& c: symbols->view()->unit->contracts)
		if (c.name == type->name)
			return c.kind != ContractKind::library;
	return false;
}

}

std::optional<ExternalCall> decode_external_call(Expression const& expr, SymbolTable const* symbols)
{
	if (expr.kind != ExprKind::call)
		return std::nullopt;
	ExternalCall result;
	result.expression = &expr;

	auto record_option = [&](Expression const& option_member, Expression const& option_call) {
		if (option_call.argument_count() < 1)
			return;
		if (option_member.name == "value")
			result.value = &option_call.argument(0);
		else
			result.gas = &option_call.argument(0);
	};

	Expression const* cur = &expr.callee();
	bool has_options = false;
	if (is_option_member(*cur))
	{
		// `x.call.value(v)` on its own: options are set but nothing is invoked.
		record_option(*cur, expr);
		has_options = true;
		result.invoked = false;
		cur = &cur->operand(0);
	}
	while (cur->kind == ExprKind::call && is_option_member(cur->callee()))
	{
		if (!result.value || cur->callee().name != "value")
			record_option(cur->callee(), *cur);
		has_options = true;
		cur = &cur->callee().operand(0);
	}
	if (cur->kind != ExprKind::member_access)
		return std::nullopt;
	auto const& object = cur->operand(0);

	if (auto kind = raw_call_kind(cur->name))
	{
		if (object.kind == ExprKind::identifier && symbols)
			if (auto const* s = symbols->resolve(object); s && s->kind == SymbolKind::contract)
				return std::nullopt;
		result.kind = *kind;
		result.target = &object;
		return result;
	}
	if (!has_options && (cur->name == "send" || cur->name == "transfer") && expr.argument_count() == 1 &&
		!is_contract_instance(object, symbols))
	{
		result.kind = cur->name == "send" ? ExternalCallKind::send : ExternalCallKind::transfer;
		result.target = &object;
		result.value = &expr.argument(0);
		return result;
	}
	if (is_contract_instance(object, symbols))
	{
		result.kind = ExternalCallKind::contract_call;
		result.target = &object;
		return result;
	}
	return std::nullopt;
}

std::vector<ExternalCall> collect_external_calls(Expression const& root, SymbolTable const* symbols)
{
	std::vector<ExternalCall> out;
	std::function<void(Expression const&)> visit = [&](Expression const& e) {
		if (e.kind == ExprKind::call)
			if (auto call = decode_external_call(e, symbols))
			{
				out.push_back(*call);
				for (std::size_t i = 0; i < e.argument_count(); ++i)
					visit(e.argument(i));
				Expression const* p = &e.callee();
				while (p != call->target)
				{
					if (p->kind == ExprKind::call)
					{
						for (std::size_t i = 0; i < p->argument_count(); ++i)
							visit(p->argument(i));
						p = &p->callee();
					}
					else if (p->kind == ExprKind::member_access)
						p = &p->operand(0);
					else
						break;
				}
				visit(*call->target);
				return;
			}
		for (auto const& op: e.operands)
			if (op)
				visit(*op);
	};
	visit(root);
	return out;
}

// ---------------------------------------------------------------------------------------------
// Call graph

std::optional<std::size_t> CallGraph::index_of(void const* definition) const
{
	for (std::size_t i = 0; i < nodes.size(); ++i)
		if (nodes[i].function == definition || nodes[i].modifier == definition)
			return i;
	return std::nullopt;
}

std::optional<std::size_t> CallGraph::index_of(std::string_view display_name) const
{
	for (std::size_t i = 0; i < nodes.size(); ++i)
		if (nodes[i].name == display_name)
			return i;
	return std::nullopt;
}

bool CallGraph::has_edge(std::string_view from, std::string_view to) const
{
	for (std::size_t i = 0; i < nodes.size(); ++i)
		if (nodes[i].name == from)
			for (auto const j: edges[i])
				if (nodes[j].name == to)
					return true;
	return false;
}

std::size_t CallGraph::in_degree(std::size_t node) const
{
	std::size_t n = 0;
	for (auto const& out: edges)
		n += out.count(node);
	return n;
}

std::size_t CallGraph::edge_count() const
{
	std::size_t n = 0;
	for (auto const& out: edges)
		n += out.size();
	return n;
}

CallGraph build_call_graph(ContractView const& view, SymbolTable const& symbols)
{
	CallGraph graph;
	for (auto const* f: view.functions)
		graph.nodes.push_back({f, nullptr, f->display_name()});
	for (auto const* m: view.modifiers)
		graph.nodes.push_back({nullptr, m, m->name});
	graph.edges.resize(graph.nodes.size());

	for (std::size_t i = 0; i < graph.nodes.size(); ++i)
	{
		auto const& node = graph.nodes[i];
		Statement const* body = node.function ? node.function->body.get() : node.modifier->body.get();

		auto scan = [&](Expression const& root) {
			walk(root, [&](Expression const& e) {
				if (e.kind != ExprKind::call || e.callee().kind != ExprKind::identifier)
					return true;
				auto const* s = symbols.resolve(e.callee());
				if (!s)
				{
					graph.unresolved.push_back(&e);
					return true;
				}
				if (s->kind != SymbolKind::function)
					return true;
				bool matched = false;
				for (auto const* target: s->functions)
					if (target->parameters.size() == e.argument_count())
						if (auto j = graph.index_of(target))
						{
							graph.edges[i].insert(*j);
							matched = true;
						}
				if (!matched)
					graph.unresolved.push_back(&e);
				return true;
			});
			for (auto const& call: collect_external_calls(root, &symbols))
				graph.external_calls.push_back({i, call});
		};

		if (node.function)
			for (auto const& mod: node.function->modifiers)
			{
				if (auto const* s = symbols.lookup(mod.name); s && s->kind == SymbolKind::modifier)
					if (auto j = graph.index_of(s->modifier))
						graph.edges[i].insert(*j);
				for (auto const& arg: mod.arguments)
					scan(*arg);
			}
		if (body)
			for_each_expression(*body, scan);
	}
	return graph;
}

// ---------------------------------------------------------------------------------------------
// Def-use

VariableFacts const* DefUseFacts::find(std::string_view name) const
{
	for (auto const& v: variables)
		if (v.declaration && v.declaration->name == name)
			return &v;
	return nullptr;
}

namespace
{

class DefUseBuilder
{
public:
	explicit DefUseBuilder(FunctionDefinition const& fn)
	{
		m_scopes.emplace_back();
		for (auto const& p: fn.parameters)
			if (!p.name.empty())
				m_scopes[0][p.name] = add(p, SymbolKind::parameter);
		for (auto const& r: fn.returns)
			if (!r.name.empty())
				m_scopes[0][r.name] = add(r, SymbolKind::return_parameter);
		if (fn.body)
			walk(*fn.body, [&](Statement const& s) {
				if (s.kind == StmtKind::variable_declaration)
					for (auto const& d: s.declarations)
						m_hoisted.emplace(d.name, add(d, SymbolKind::local));
				if (s.kind == StmtKind::inline_assembly)
					m_has_assembly = true;
				return true;
			});
		for (auto const& mod: fn.modifiers)
			for (auto const& arg: mod.arguments)
				visit(*arg, Flow::live_flow());
		if (fn.body)
			visit(*fn.body);
	}

	DefUseFacts finish()
	{
		for (std::size_t i = 0; i < m_facts.size(); ++i)
			if (m_has_assembly || m_facts[i].kind == SymbolKind::return_parameter)
				m_direct_live[i] = true;
		std::vector<bool> live = m_direct_live;
		bool changed = true;
		while (changed)
		{
			changed = false;
			for (std::size_t v = 0; v < m_facts.size(); ++v)
				if (!live[v])
					for (auto const t: m_edges[v])
						if (live[t])
						{
							live[v] = true;
							changed = true;
							break;
						}
		}
		DefUseFacts facts;
		for (std::size_t i = 0; i < m_facts.size(); ++i)
		{
			m_facts[i].live = live[i];
			facts.variables.push_back(std::move(m_facts[i]));
		}
		return facts;
	}

private:
	struct Flow
	{
		bool live = false;
		std::vector<std::size_t> targets;

		static Flow live_flow() { return Flow{true, {}}; }
		static Flow discard() { return Flow{}; }
		Flow with_target(std::size_t t) const
		{
			Flow f = *this;
			f.targets.push_back(t);
			return f;
		}
	};

	std::size_t add(VariableDeclaration const& d, SymbolKind kind)
	{
		if (auto it = m_index.find(&d); it != m_index.end())
			return it->second;
		VariableFacts f;
		f.declaration = &d;
		f.kind = kind;
		m_facts.push_back(std::move(f));
		m_direct_live.push_back(false);
		m_edges.emplace_back();
		return m_index[&d] = m_facts.size() - 1;
	}

	std::optional<std::size_t> lookup(std::string const& name) const
	{
		for (auto it = m_scopes.rbegin(); it != m_scopes.rend(); ++it)
			if (auto found = it->find(name); found != it->end())
				return found->second;
		if (auto found = m_hoisted.find(name); found != m_hoisted.end())
			return found->second;
		return std::nullopt;
	}

	std::optional<std::size_t> local_of(Expression const& e) const
	{
		if (e.kind != ExprKind::identifier)
			return std::nullopt;
		return lookup(e.name);
	}

	void read(std::size_t v, Span span, Flow const& flow)
	{
		m_facts[v].reads.push_back(span);
		if (flow.live)
			m_direct_live[v] = true;
		for (auto const t: flow.targets)
			if (t != v)
				m_edges[v].insert(t);
	}

	void visit(Statement const& s)
	{
		auto opt_expr = [&](Expression const* e, Flow const& f) {
			if (e)
				visit(*e, f);
		};
		switch (s.kind)
		{
		case StmtKind::block:
			m_scopes.emplace_back();
			for (auto const& c: s.statements)
				if (c)
					visit(*c);
			m_scopes.pop_back();
			break;
		case StmtKind::variable_declaration:
		{
			std::vector<std::size_t> declared;
			for (auto const& d: s.declarations)
				declared.push_back(m_index.at(&d));
			if (s.initializer)
			{
				Flow f;
				f.targets = declared;
				visit(*s.initializer, f);
				for (auto const& d: s.declarations)
					m_facts[m_index.at(&d)].writes.push_back(d.name_span);
			}
			for (std::size_t i = 0; i < s.declarations.size(); ++i)
				m_scopes.back()[s.declarations[i].name] = declared[i];
			break;
		}
		case StmtKind::expression:
			opt_expr(s.expression.get(), Flow::discard());
			break;
		case StmtKind::return_:
		case StmtKind::emit:
			opt_expr(s.expression.get(), Flow::live_flow());
			break;
		case StmtKind::for_:
			m_scopes.emplace_back();
			if (s.init)
				visit(*s.init);
			opt_expr(s.condition.get(), Flow::live_flow());
			opt_expr(s.expression.get(), Flow::discard());
			if (s.body)
				visit(*s.body);
			m_scopes.pop_back();
			break;
		default:
			opt_expr(s.condition.get(), Flow::live_flow());
			for (auto const* child: {s.then_branch.get(), s.else_branch.get(), s.body.get()})
				if (child)
					visit(*child);
			break;
		}
	}

	/// Sub-expressions of an assignment target other than a plain local: the object being written
	/// through and any index are treated as live reads.
	void visit_lvalue(Expression const& target)
	{
		if (target.kind == ExprKind::identifier)
			return;
		for (auto const& op: target.operands)
			if (op)
				visit(*op, Flow::live_flow());
	}

	void visit(Expression const& e, Flow const& flow)
	{
		switch (e.kind)
		{
		case ExprKind::identifier:
			if (auto v = local_of(e))
				read(*v, e.span, flow);
			break;
		case ExprKind::literal:
		case ExprKind::new_expression:
			break;
		case ExprKind::member_access:
			visit(e.operand(0), flow);
			break;
		case ExprKind::index_access:
			visit(e.operand(0), flow);
			if (e.operands.size() > 1)
				visit(e.operand(1), Flow::live_flow());
			break;
		case ExprKind::call:
		{
			auto const& callee = e.callee();
			bool const conversion = callee.kind == ExprKind::identifier &&
				(elementary_type(callee.name).has_value() || callee.name == "address") && !local_of(callee);
			if (callee.kind == ExprKind::member_access)
				visit(callee.operand(0), Flow::live_flow());
			else if (callee.kind != ExprKind::identifier)
				visit(callee, Flow::live_flow());
			for (std::size_t i = 0; i < e.argument_count(); ++i)
				visit(e.argument(i), conversion ? flow : Flow::live_flow());
			break;
		}
		case ExprKind::binary:
		case ExprKind::tuple:
			for (auto const& op: e.operands)
				if (op)
					visit(*op, flow);
			break;
		case ExprKind::unary:
		{
			auto const& operand = e.operand(0);
			auto const v = local_of(operand);
			if (e.name == "delete")
			{
				if (v)
					m_facts[*v].writes.push_back(operand.span);
				else
					visit_lvalue(operand);
				break;
			}
			if ((e.name == "++" || e.name == "--") && v)
				m_facts[*v].writes.push_back(operand.span);
			visit(operand, flow);
			break;
		}
		case ExprKind::assignment:
		{
			auto const& lhs = e.operand(0);
			auto const& rhs = e.operand(1);
			bool const compound = e.name != "=";
			if (auto v = local_of(lhs))
			{
				m_facts[*v].writes.push_back(lhs.span);
				if (compound)
					read(*v, lhs.span, flow);
				visit(rhs, flow.with_target(*v));
			}
			else if (lhs.kind == ExprKind::tuple)
			{
				Flow f = flow;
				for (auto const& component: lhs.operands)
				{
					if (!component)
						continue;
					if (auto c = local_of(*component))
					{
						m_facts[*c].writes.push_back(component->span);
						f.targets.push_back(*c);
					}
					else
					{
						f.live = true;
						visit_lvalue(*component);
					}
				}
				visit(rhs, f);
			}
			else
			{
				visit_lvalue(lhs);
				visit(rhs, Flow::live_flow());
			}
			break;
		}
		case ExprKind::conditional:
			visit(e.operand(0), Flow::live_flow());
			visit(e.operand(1), flow);
			visit(e.operand(2), flow);
			break;
		}
	}

	std::vector<VariableFacts> m_facts;
	std::vector<bool> m_direct_live;
	std::vector<std::set<std::size_t>> m_edges;
	std::unordered_map<VariableDeclaration const*, std::size_t> m_index;
	std::vector<std::map<std::string, std::size_t>> m_scopes;
	std::map<std::string, std::size_t> m_hoisted;
	bool m_has_assembly = false;
};

}

DefUseFacts compute_def_use(FunctionDefinition const& function)
{
	return DefUseBuilder(function).finish();
}

}
