#include "common.hpp"

#include <algorithm>
#include <stdexcept>

namespace soldefect::detail
{

DetectorDescriptor const& descriptor(std::string_view id)
{
	auto const* d = find_detector(id);
	if (!d)
		throw std::logic_error("unregistered detector " + std::string(id));
	return *d;
}

namespace
{

Finding base_finding(AnalysisContext const& ctx, std::string_view id, std::string message)
{
	auto const& d = descriptor(id);
	Finding f;
	f.detector = std::string(d.id);
	f.category = d.category;
	f.impact = d.impact;
	f.message = std::move(message);
	f.advice = std::string(d.advice);
	if (ctx.source)
		f.file = ctx.source->path;
	else if (ctx.bytecode)
		f.file = ctx.bytecode->path;
	return f;
}

}

Finding source_finding(AnalysisContext const& ctx, std::string_view id, Span const& span, std::string message)
{
	auto f = base_finding(ctx, id, std::move(message));
	f.file = ctx.source->path;
	f.line = span.line;
	f.column = span.column;
	return f;
}

Finding bytecode_finding(AnalysisContext const& ctx, std::string_view id, std::size_t pc, std::size_t block,
	std::string message)
{
	auto f = base_finding(ctx, id, std::move(message));
	f.file = ctx.bytecode->path;
	f.pc = pc;
	f.block = block;
	return f;
}

std::vector<Body> declared_bodies(SourceFacts const& source)
{
	std::vector<Body> out;
	for (auto const& c: source.contracts)
	{
		for (auto const& fn: c->contract->functions)
			if (fn.body)
				out.push_back({c.get(), &fn, nullptr, fn.body.get()});
		for (auto const& m: c->contract->modifiers)
			if (m.body)
				out.push_back({c.get(), nullptr, &m, m.body.get()});
	}
	return out;
}

std::vector<Body> view_bodies(ContractFacts const& facts)
{
	std::vector<Body> out;
	for (auto const* fn: facts.view.functions)
		if (fn->body)
			out.push_back({&facts, fn, nullptr, fn->body.get()});
	for (auto const* m: facts.view.modifiers)
		if (m->body)
			out.push_back({&facts, nullptr, m, m->body.get()});
	return out;
}

void for_each_contract_expression(ContractFacts const& facts, std::function<void(Expression const&)> const& visitor)
{
	auto const& c = *facts.contract;
	for (auto const& v: c.state_variables)
		if (v.initializer)
			visitor(*v.initializer);
	for (auto const& fn: c.functions)
	{
		for (auto const& m: fn.modifiers)
			for (auto const& arg: m.arguments)
				if (arg)
					visitor(*arg);
		if (fn.body)
			for_each_expression(*fn.body, visitor);
	}
	for (auto const& m: c.modifiers)
		if (m.body)
			for_each_expression(*m.body, visitor);
}

std::vector<ContractFacts const*> deployable_contracts(SourceFacts const& source)
{
	std::vector<ContractFacts const*> out;
	for (auto const& c: source.contracts)
		if (c->leaf && c->contract->kind == ContractKind::contract)
			out.push_back(c.get());
	return out;
}

FunctionDefinition const* first_payable(ContractView const& view)
{
	for (auto const* fn: view.functions)
		if (fn->is_payable)
			return fn;
	return nullptr;
}

void walk_with_parents(Statement const& stmt,
	std::function<void(Statement const&, std::vector<Statement const*> const&)> const& visitor)
{
	std::vector<Statement const*> parents;
	std::function<void(Statement const&)> visit = [&](Statement const& s) {
		visitor(s, parents);
		parents.push_back(&s);
		for (auto const& child: s.statements)
			if (child)
				visit(*child);
		for (auto const* child: {&s.init, &s.then_branch, &s.else_branch, &s.body})
			if (*child)
				visit(**child);
		parents.pop_back();
	};
	visit(stmt);
}

bool is_loop(Statement const& stmt)
{
	return stmt.kind == StmtKind::for_ || stmt.kind == StmtKind::while_ || stmt.kind == StmtKind::do_while;
}

namespace
{

bool is_constant_operand(Expression const& e, SymbolTable const& symbols)
{
	if (constant_value(e))
		return true;
	if (e.kind == ExprKind::identifier)
		if (auto const* s = symbols.resolve(e); s && s->kind == SymbolKind::state_variable && s->variable)
			return s->variable->is_constant;
	return false;
}

bool is_variable_operand(Expression const& e, SymbolTable const& symbols)
{
	if (e.kind != ExprKind::identifier)
		return false;
	auto const* s = symbols.resolve(e);
	return s && s->is_variable();
}

bool bounded_condition(Expression const& cond, SymbolTable const& symbols)
{
	if (cond.kind != ExprKind::binary)
		return false;
	if (cond.name == "&&")
		return bounded_condition(cond.operand(0), symbols) || bounded_condition(cond.operand(1), symbols);
	static constexpr std::string_view comparisons[] = {"<", "<=", ">", ">=", "!="};
	if (std::find(std::begin(comparisons), std::end(comparisons), cond.name) == std::end(comparisons))
		return false;
	auto const& l = cond.operand(0);
	auto const& r = cond.operand(1);
	return (is_variable_operand(l, symbols) && is_constant_operand(r, symbols)) ||
		(is_variable_operand(r, symbols) && is_constant_operand(l, symbols));
}

}

bool has_constant_bound(Statement const& loop, SymbolTable const& symbols)
{
	return loop.condition && bounded_condition(*loop.condition, symbols);
}

std::vector<Expression const*> condition_roots(Statement const& body)
{
	std::vector<Expression const*> roots;
	walk(body, [&](Statement const& s) {
		if (s.condition)
			roots.push_back(s.condition.get());
		return true;
	});
	for_each_expression(body, [&](Expression const& root) {
		walk(root, [&](Expression const& e) {
			if (e.kind == ExprKind::call && e.argument_count() >= 1 &&
				(e.callee().is_identifier("require") || e.callee().is_identifier("assert")))
				roots.push_back(&e.argument(0));
			else if (e.kind == ExprKind::conditional)
				roots.push_back(&e.operand(0));
			return true;
		});
	});
	return roots;
}

bool is_builtin_call(Expression const& e, std::string_view name, SymbolTable const& symbols)
{
	if (e.kind != ExprKind::call || !e.callee().is_identifier(name))
		return false;
	auto const* s = symbols.resolve(e.callee());
	return !s || s->kind == SymbolKind::builtin;
}

bool is_self_balance(Expression const& e)
{
	if (e.kind != ExprKind::member_access || e.name != "balance")
		return false;
	auto const& object = e.operand(0);
	if (object.is_identifier("this"))
		return true;
	return object.kind == ExprKind::call && object.callee().is_identifier("address") &&
		object.argument_count() == 1 && object.argument(0).is_identifier("this");
}

VariableDeclaration const* root_variable(Expression const& lvalue, SymbolTable const& symbols)
{
	Expression const* e = &lvalue;
	while (e->kind == ExprKind::index_access || e->kind == ExprKind::member_access)
		e = &e->operand(0);
	if (e->kind != ExprKind::identifier)
		return nullptr;
	auto const* s = symbols.resolve(*e);
	return s && s->is_variable() ? s->variable : nullptr;
}

std::set<VariableDeclaration const*> state_writes(Expression const& root, SymbolTable const& symbols)
{
	std::set<VariableDeclaration const*> out;
	std::function<void(Expression const&)> target = [&](Expression const& lvalue) {
		if (lvalue.kind == ExprKind::tuple)
		{
			for (auto const& c: lvalue.operands)
				if (c)
					target(*c);
			return;
		}
		if (auto const* v = root_variable(lvalue, symbols); v && symbols.kind_of(*v) == SymbolKind::state_variable)
			out.insert(v);
	};
	walk(root, [&](Expression const& e) {
		if (e.kind == ExprKind::assignment)
			target(e.operand(0));
		else if (e.kind == ExprKind::unary && (e.name == "++" || e.name == "--" || e.name == "delete"))
			target(e.operand(0));
		else if (e.kind == ExprKind::call && e.callee().kind == ExprKind::member_access &&
			(e.callee().name == "push" || e.callee().name == "pop"))
			target(e.callee().operand(0));
		return true;
	});
	return out;
}

std::set<VariableDeclaration const*> variables_read(Expression const& root, SymbolTable const& symbols)
{
	std::set<VariableDeclaration const*> out;
	walk(root, [&](Expression const& e) {
		if (e.kind == ExprKind::identifier)
			if (auto const* s = symbols.resolve(e); s && s->is_variable() && s->variable)
				out.insert(s->variable);
		return true;
	});
	return out;
}

bool is_terminating(Statement const& stmt, SymbolTable const& symbols)
{
	if (stmt.kind == StmtKind::return_ || stmt.kind == StmtKind::throw_)
		return true;
	return stmt.kind == StmtKind::expression && stmt.expression && is_builtin_call(*stmt.expression, "revert", symbols);
}

bool is_selfdestruct_call(Expression const& e, SymbolTable const& symbols)
{
	return is_builtin_call(e, "selfdestruct", symbols) || is_builtin_call(e, "suicide", symbols);
}

std::vector<Assignment> assignments(Statement const& body, SymbolTable const& symbols)
{
	std::vector<Assignment> out;
	walk(body, [&](Statement const& s) {
		if (s.kind == StmtKind::variable_declaration && s.initializer)
		{
			Assignment a;
			for (auto const& d: s.declarations)
				a.targets.push_back(&d);
			a.value = s.initializer.get();
			out.push_back(std::move(a));
		}
		return true;
	});
	for_each_expression(body, [&](Expression const& root) {
		walk(root, [&](Expression const& e) {
			if (e.kind != ExprKind::assignment)
				return true;
			Assignment a;
			a.value = &e.operand(1);
			auto const& lhs = e.operand(0);
			if (lhs.kind == ExprKind::tuple)
			{
				for (auto const& c: lhs.operands)
					if (c)
						if (auto const* v = root_variable(*c, symbols))
							a.targets.push_back(v);
			}
			else if (auto const* v = root_variable(lhs, symbols))
				a.targets.push_back(v);
			if (!a.targets.empty())
				out.push_back(std::move(a));
			return true;
		});
	});
	return out;
}

std::vector<Expression const*> own_expressions(Statement const& stmt)
{
	std::vector<Expression const*> out;
	if (stmt.condition)
		out.push_back(stmt.condition.get());
	if (stmt.expression)
		out.push_back(stmt.expression.get());
	if (stmt.initializer)
		out.push_back(stmt.initializer.get());
	return out;
}

}
