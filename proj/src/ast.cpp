#include <soldefect/ast.hpp>

#include <regex>

namespace soldefect
{

bool TypeName::is_reference() const
{
	switch (kind)
	{
	case TypeKind::array:
	case TypeKind::mapping:
		return true;
	case TypeKind::elementary:
		return name == "bytes" || name == "string";
	case TypeKind::user_defined:
		// Could be a struct; callers that know the struct set refine this.
		return true;
	case TypeKind::var_inferred:
		return false;
	}
	return false;
}

std::string TypeName::canonical() const
{
	switch (kind)
	{
	case TypeKind::elementary:
	case TypeKind::user_defined:
		return name;
	case TypeKind::var_inferred:
		return "var";
	case TypeKind::array:
		return (element ? element->canonical() : std::string{"?"}) + "[" + array_length + "]";
	case TypeKind::mapping:
		return "mapping(" + (key ? key->canonical() : std::string{"?"}) + "=>" +
			(element ? element->canonical() : std::string{"?"}) + ")";
	}
	return "?";
}

TypeName integer_type(unsigned bits, bool is_signed)
{
	TypeName t;
	t.kind = TypeKind::elementary;
	t.bit_width = bits;
	t.is_signed = is_signed;
	t.name = (is_signed ? "int" : "uint") + std::to_string(bits);
	return t;
}

std::optional<TypeName> elementary_type(std::string_view name)
{
	auto const int_prefix = [&](std::string_view prefix, bool is_signed) -> std::optional<TypeName> {
		if (name.substr(0, prefix.size()) != prefix)
			return std::nullopt;
		auto const rest = name.substr(prefix.size());
		if (rest.empty())
			return integer_type(256, is_signed);
		unsigned bits = 0;
		for (char c: rest)
		{
			if (c < '0' || c > '9')
				return std::nullopt;
			bits = bits * 10 + static_cast<unsigned>(c - '0');
			if (bits > 256)
				return std::nullopt;
		}
		if (bits == 0 || bits % 8 != 0 || rest[0] == '0')
			return std::nullopt;
		return integer_type(bits, is_signed);
	};
	if (auto t = int_prefix("uint", false))
		return t;
	if (auto t = int_prefix("int", true))
		return t;

	TypeName t;
	t.kind = TypeKind::elementary;
	if (name == "address" || name == "bool" || name == "string" || name == "bytes" || name == "byte")
	{
		t.name = std::string(name);
		return t;
	}
	if (name.size() > 5 && name.substr(0, 5) == "bytes")
	{
		unsigned n = 0;
		for (char c: name.substr(5))
		{
			if (c < '0' || c > '9')
				return std::nullopt;
			n = n * 10 + static_cast<unsigned>(c - '0');
		}
		if (n >= 1 && n <= 32 && name[5] != '0')
		{
			t.name = std::string(name);
			return t;
		}
	}
	return std::nullopt;
}

std::string member_chain(Expression const& expr)
{
	if (expr.kind == ExprKind::identifier)
		return expr.name;
	if (expr.kind == ExprKind::member_access)
	{
		auto base = member_chain(expr.operand(0));
		if (base.empty())
			return {};
		return base + "." + expr.name;
	}
	return {};
}

void walk(Expression const& expr, std::function<bool(Expression const&)> const& visitor)
{
	if (!visitor(expr))
		return;
	for (auto const& op: expr.operands)
		if (op)
			walk(*op, visitor);
}

void walk(Statement const& stmt, std::function<bool(Statement const&)> const& visitor)
{
	if (!visitor(stmt))
		return;
	for (auto const& s: stmt.statements)
		if (s)
			walk(*s, visitor);
	for (auto const* child: {&stmt.init, &stmt.then_branch, &stmt.else_branch, &stmt.body})
		if (*child)
			walk(**child, visitor);
}

void for_each_expression(Statement const& stmt, std::function<void(Expression const&)> const& visitor)
{
	walk(stmt, [&](Statement const& s) {
		if (s.condition)
			visitor(*s.condition);
		if (s.expression)
			visitor(*s.expression);
		if (s.initializer)
			visitor(*s.initializer);
		return true;
	});
}

std::string FunctionDefinition::display_name() const
{
	switch (kind)
	{
	case FunctionKind::constructor: return "constructor";
	case FunctionKind::fallback: return "fallback";
	case FunctionKind::function: return name;
	}
	return name;
}

std::string FunctionDefinition::signature() const
{
	std::string s = name + "(";
	for (std::size_t i = 0; i < parameters.size(); ++i)
	{
		if (i)
			s += ",";
		s += parameters[i].type.canonical();
	}
	return s + ")";
}

std::string EventDefinition::signature() const
{
	std::string s = name + "(";
	for (std::size_t i = 0; i < parameters.size(); ++i)
	{
		if (i)
			s += ",";
		s += parameters[i].type.canonical();
	}
	return s + ")";
}

VersionConstraint classify_version(std::string_view version_text)
{
	std::string const text(version_text);
	static std::regex const exact(R"(^\s*=?\s*\d+\.\d+\.\d+\s*$)");
	static std::regex const caret(R"(^\s*\^\s*\d+(\.\d+){0,2}\s*$)");
	static std::regex const range(R"([<>]|\s-\s|\|\|)");
	if (std::regex_match(text, exact))
		return VersionConstraint::exact;
	if (std::regex_match(text, caret))
		return VersionConstraint::caret;
	if (std::regex_search(text, range))
		return VersionConstraint::range;
	return VersionConstraint::other;
}

}
