#include <soldefect/parser.hpp>

#include <stdexcept>

namespace soldefect
{

namespace
{

struct ParseError: std::runtime_error
{
	ParseError(std::string const& message, Span s): std::runtime_error(message), span(s) {}
	Span span;
};

bool is_location_keyword(Token const& t)
{
	return t.is_keyword("storage") || t.is_keyword("memory") || t.is_keyword("calldata");
}

DataLocation to_location(Token const& t)
{
	if (t.text == "storage")
		return DataLocation::storage;
	if (t.text == "memory")
		return DataLocation::memory;
	return DataLocation::calldata;
}

struct Denomination
{
	std::string_view name;
	unsigned exponent;
	unsigned multiplier;
};

constexpr Denomination denominations[] = {
	{"wei", 0, 1}, {"szabo", 12, 1}, {"finney", 15, 1}, {"ether", 18, 1},
	{"seconds", 0, 1}, {"minutes", 0, 60}, {"hours", 0, 3600}, {"days", 0, 86400},
	{"weeks", 0, 604800}, {"years", 0, 31536000}};

Denomination const* find_denomination(Token const& t)
{
	if (t.kind != TokenKind::keyword)
		return nullptr;
	for (auto const& d: denominations)
		if (d.name == t.text)
			return &d;
	return nullptr;
}

int binary_precedence(Token const& t)
{
	if (t.kind != TokenKind::op)
		return -1;
	auto const& s = t.text;
	if (s == "||") return 1;
	if (s == "&&") return 2;
	if (s == "==" || s == "!=") return 3;
	if (s == "<" || s == ">" || s == "<=" || s == ">=") return 4;
	if (s == "|") return 5;
	if (s == "^") return 6;
	if (s == "&") return 7;
	if (s == "<<" || s == ">>" || s == ">>>") return 8;
	if (s == "+" || s == "-") return 9;
	if (s == "*" || s == "/" || s == "%") return 10;
	if (s == "**") return 11;
	return -1;
}

bool is_assignment_op(Token const& t)
{
	if (t.kind != TokenKind::op)
		return false;
	auto const& s = t.text;
	return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "|=" ||
		s == "&=" || s == "^=" || s == "<<=" || s == ">>=" || s == ">>>=";
}

class Parser
{
public:
	Parser(std::span<Token const> tokens, FileId file)
	{
		for (auto const& t: tokens)
			if (t.kind != TokenKind::comment)
				m_tokens.push_back(&t);
		m_eof.kind = TokenKind::unknown;
		m_eof.text = {};
		if (!tokens.empty())
		{
			auto const& last = tokens.back().span;
			m_eof.span = last;
			m_eof.span.byte_offset = last.end_offset();
			m_eof.span.length = 0;
		}
		m_eof.span.file_id = file;
		m_result.unit.file_id = file;
	}

	ParseResult run()
	{
		while (!at_end())
		{
			std::size_t const start = m_pos;
			try
			{
				parse_top_level();
			}
			catch (ParseError const& e)
			{
				error(e.span, e.what());
				recover(start, true);
			}
		}
		auto& unit = m_result.unit;
		if (!m_tokens.empty())
			unit.span = cover(m_tokens.front()->span, m_tokens.back()->span);
		unit.span.file_id = unit.file_id;
		return std::move(m_result);
	}

private:
	// -----------------------------------------------------------------------------------------
	// Token access

	Token const& peek(std::size_t ahead = 0) const
	{
		return m_pos + ahead < m_tokens.size() ? *m_tokens[m_pos + ahead] : m_eof;
	}
	Token const& previous() const { return m_pos > 0 ? *m_tokens[m_pos - 1] : m_eof; }
	bool at_end() const { return m_pos >= m_tokens.size(); }
	Token const& advance()
	{
		Token const& t = peek();
		if (!at_end())
			++m_pos;
		return t;
	}

	[[noreturn]] void fail(std::string const& message) const
	{
		auto const& t = peek();
		throw ParseError(
			at_end() ? message + " before end of input" : message + " near '" + std::string(t.text) + "'",
			t.span);
	}

	bool accept_punct(std::string_view p)
	{
		if (!peek().is_punct(p))
			return false;
		advance();
		return true;
	}
	bool accept_op(std::string_view p)
	{
		if (!peek().is_op(p))
			return false;
		advance();
		return true;
	}
	bool accept_keyword(std::string_view k)
	{
		if (!peek().is_keyword(k))
			return false;
		advance();
		return true;
	}
	Token const& expect_punct(std::string_view p)
	{
		if (!peek().is_punct(p))
			fail("expected '" + std::string(p) + "'");
		return advance();
	}
	Token const& expect_op(std::string_view p)
	{
		if (!peek().is_op(p))
			fail("expected '" + std::string(p) + "'");
		return advance();
	}
	Token const& expect_identifier()
	{
		if (peek().kind != TokenKind::identifier)
			fail("expected identifier");
		return advance();
	}

	/// A missing `;` is tolerated when the next token starts a new line or closes a block; the
	/// statement is kept and an error is recorded.
	void expect_semicolon()
	{
		if (accept_punct(";"))
			return;
		auto const& next = peek();
		if (at_end() || next.is_punct("}") || next.span.line > previous().span.line)
		{
			Span where = previous().span;
			where.byte_offset = where.end_offset();
			where.column += where.length;
			where.length = 0;
			error(where, "expected ';'");
			m_result.unit.partial = true;
			return;
		}
		fail("expected ';'");
	}

	void error(Span span, std::string message)
	{
		m_result.diagnostics.push_back({Severity::error, span, std::move(message)});
	}
	void warning(Span span, std::string message)
	{
		m_result.diagnostics.push_back({Severity::warning, span, std::move(message)});
	}

	Span span_from(Span const& start) const { return cover(start, previous().span); }

	std::string text_between(std::size_t first, std::size_t last) const
	{
		if (first >= last || last > m_tokens.size())
			return {};
		auto const* begin = m_tokens[first]->text.data();
		auto const* end = m_tokens[last - 1]->text.data() + m_tokens[last - 1]->text.size();
		return std::string(begin, static_cast<std::size_t>(end - begin));
	}

	/// Skips to just past the next `;` or to the next unmatched `}` (not consumed), stepping over
	/// balanced braces. Always makes progress when nothing was consumed since `start`.
	void recover(std::size_t start, bool top_level)
	{
		m_result.unit.partial = true;
		int depth = 0;
		while (!at_end())
		{
			auto const& t = peek();
			if (t.is_punct("{"))
				++depth;
			else if (t.is_punct("}"))
			{
				if (depth == 0)
				{
					if (m_pos == start || top_level)
						advance();
					return;
				}
				if (--depth == 0 && top_level)
				{
					advance();
					return;
				}
			}
			else if (t.is_punct(";") && depth == 0)
			{
				advance();
				return;
			}
			advance();
		}
	}

	// -----------------------------------------------------------------------------------------
	// Top level

	void parse_top_level()
	{
		auto const& t = peek();
		if (t.is_keyword("pragma"))
			parse_pragma();
		else if (t.is_keyword("import"))
		{
			advance();
			while (!at_end() && !peek().is_punct(";"))
				advance();
			expect_semicolon();
		}
		else if (t.is_keyword("contract") || t.is_keyword("interface") || t.is_keyword("library"))
			parse_contract();
		else
			fail("expected pragma, import or contract definition");
	}

	void parse_pragma()
	{
		auto const start = advance().span;
		PragmaDirective pragma;
		if (peek().kind != TokenKind::identifier && peek().kind != TokenKind::keyword)
			fail("expected pragma name");
		pragma.name = std::string(advance().text);
		std::size_t const first = m_pos;
		while (!at_end() && !peek().is_punct(";") && peek().span.line == previous().span.line)
			advance();
		pragma.version_text = text_between(first, m_pos);
		pragma.constraint_kind = classify_version(pragma.version_text);
		pragma.span = span_from(start);
		expect_semicolon();
		m_result.unit.pragmas.push_back(std::move(pragma));
	}

	void parse_contract()
	{
		auto const& kw = advance();
		ContractDefinition contract;
		contract.kind = kw.text == "interface" ? ContractKind::interface
			: kw.text == "library"             ? ContractKind::library
											   : ContractKind::contract;
		auto const& name = expect_identifier();
		contract.name = std::string(name.text);
		contract.name_span = name.span;
		if (accept_keyword("is"))
		{
			do
			{
				std::string base(expect_identifier().text);
				while (accept_punct("."))
					base += "." + std::string(expect_identifier().text);
				if (peek().is_punct("("))
					parse_call_arguments();
				contract.bases.push_back(std::move(base));
			} while (accept_punct(","));
		}
		expect_punct("{");
		while (!at_end() && !peek().is_punct("}"))
		{
			std::size_t const start = m_pos;
			try
			{
				parse_member(contract);
			}
			catch (ParseError const& e)
			{
				error(e.span, e.what());
				recover(start, false);
			}
		}
		if (at_end())
		{
			error(m_eof.span, "expected '}' to close contract '" + contract.name + "'");
			m_result.unit.partial = true;
		}
		else
			advance();
		contract.span = span_from(kw.span);
		m_result.unit.contracts.push_back(std::move(contract));
	}

	void parse_member(ContractDefinition& contract)
	{
		auto const& t = peek();
		if (t.is_keyword("function") || t.is_keyword("constructor"))
			contract.functions.push_back(parse_function(contract.name));
		else if (t.is_keyword("modifier"))
			contract.modifiers.push_back(parse_modifier());
		else if (t.is_keyword("event"))
			contract.events.push_back(parse_event());
		else if (t.is_keyword("struct"))
			contract.structs.push_back(parse_struct());
		else if (t.is_keyword("enum"))
			contract.enums.push_back(parse_enum());
		else if (t.is_keyword("using"))
		{
			advance();
			while (!at_end() && !peek().is_punct(";") && !peek().is_punct("}"))
				advance();
			expect_semicolon();
		}
		else
			contract.state_variables.push_back(parse_state_variable());
	}

	VariableDeclaration parse_state_variable()
	{
		VariableDeclaration var;
		auto const start = peek().span;
		var.type = parse_type_name();
		while (true)
		{
			auto const& t = peek();
			if (t.is_keyword("public"))
				var.visibility = Visibility::public_;
			else if (t.is_keyword("private"))
				var.visibility = Visibility::private_;
			else if (t.is_keyword("internal"))
				var.visibility = Visibility::internal;
			else if (t.is_keyword("constant"))
				var.is_constant = true;
			else
				break;
			advance();
		}
		auto const& name = expect_identifier();
		var.name = std::string(name.text);
		var.name_span = name.span;
		if (accept_op("="))
			var.initializer = parse_expression();
		var.span = span_from(start);
		expect_semicolon();
		return var;
	}

	FunctionDefinition parse_function(std::string const& contract_name)
	{
		FunctionDefinition fn;
		auto const& kw = advance();
		if (kw.is_keyword("constructor"))
			fn.kind = FunctionKind::constructor;
		else if (peek().kind == TokenKind::identifier)
		{
			auto const& name = advance();
			fn.name_span = name.span;
			if (name.text == contract_name)
				fn.kind = FunctionKind::constructor;
			else
				fn.name = std::string(name.text);
		}
		else if (peek().is_keyword("constructor"))
		{
			fn.name_span = advance().span;
			fn.kind = FunctionKind::constructor;
		}
		else
			fn.kind = FunctionKind::fallback;
		if (fn.name_span.length == 0)
			fn.name_span = kw.span;

		fn.parameters = parse_parameter_list();
		while (true)
		{
			auto const& t = peek();
			if (t.is_keyword("public"))
				fn.visibility = Visibility::public_;
			else if (t.is_keyword("external"))
				fn.visibility = Visibility::external;
			else if (t.is_keyword("internal"))
				fn.visibility = Visibility::internal;
			else if (t.is_keyword("private"))
				fn.visibility = Visibility::private_;
			else if (t.is_keyword("payable"))
			{
				fn.mutability = Mutability::payable;
				fn.is_payable = true;
			}
			else if (t.is_keyword("view"))
				fn.mutability = Mutability::view;
			else if (t.is_keyword("pure"))
				fn.mutability = Mutability::pure;
			else if (t.is_keyword("constant"))
				fn.mutability = Mutability::constant;
			else if (t.is_keyword("returns"))
			{
				advance();
				fn.returns = parse_parameter_list();
				continue;
			}
			else if (t.kind == TokenKind::identifier)
			{
				ModifierInvocation mod;
				auto const& name = advance();
				mod.name = std::string(name.text);
				if (peek().is_punct("("))
					mod.arguments = parse_call_arguments();
				mod.span = span_from(name.span);
				fn.modifiers.push_back(std::move(mod));
				continue;
			}
			else
				break;
			advance();
		}
		if (!accept_punct(";"))
			fn.body = parse_block();
		fn.span = span_from(kw.span);
		return fn;
	}

	ModifierDefinition parse_modifier()
	{
		ModifierDefinition mod;
		auto const& kw = advance();
		mod.name = std::string(expect_identifier().text);
		if (peek().is_punct("("))
			mod.parameters = parse_parameter_list();
		mod.body = parse_block();
		mod.span = span_from(kw.span);
		return mod;
	}

	EventDefinition parse_event()
	{
		EventDefinition ev;
		auto const& kw = advance();
		ev.name = std::string(expect_identifier().text);
		ev.parameters = parse_parameter_list();
		accept_keyword("anonymous");
		ev.span = span_from(kw.span);
		expect_semicolon();
		return ev;
	}

	StructDefinition parse_struct()
	{
		StructDefinition st;
		auto const& kw = advance();
		st.name = std::string(expect_identifier().text);
		expect_punct("{");
		while (!at_end() && !peek().is_punct("}"))
		{
			VariableDeclaration member;
			auto const start = peek().span;
			member.type = parse_type_name();
			auto const& name = expect_identifier();
			member.name = std::string(name.text);
			member.name_span = name.span;
			member.span = span_from(start);
			expect_semicolon();
			st.members.push_back(std::move(member));
		}
		expect_punct("}");
		st.span = span_from(kw.span);
		return st;
	}

	EnumDefinition parse_enum()
	{
		EnumDefinition en;
		auto const& kw = advance();
		en.name = std::string(expect_identifier().text);
		expect_punct("{");
		if (!peek().is_punct("}"))
		{
			do
				en.values.emplace_back(expect_identifier().text);
			while (accept_punct(","));
		}
		expect_punct("}");
		en.span = span_from(kw.span);
		return en;
	}

	std::vector<VariableDeclaration> parse_parameter_list()
	{
		std::vector<VariableDeclaration> params;
		expect_punct("(");
		if (accept_punct(")"))
			return params;
		do
		{
			VariableDeclaration p;
			auto const start = peek().span;
			p.type = parse_type_name();
			while (true)
			{
				if (is_location_keyword(peek()))
					p.location = to_location(advance());
				else if (accept_keyword("indexed"))
					p.indexed = true;
				else if (accept_keyword("payable"))
					continue;
				else
					break;
			}
			if (peek().kind == TokenKind::identifier)
			{
				auto const& name = advance();
				p.name = std::string(name.text);
				p.name_span = name.span;
			}
			p.span = span_from(start);
			params.push_back(std::move(p));
		} while (accept_punct(","));
		expect_punct(")");
		return params;
	}

	// -----------------------------------------------------------------------------------------
	// Types

	TypeName parse_type_name()
	{
		TypeName type;
		auto const start = peek().span;
		if (accept_keyword("mapping"))
		{
			expect_punct("(");
			auto key = parse_type_name();
			expect_op("=>");
			auto value = parse_type_name();
			expect_punct(")");
			type.kind = TypeKind::mapping;
			type.key = std::make_shared<TypeName const>(std::move(key));
			type.element = std::make_shared<TypeName const>(std::move(value));
		}
		else if (accept_keyword("var"))
			type.kind = TypeKind::var_inferred;
		else if (peek().kind == TokenKind::identifier)
		{
			auto const& name = advance();
			if (auto elementary = elementary_type(name.text))
			{
				type = std::move(*elementary);
				if (type.name == "address" && peek().is_keyword("payable"))
					advance();
			}
			else
			{
				type.kind = TypeKind::user_defined;
				type.name = std::string(name.text);
				while (peek().is_punct(".") && peek(1).kind == TokenKind::identifier)
				{
					advance();
					type.name += "." + std::string(advance().text);
				}
			}
		}
		else
			fail("expected type name");
		type.span = span_from(start);

		while (peek().is_punct("["))
		{
			advance();
			TypeName array;
			array.kind = TypeKind::array;
			if (!peek().is_punct("]"))
			{
				std::size_t const first = m_pos;
				parse_expression();
				array.array_length = text_between(first, m_pos);
			}
			expect_punct("]");
			array.element = std::make_shared<TypeName const>(std::move(type));
			array.span = span_from(start);
			type = std::move(array);
		}
		return type;
	}

	/// Speculatively parses a type name followed by a location keyword or identifier.
	bool looks_like_declaration()
	{
		auto const& t = peek();
		if (t.is_keyword("mapping") || t.is_keyword("var"))
			return true;
		if (t.kind != TokenKind::identifier)
			return false;
		std::size_t const saved = m_pos;
		bool result = false;
		try
		{
			parse_type_name();
			result = peek().kind == TokenKind::identifier || is_location_keyword(peek());
		}
		catch (ParseError const&)
		{
			result = false;
		}
		m_pos = saved;
		return result;
	}

	// -----------------------------------------------------------------------------------------
	// Statements

	StmtPtr make_statement(StmtKind kind)
	{
		auto s = std::make_unique<Statement>();
		s->kind = kind;
		return s;
	}

	StmtPtr parse_block()
	{
		auto block = make_statement(StmtKind::block);
		auto const& open = expect_punct("{");
		while (!at_end() && !peek().is_punct("}"))
		{
			std::size_t const start = m_pos;
			try
			{
				if (auto s = parse_statement())
					block->statements.push_back(std::move(s));
			}
			catch (ParseError const& e)
			{
				error(e.span, e.what());
				recover(start, false);
			}
		}
		expect_punct("}");
		block->span = span_from(open.span);
		return block;
	}

	StmtPtr parse_statement()
	{
		auto const& t = peek();
		auto const start = t.span;
		if (t.is_punct("{"))
			return parse_block();
		if (t.is_keyword("if"))
		{
			advance();
			auto s = make_statement(StmtKind::if_);
			expect_punct("(");
			s->condition = parse_expression();
			expect_punct(")");
			s->then_branch = parse_statement();
			if (accept_keyword("else"))
				s->else_branch = parse_statement();
			s->span = span_from(start);
			return s;
		}
		if (t.is_keyword("for"))
		{
			advance();
			auto s = make_statement(StmtKind::for_);
			expect_punct("(");
			if (!accept_punct(";"))
			{
				s->init = parse_simple_statement();
				expect_punct(";");
			}
			if (!peek().is_punct(";"))
				s->condition = parse_expression();
			expect_punct(";");
			if (!peek().is_punct(")"))
				s->expression = parse_expression();
			expect_punct(")");
			s->body = parse_statement();
			s->span = span_from(start);
			return s;
		}
		if (t.is_keyword("while"))
		{
			advance();
			auto s = make_statement(StmtKind::while_);
			expect_punct("(");
			s->condition = parse_expression();
			expect_punct(")");
			s->body = parse_statement();
			s->span = span_from(start);
			return s;
		}
		if (t.is_keyword("do"))
		{
			advance();
			auto s = make_statement(StmtKind::do_while);
			s->body = parse_statement();
			if (!accept_keyword("while"))
				fail("expected 'while'");
			expect_punct("(");
			s->condition = parse_expression();
			expect_punct(")");
			s->span = span_from(start);
			expect_semicolon();
			return s;
		}
		if (t.is_keyword("return"))
		{
			advance();
			auto s = make_statement(StmtKind::return_);
			if (!peek().is_punct(";") && !peek().is_punct("}"))
				s->expression = parse_expression();
			s->span = span_from(start);
			expect_semicolon();
			return s;
		}
		if (t.is_keyword("throw") || t.is_keyword("break") || t.is_keyword("continue"))
		{
			advance();
			auto s = make_statement(
				t.text == "throw" ? StmtKind::throw_ : t.text == "break" ? StmtKind::break_ : StmtKind::continue_);
			s->span = span_from(start);
			expect_semicolon();
			return s;
		}
		if (t.is_keyword("emit"))
		{
			advance();
			auto s = make_statement(StmtKind::emit);
			s->expression = parse_expression();
			s->span = span_from(start);
			expect_semicolon();
			return s;
		}
		if (t.kind == TokenKind::identifier && t.text == "_" && peek(1).is_punct(";"))
		{
			advance();
			auto s = make_statement(StmtKind::placeholder);
			s->span = span_from(start);
			advance();
			return s;
		}
		if (t.is_keyword("assembly"))
		{
			advance();
			if (peek().kind == TokenKind::string_literal)
				advance();
			if (!peek().is_punct("{"))
				fail("expected '{' after assembly");
			int depth = 0;
			do
			{
				if (peek().is_punct("{"))
					++depth;
				else if (peek().is_punct("}"))
					--depth;
				advance();
			} while (depth > 0 && !at_end());
			warning(span_from(start), "inline assembly is not analyzed");
			m_result.unit.partial = true;
			auto s = make_statement(StmtKind::inline_assembly);
			s->span = span_from(start);
			return s;
		}
		auto s = parse_simple_statement();
		expect_semicolon();
		return s;
	}

	StmtPtr parse_simple_statement()
	{
		auto const start = peek().span;
		if (peek().is_keyword("var") && peek(1).is_punct("("))
		{
			advance();
			advance();
			auto s = make_statement(StmtKind::variable_declaration);
			while (!peek().is_punct(")"))
			{
				if (peek().kind == TokenKind::identifier)
				{
					VariableDeclaration var;
					var.type.kind = TypeKind::var_inferred;
					auto const& name = advance();
					var.name = std::string(name.text);
					var.name_span = name.span;
					var.span = name.span;
					s->declarations.push_back(std::move(var));
				}
				if (!accept_punct(","))
					break;
			}
			expect_punct(")");
			expect_op("=");
			s->initializer = parse_expression();
			for (auto& d: s->declarations)
				d.initializer = s->initializer;
			s->span = span_from(start);
			return s;
		}
		if (looks_like_declaration())
		{
			auto s = make_statement(StmtKind::variable_declaration);
			VariableDeclaration var;
			var.type = parse_type_name();
			if (is_location_keyword(peek()))
				var.location = to_location(advance());
			auto const& name = expect_identifier();
			var.name = std::string(name.text);
			var.name_span = name.span;
			if (accept_op("="))
			{
				s->initializer = parse_expression();
				var.initializer = s->initializer;
			}
			var.span = span_from(start);
			s->declarations.push_back(std::move(var));
			s->span = span_from(start);
			return s;
		}
		auto s = make_statement(StmtKind::expression);
		s->expression = parse_expression();
		s->span = span_from(start);
		return s;
	}

	// -----------------------------------------------------------------------------------------
	// Expressions

	ExprPtr make_expr(ExprKind kind, Span span)
	{
		auto e = std::make_unique<Expression>();
		e->kind = kind;
		e->span = span;
		return e;
	}

	ExprPtr parse_expression()
	{
		auto lhs = parse_conditional();
		if (is_assignment_op(peek()))
		{
			auto const& op = advance();
			auto rhs = parse_expression();
			auto e = make_expr(ExprKind::assignment, cover(lhs->span, rhs->span));
			e->name = std::string(op.text);
			e->operands.push_back(std::move(lhs));
			e->operands.push_back(std::move(rhs));
			return e;
		}
		return lhs;
	}

	ExprPtr parse_conditional()
	{
		auto condition = parse_binary(1);
		if (!accept_op("?"))
			return condition;
		auto then_value = parse_expression();
		expect_op(":");
		auto else_value = parse_expression();
		auto e = make_expr(ExprKind::conditional, cover(condition->span, else_value->span));
		e->operands.push_back(std::move(condition));
		e->operands.push_back(std::move(then_value));
		e->operands.push_back(std::move(else_value));
		return e;
	}

	ExprPtr parse_binary(int min_precedence)
	{
		auto lhs = parse_unary();
		while (true)
		{
			int const precedence = binary_precedence(peek());
			if (precedence < min_precedence)
				return lhs;
			auto const& op = advance();
			// ** is right associative.
			auto rhs = parse_binary(op.text == "**" ? precedence : precedence + 1);
			auto e = make_expr(ExprKind::binary, cover(lhs->span, rhs->span));
			e->name = std::string(op.text);
			e->operands.push_back(std::move(lhs));
			e->operands.push_back(std::move(rhs));
			lhs = std::move(e);
		}
	}

	ExprPtr parse_unary()
	{
		auto const& t = peek();
		bool const prefix_op = t.kind == TokenKind::op &&
			(t.text == "!" || t.text == "-" || t.text == "~" || t.text == "++" || t.text == "--" || t.text == "+");
		if (prefix_op || t.is_keyword("delete"))
		{
			advance();
			auto operand = parse_unary();
			auto e = make_expr(ExprKind::unary, cover(t.span, operand->span));
			e->name = std::string(t.text);
			e->prefix = true;
			e->operands.push_back(std::move(operand));
			return e;
		}
		return parse_postfix(parse_primary());
	}

	std::vector<ExprPtr> parse_call_arguments()
	{
		std::vector<ExprPtr> args;
		expect_punct("(");
		if (accept_punct(")"))
			return args;
		if (accept_punct("{"))
		{
			// Named arguments; names are dropped, values kept in source order.
			if (!peek().is_punct("}"))
			{
				do
				{
					expect_identifier();
					expect_op(":");
					args.push_back(parse_expression());
				} while (accept_punct(","));
			}
			expect_punct("}");
			expect_punct(")");
			return args;
		}
		do
			args.push_back(parse_expression());
		while (accept_punct(","));
		expect_punct(")");
		return args;
	}

	ExprPtr parse_postfix(ExprPtr expr)
	{
		while (true)
		{
			auto const& t = peek();
			if (t.is_punct("."))
			{
				advance();
				auto const& member = peek();
				if (member.kind != TokenKind::identifier && member.kind != TokenKind::keyword)
					fail("expected member name");
				advance();
				auto e = make_expr(ExprKind::member_access, cover(expr->span, member.span));
				e->name = std::string(member.text);
				e->operands.push_back(std::move(expr));
				expr = std::move(e);
			}
			else if (t.is_punct("["))
			{
				advance();
				auto e = make_expr(ExprKind::index_access, expr->span);
				e->operands.push_back(std::move(expr));
				if (!peek().is_punct("]"))
					e->operands.push_back(parse_expression());
				expect_punct("]");
				e->span = span_from(e->span);
				expr = std::move(e);
			}
			else if (t.is_punct("("))
			{
				auto e = make_expr(ExprKind::call, expr->span);
				e->operands.push_back(std::move(expr));
				for (auto& arg: parse_call_arguments())
					e->operands.push_back(std::move(arg));
				e->span = span_from(e->span);
				expr = std::move(e);
			}
			else if (t.is_op("++") || t.is_op("--"))
			{
				advance();
				auto e = make_expr(ExprKind::unary, cover(expr->span, t.span));
				e->name = std::string(t.text);
				e->prefix = false;
				e->operands.push_back(std::move(expr));
				expr = std::move(e);
			}
			else
				return expr;
		}
	}

	void apply_denomination(Expression& literal)
	{
		auto const* d = find_denomination(peek());
		if (!d)
			return;
		literal.unit = std::string(advance().text);
		literal.span = span_from(literal.span);
		if (!literal.value)
			return;
		if (literal.literal_kind == LiteralKind::number)
			literal.value = parse_decimal_literal(literal.literal_text, d->exponent);
		else if (d->exponent != 0)
			literal.value = *literal.value * boost::multiprecision::pow(uint256(10), d->exponent);
		if (literal.value && d->multiplier != 1)
		{
			boost::multiprecision::uint512_t const wide =
				boost::multiprecision::uint512_t(*literal.value) * d->multiplier;
			if (wide >> 256 != 0)
				literal.value.reset();
			else
				literal.value = static_cast<uint256>(wide);
		}
	}

	ExprPtr parse_primary()
	{
		auto const& t = peek();
		if (t.kind == TokenKind::identifier)
		{
			advance();
			auto e = make_expr(ExprKind::identifier, t.span);
			e->name = std::string(t.text);
			return e;
		}
		if (t.is_keyword("true") || t.is_keyword("false"))
		{
			advance();
			auto e = make_expr(ExprKind::literal, t.span);
			e->literal_kind = LiteralKind::boolean;
			e->literal_text = std::string(t.text);
			e->value = t.text == "true" ? 1 : 0;
			return e;
		}
		if (t.kind == TokenKind::number_literal)
		{
			advance();
			auto e = make_expr(ExprKind::literal, t.span);
			e->literal_kind = LiteralKind::number;
			e->literal_text = std::string(t.text);
			e->value = parse_decimal_literal(t.text);
			apply_denomination(*e);
			return e;
		}
		if (t.kind == TokenKind::hex_literal)
		{
			advance();
			auto e = make_expr(ExprKind::literal, t.span);
			e->literal_text = std::string(t.text);
			if (t.text.substr(0, 3) == "hex")
				e->literal_kind = LiteralKind::hex_string;
			else
			{
				bool const address_shaped = t.text.size() == 42 && t.text.find('_') == std::string_view::npos;
				e->literal_kind = address_shaped ? LiteralKind::address : LiteralKind::hex_number;
				e->value = parse_hex_literal(t.text);
				apply_denomination(*e);
			}
			return e;
		}
		if (t.kind == TokenKind::string_literal)
		{
			advance();
			auto e = make_expr(ExprKind::literal, t.span);
			e->literal_kind = LiteralKind::string;
			e->literal_text = std::string(t.text);
			while (peek().kind == TokenKind::string_literal)
			{
				e->literal_text += std::string(advance().text);
				e->span = span_from(t.span);
			}
			return e;
		}
		if (t.is_punct("(") || t.is_punct("["))
		{
			bool const inline_array = t.is_punct("[");
			std::string_view const close = inline_array ? "]" : ")";
			advance();
			std::vector<ExprPtr> components;
			bool trailing_comma = false;
			std::size_t count = 0;
			while (!peek().is_punct(close))
			{
				++count;
				if (!peek().is_punct(","))
					components.push_back(parse_expression());
				trailing_comma = accept_punct(",");
				if (!trailing_comma)
					break;
			}
			expect_punct(close);
			if (!inline_array && components.size() == 1 && count == 1 && !trailing_comma)
				return std::move(components.front());
			auto e = make_expr(ExprKind::tuple, span_from(t.span));
			if (inline_array)
				e->name = "[]";
			e->operands = std::move(components);
			return e;
		}
		if (t.is_keyword("new"))
		{
			advance();
			auto e = make_expr(ExprKind::new_expression, t.span);
			e->type = std::make_shared<TypeName const>(parse_type_name());
			e->span = span_from(t.span);
			return e;
		}
		if (t.is_keyword("payable") && peek(1).is_punct("("))
		{
			advance();
			auto e = make_expr(ExprKind::identifier, t.span);
			e->name = "payable";
			return e;
		}
		fail("expected expression");
	}

	std::vector<Token const*> m_tokens;
	std::size_t m_pos = 0;
	Token m_eof;
	ParseResult m_result;
};

}

ParseResult parse(std::span<Token const> tokens, FileId file_id)
{
	return Parser(tokens, file_id).run();
}

ParseResult parse_source(std::string_view source, FileId file_id)
{
	auto lexed = tokenize(source, file_id);
	auto parsed = parse(lexed.tokens, file_id);
	lexed.diagnostics.insert(lexed.diagnostics.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
	parsed.diagnostics = std::move(lexed.diagnostics);
	return parsed;
}

}
