#include <soldefect/lexer.hpp>

#include <array>
#include <cctype>

namespace soldefect
{

namespace
{

using namespace std::string_view_literals;

constexpr std::array keywords{
	"pragma"sv, "import"sv, "contract"sv, "interface"sv, "library"sv, "function"sv, "modifier"sv,
	"event"sv, "emit"sv, "returns"sv, "return"sv, "if"sv, "else"sv, "for"sv, "while"sv, "do"sv,
	"break"sv, "continue"sv, "throw"sv, "var"sv, "mapping"sv, "public"sv, "external"sv,
	"internal"sv, "private"sv, "payable"sv, "constant"sv, "view"sv, "pure"sv, "memory"sv,
	"storage"sv, "calldata"sv, "new"sv, "delete"sv, "is"sv, "struct"sv, "enum"sv, "using"sv,
	"constructor"sv, "true"sv, "false"sv, "indexed"sv, "anonymous"sv, "assembly"sv, "ether"sv,
	"wei"sv, "finney"sv, "szabo"sv, "seconds"sv, "minutes"sv, "hours"sv, "days"sv, "weeks"sv,
	"years"sv};

// Longest first so that maximal munch works by scanning in order.
constexpr std::array operators{
	">>>="sv, ">>>"sv, "<<="sv, ">>="sv, "**"sv, "=="sv, "!="sv, "<="sv, ">="sv, "&&"sv, "||"sv,
	"++"sv, "--"sv, "+="sv, "-="sv, "*="sv, "/="sv, "%="sv, "|="sv, "&="sv, "^="sv, "<<"sv,
	">>"sv, "=>"sv, "+"sv, "-"sv, "*"sv, "/"sv, "%"sv, "="sv, "<"sv, ">"sv, "!"sv, "&"sv, "|"sv,
	"^"sv, "~"sv, "?"sv, ":"sv};

bool is_ident_start(char c)
{
	return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c)
{
	return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

bool is_space(char c)
{
	return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

class Lexer
{
public:
	Lexer(std::string_view source, FileId file): m_src(source), m_file(file) {}

	LexResult run()
	{
		while (true)
		{
			skip_whitespace();
			if (m_pos >= m_src.size())
				break;
			lex_one();
		}
		return std::move(m_result);
	}

private:
	void skip_whitespace()
	{
		while (m_pos < m_src.size() && is_space(m_src[m_pos]))
			advance();
	}

	void advance()
	{
		if (m_src[m_pos] == '\n')
		{
			++m_line;
			m_col = 1;
		}
		else if ((static_cast<unsigned char>(m_src[m_pos]) & 0xC0) != 0x80)
			++m_col;
		++m_pos;
	}

	void emit(TokenKind kind, std::size_t start, std::uint32_t line, std::uint32_t col)
	{
		Token t;
		t.kind = kind;
		t.text = m_src.substr(start, m_pos - start);
		t.span = Span{m_file, line, col, static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(m_pos - start)};
		m_result.tokens.push_back(t);
	}

	void error(std::size_t start, std::uint32_t line, std::uint32_t col, std::string message)
	{
		m_result.diagnostics.push_back(
			{Severity::error, Span{m_file, line, col, static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(m_pos - start)}, std::move(message)});
	}

	char peek(std::size_t ahead = 0) const
	{
		return m_pos + ahead < m_src.size() ? m_src[m_pos + ahead] : '\0';
	}

	void lex_one()
	{
		auto const start = m_pos;
		auto const line = m_line;
		auto const col = m_col;
		char const c = peek();

		if (c == '/' && peek(1) == '/')
		{
			while (m_pos < m_src.size() && m_src[m_pos] != '\n')
				advance();
			emit(TokenKind::comment, start, line, col);
			return;
		}
		if (c == '/' && peek(1) == '*')
		{
			advance();
			advance();
			bool closed = false;
			while (m_pos < m_src.size())
			{
				if (peek() == '*' && peek(1) == '/')
				{
					advance();
					advance();
					closed = true;
					break;
				}
				advance();
			}
			emit(TokenKind::comment, start, line, col);
			if (!closed)
				error(start, line, col, "unterminated comment");
			return;
		}
		if (c == 'h' && m_src.substr(m_pos, 3) == "hex" && (peek(3) == '"' || peek(3) == '\''))
		{
			advance();
			advance();
			advance();
			lex_string_body(start, line, col, TokenKind::hex_literal);
			return;
		}
		if (is_ident_start(c))
		{
			while (m_pos < m_src.size() && is_ident_char(m_src[m_pos]))
				advance();
			auto const word = m_src.substr(start, m_pos - start);
			emit(is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, start, line, col);
			return;
		}
		if (is_digit(c))
		{
			lex_number(start, line, col);
			return;
		}
		if (c == '"' || c == '\'')
		{
			lex_string_body(start, line, col, TokenKind::string_literal);
			return;
		}
		if (c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == ',' || c == '.')
		{
			advance();
			emit(TokenKind::punctuation, start, line, col);
			return;
		}
		for (auto const op: operators)
			if (m_src.substr(m_pos, op.size()) == op)
			{
				for (std::size_t i = 0; i < op.size(); ++i)
					advance();
				emit(TokenKind::op, start, line, col);
				return;
			}

		// One code point of something we do not understand.
		advance();
		while (m_pos < m_src.size() && (static_cast<unsigned char>(m_src[m_pos]) & 0xC0) == 0x80)
			advance();
		emit(TokenKind::unknown, start, line, col);
		error(start, line, col, "unexpected character");
	}

	void lex_number(std::size_t start, std::uint32_t line, std::uint32_t col)
	{
		if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X'))
		{
			advance();
			advance();
			while (is_hex_digit(peek()) || peek() == '_')
				advance();
			emit(TokenKind::hex_literal, start, line, col);
			return;
		}
		while (is_digit(peek()) || peek() == '_')
			advance();
		// Fractions and dotted version numbers (0.4.25) stay one token.
		while (peek() == '.' && is_digit(peek(1)))
		{
			advance();
			while (is_digit(peek()) || peek() == '_')
				advance();
		}
		if ((peek() == 'e' || peek() == 'E') && (is_digit(peek(1)) || (peek(1) == '-' && is_digit(peek(2)))))
		{
			advance();
			if (peek() == '-')
				advance();
			while (is_digit(peek()))
				advance();
		}
		emit(TokenKind::number_literal, start, line, col);
	}

	void lex_string_body(std::size_t start, std::uint32_t line, std::uint32_t col, TokenKind kind)
	{
		char const quote = peek();
		advance();
		bool closed = false;
		while (m_pos < m_src.size() && m_src[m_pos] != '\n')
		{
			if (m_src[m_pos] == '\\' && m_pos + 1 < m_src.size() && m_src[m_pos + 1] != '\n')
			{
				advance();
				advance();
				continue;
			}
			if (m_src[m_pos] == quote)
			{
				advance();
				closed = true;
				break;
			}
			advance();
		}
		emit(kind, start, line, col);
		if (!closed)
			error(start, line, col, "unterminated string literal");
	}

	std::string_view m_src;
	FileId m_file;
	std::size_t m_pos = 0;
	std::uint32_t m_line = 1;
	std::uint32_t m_col = 1;
	LexResult m_result;
};

}

std::string_view to_string(TokenKind kind)
{
	switch (kind)
	{
	case TokenKind::identifier: return "identifier";
	case TokenKind::keyword: return "keyword";
	case TokenKind::number_literal: return "number";
	case TokenKind::hex_literal: return "hex";
	case TokenKind::string_literal: return "string";
	case TokenKind::punctuation: return "punctuation";
	case TokenKind::op: return "operator";
	case TokenKind::comment: return "comment";
	case TokenKind::unknown: return "unknown";
	}
	return "unknown";
}

bool is_keyword(std::string_view word)
{
	for (auto const k: keywords)
		if (k == word)
			return true;
	return false;
}

LexResult tokenize(std::string_view source, FileId file_id)
{
	return Lexer(source, file_id).run();
}

}
