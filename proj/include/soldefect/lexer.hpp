#pragma once

#include <soldefect/span.hpp>

#include <string_view>
#include <vector>

namespace soldefect
{

enum class TokenKind
{
	identifier,
	keyword,
	number_literal,
	hex_literal,
	string_literal,
	punctuation,
	op,
	comment,
	unknown
};

std::string_view to_string(TokenKind kind);

/// A lexeme. `text` is a view into the tokenized source buffer, which must outlive the token.
struct Token
{
	TokenKind kind = TokenKind::unknown;
	std::string_view text;
	Span span;

	bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
	bool is_punct(std::string_view t) const { return kind == TokenKind::punctuation && text == t; }
	bool is_op(std::string_view t) const { return kind == TokenKind::op && text == t; }
	bool is_keyword(std::string_view t) const { return kind == TokenKind::keyword && text == t; }
};

struct LexResult
{
	std::vector<Token> tokens;
	Diagnostics diagnostics;
};

bool is_keyword(std::string_view word);

/// Lossless tokenizer: every byte of `source` is either whitespace or part of exactly one token.
/// Comments are kept as tokens. Unterminated strings and comments produce an error diagnostic
/// and a token running to the end of the line (strings) or the input (comments).
LexResult tokenize(std::string_view source, FileId file_id = 0);

}
