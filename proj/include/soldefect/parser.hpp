#pragma once

#include <soldefect/ast.hpp>
#include <soldefect/lexer.hpp>

#include <span>
#include <string_view>

namespace soldefect
{

struct ParseResult
{
	SourceUnit unit;
	Diagnostics diagnostics;
};

/// Parses the supported Solidity subset. Never throws on malformed input: syntax errors become
/// diagnostics and the parser resynchronizes at the next `;` or `}` so that sibling statements,
/// functions and contracts are still produced. Comment tokens are ignored.
ParseResult parse(std::span<Token const> tokens, FileId file_id = 0);

/// tokenize + parse; lexer diagnostics come first in the result.
ParseResult parse_source(std::string_view source, FileId file_id = 0);

}
