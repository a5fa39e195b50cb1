#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace soldefect
{

using FileId = std::uint32_t;

/// Byte range inside one source file. line and column are 1-based, byte_offset is 0-based.
struct Span
{
	FileId file_id = 0;
	std::uint32_t line = 1;
	std::uint32_t column = 1;
	std::uint32_t byte_offset = 0;
	std::uint32_t length = 0;

	std::uint32_t end_offset() const { return byte_offset + length; }
	bool contains(Span const& other) const
	{
		return other.byte_offset >= byte_offset && other.end_offset() <= end_offset();
	}
	bool operator==(Span const&) const = default;
};

/// Smallest span covering both arguments. Both must belong to the same file.
inline Span cover(Span const& first, Span const& last)
{
	Span s = first;
	auto const end = std::max(first.end_offset(), last.end_offset());
	if (last.byte_offset < first.byte_offset)
	{
		s.line = last.line;
		s.column = last.column;
		s.byte_offset = last.byte_offset;
	}
	s.length = end - s.byte_offset;
	return s;
}

enum class Severity
{
	error,
	warning
};

struct Diagnostic
{
	Severity severity = Severity::error;
	Span span;
	std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(Diagnostics const& diagnostics)
{
	for (auto const& d: diagnostics)
		if (d.severity == Severity::error)
			return true;
	return false;
}

}
