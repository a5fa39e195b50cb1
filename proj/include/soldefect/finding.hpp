#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace soldefect
{

enum class Category
{
	security,
	availability,
	performance,
	maintainability,
	reusability
};

/// IP1 is the most severe level, IP5 the least.
enum class Impact
{
	IP1 = 1,
	IP2,
	IP3,
	IP4,
	IP5
};

std::string_view to_string(Category category);
std::optional<Category> parse_category(std::string_view text);
std::string_view to_string(Impact impact);
/// Accepts "IP3", "ip3" and "3".
std::optional<Impact> parse_impact(std::string_view text);

/// One defect occurrence. Source findings carry line and column, bytecode findings pc and block.
struct Finding
{
	std::string detector;
	Category category = Category::security;
	Impact impact = Impact::IP5;
	std::string file;
	std::optional<std::uint32_t> line;
	std::optional<std::uint32_t> column;
	std::optional<std::uint64_t> pc;
	std::optional<std::uint64_t> block;
	std::string message;
	std::string advice;

	/// line for source findings, pc for bytecode findings.
	std::uint64_t position() const { return line ? *line : pc.value_or(0); }
	bool same_identity(Finding const& other) const
	{
		return detector == other.detector && file == other.file && line.has_value() == other.line.has_value() &&
			position() == other.position();
	}
	bool operator==(Finding const&) const = default;
};

/// Report order: file, line or pc, detector, then column.
bool finding_less(Finding const& a, Finding const& b);

}
