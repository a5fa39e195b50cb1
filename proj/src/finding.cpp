#include <soldefect/finding.hpp>

#include <array>
#include <cctype>
#include <functional>
#include <tuple>

namespace soldefect
{

namespace
{

constexpr std::array<std::string_view, 5> category_names{
	"security", "availability", "performance", "maintainability", "reusability"};
constexpr std::array<std::string_view, 5> impact_names{"IP1", "IP2", "IP3", "IP4", "IP5"};

}

std::string_view to_string(Category category)
{
	return category_names.at(static_cast<std::size_t>(category));
}

std::optional<Category> parse_category(std::string_view text)
{
	for (std::size_t i = 0; i < category_names.size(); ++i)
		if (category_names[i] == text)
			return static_cast<Category>(i);
	return std::nullopt;
}

std::string_view to_string(Impact impact)
{
	return impact_names.at(static_cast<std::size_t>(impact) - 1);
}

std::optional<Impact> parse_impact(std::string_view text)
{
	if (text.size() == 3 && std::toupper(static_cast<unsigned char>(text[0])) == 'I' &&
		std::toupper(static_cast<unsigned char>(text[1])) == 'P')
		text.remove_prefix(2);
	if (text.size() != 1 || text[0] < '1' || text[0] > '5')
		return std::nullopt;
	return static_cast<Impact>(text[0] - '0');
}

bool finding_less(Finding const& a, Finding const& b)
{
	auto key = [](Finding const& f) {
		return std::make_tuple(std::cref(f.file), !f.line.has_value(), f.position(), std::cref(f.detector),
			f.column.value_or(0), std::cref(f.message));
	};
	return key(a) < key(b);
}

}
