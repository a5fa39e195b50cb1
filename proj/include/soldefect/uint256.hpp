#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect
{

using uint256 = boost::multiprecision::uint256_t;
using bytes = std::vector<std::uint8_t>;
using bytes_view = std::span<std::uint8_t const>;

/// Number of significant bits; 0 for zero.
unsigned bit_length(uint256 const& value);

/// Big-endian bytes (at most 32) to integer.
uint256 from_big_endian(bytes_view data);

std::string to_hex(uint256 const& value);
std::string to_hex(bytes_view data);

/// Exact value of a Solidity decimal literal (underscores, fractions, exponents) scaled by
/// 10^unit_exponent. Returns nullopt if the value is not an integer or exceeds 256 bits.
std::optional<uint256> parse_decimal_literal(std::string_view text, unsigned unit_exponent = 0);

/// Value of a 0x-prefixed hex literal; nullopt if it exceeds 256 bits.
std::optional<uint256> parse_hex_literal(std::string_view text);

}
