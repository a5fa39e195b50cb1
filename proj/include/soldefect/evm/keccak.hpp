#pragma once

#include <soldefect/uint256.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace soldefect::evm
{

using Hash256 = std::array<std::uint8_t, 32>;

/// Keccak-f[1600] sponge with a 1088-bit rate and 256-bit output. `domain` is the first padding
/// byte: 0x01 gives Ethereum's Keccak-256, 0x06 gives FIPS-202 SHA3-256.
Hash256 sponge256(bytes_view data, std::uint8_t domain);

Hash256 keccak256(bytes_view data);
Hash256 keccak256(std::string_view text);

/// First four bytes of keccak256(signature) as a big-endian integer.
std::uint32_t selector(std::string_view signature);
/// Eight lowercase hex digits of `selector(signature)`.
std::string selector_hex(std::uint32_t selector);

}
