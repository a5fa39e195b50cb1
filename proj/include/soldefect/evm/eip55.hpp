#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soldefect::evm
{

struct InvalidAddressLiteral: std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};

/// Canonical mixed-case form ("0x" + 40 digits). Accepts the address with or without "0x" in any
/// case. Throws InvalidAddressLiteral on wrong length or non-hex characters.
std::string eip55_checksum(std::string_view address);

/// True if the literal equals its canonical form or has no letters of one of the two cases.
/// Throws InvalidAddressLiteral on wrong length or non-hex characters.
bool eip55_is_valid(std::string_view literal);

}
