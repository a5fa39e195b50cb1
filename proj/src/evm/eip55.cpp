#include <soldefect/evm/eip55.hpp>
#include <soldefect/evm/keccak.hpp>

#include <cctype>

namespace soldefect::evm
{

namespace
{

std::string_view digits_of(std::string_view address)
{
	if (address.size() >= 2 && address[0] == '0' && (address[1] == 'x' || address[1] == 'X'))
		address.remove_prefix(2);
	if (address.size() != 40)
		throw InvalidAddressLiteral("address must have 40 hex digits, got " + std::to_string(address.size()));
	for (char c: address)
		if (!std::isxdigit(static_cast<unsigned char>(c)))
			throw InvalidAddressLiteral("address contains a non-hex character");
	return address;
}

}

std::string eip55_checksum(std::string_view address)
{
	auto const digits = digits_of(address);
	std::string lower(digits);
	for (auto& c: lower)
		c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	auto const hash = keccak256(lower);
	std::string out = "0x";
	for (std::size_t i = 0; i < lower.size(); ++i)
	{
		unsigned const nibble = (i % 2 == 0) ? hash[i / 2] >> 4 : hash[i / 2] & 0xf;
		char c = lower[i];
		if (nibble >= 8)
			c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
		out.push_back(c);
	}
	return out;
}

bool eip55_is_valid(std::string_view literal)
{
	auto const digits = digits_of(literal);
	bool has_lower = false;
	bool has_upper = false;
	for (char c: digits)
	{
		has_lower |= (c >= 'a' && c <= 'f');
		has_upper |= (c >= 'A' && c <= 'F');
	}
	if (!has_lower || !has_upper)
		return true;
	return eip55_checksum(digits).substr(2) == digits;
}

}
