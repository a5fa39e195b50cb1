#include <soldefect/uint256.hpp>

#include <boost/multiprecision/cpp_int.hpp>

namespace soldefect
{

namespace mp = boost::multiprecision;

unsigned bit_length(uint256 const& value)
{
	if (value == 0)
		return 0;
	return static_cast<unsigned>(mp::msb(value)) + 1;
}

uint256 from_big_endian(bytes_view data)
{
	uint256 v = 0;
	for (auto b: data.last(std::min<std::size_t>(data.size(), 32)))
		v = (v << 8) | b;
	return v;
}

std::string to_hex(uint256 const& value)
{
	if (value == 0)
		return "0x0";
	std::string digits;
	uint256 v = value;
	while (v != 0)
	{
		auto const nibble = static_cast<unsigned>(v & 0xf);
		digits.insert(digits.begin(), "0123456789abcdef"[nibble]);
		v >>= 4;
	}
	return "0x" + digits;
}

std::string to_hex(bytes_view data)
{
	std::string out;
	out.reserve(data.size() * 2);
	for (auto b: data)
	{
		out.push_back("0123456789abcdef"[b >> 4]);
		out.push_back("0123456789abcdef"[b & 0xf]);
	}
	return out;
}

std::optional<uint256> parse_decimal_literal(std::string_view text, unsigned unit_exponent)
{
	// Arbitrary precision here so that overflow is detected rather than wrapped.
	mp::cpp_int mantissa = 0;
	long exponent = unit_exponent;
	bool in_fraction = false;
	std::size_t i = 0;
	for (; i < text.size(); ++i)
	{
		char const c = text[i];
		if (c == '_')
			continue;
		if (c == '.')
		{
			if (in_fraction)
				return std::nullopt;
			in_fraction = true;
			continue;
		}
		if (c == 'e' || c == 'E')
			break;
		if (c < '0' || c > '9')
			return std::nullopt;
		mantissa = mantissa * 10 + (c - '0');
		if (in_fraction)
			--exponent;
	}
	if (i < text.size())
	{
		++i;
		bool negative = false;
		if (i < text.size() && text[i] == '-')
		{
			negative = true;
			++i;
		}
		if (i == text.size())
			return std::nullopt;
		long e = 0;
		for (; i < text.size(); ++i)
		{
			if (text[i] < '0' || text[i] > '9' || e > 1000)
				return std::nullopt;
			e = e * 10 + (text[i] - '0');
		}
		exponent += negative ? -e : e;
	}
	if (exponent > 100)
		return std::nullopt;
	if (exponent >= 0)
		mantissa *= mp::pow(mp::cpp_int(10), static_cast<unsigned>(exponent));
	else
	{
		mp::cpp_int const divisor = mp::pow(mp::cpp_int(10), static_cast<unsigned>(-exponent));
		if (mantissa % divisor != 0)
			return std::nullopt;
		mantissa /= divisor;
	}
	if (mantissa >= (mp::cpp_int(1) << 256))
		return std::nullopt;
	return static_cast<uint256>(mantissa);
}

std::optional<uint256> parse_hex_literal(std::string_view text)
{
	if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
		return std::nullopt;
	uint256 v = 0;
	unsigned digits = 0;
	for (char c: text.substr(2))
	{
		if (c == '_')
			continue;
		unsigned nibble = 0;
		if (c >= '0' && c <= '9')
			nibble = static_cast<unsigned>(c - '0');
		else if (c >= 'a' && c <= 'f')
			nibble = static_cast<unsigned>(c - 'a' + 10);
		else if (c >= 'A' && c <= 'F')
			nibble = static_cast<unsigned>(c - 'A' + 10);
		else
			return std::nullopt;
		if (v != 0 || nibble != 0)
			++digits;
		if (digits > 64)
			return std::nullopt;
		v = (v << 4) | nibble;
	}
	return v;
}

}
