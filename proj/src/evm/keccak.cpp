#include <soldefect/evm/keccak.hpp>

#include <cstring>

namespace soldefect::evm
{

namespace
{

constexpr std::array<std::uint64_t, 24> round_constants{
	0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
	0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
	0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
	0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
	0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
	0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

// Rotation offsets and lane permutation for the combined rho/pi step, following the lane walk
// starting at (1, 0).
constexpr std::array<unsigned, 24> rotations{
	1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
constexpr std::array<unsigned, 24> pi_lanes{
	10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

constexpr std::uint64_t rotl(std::uint64_t x, unsigned n) { return (x << n) | (x >> ((64 - n) & 63)); }

void keccak_f(std::array<std::uint64_t, 25>& a)
{
	for (auto const rc: round_constants)
	{
		std::array<std::uint64_t, 5> c{};
		for (unsigned x = 0; x < 5; ++x)
			c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
		for (unsigned x = 0; x < 5; ++x)
		{
			auto const d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
			for (unsigned y = 0; y < 25; y += 5)
				a[y + x] ^= d;
		}
		auto current = a[1];
		for (unsigned i = 0; i < 24; ++i)
		{
			auto const j = pi_lanes[i];
			auto const saved = a[j];
			a[j] = rotl(current, rotations[i]);
			current = saved;
		}
		for (unsigned y = 0; y < 25; y += 5)
		{
			std::array<std::uint64_t, 5> row{a[y], a[y + 1], a[y + 2], a[y + 3], a[y + 4]};
			for (unsigned x = 0; x < 5; ++x)
				a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
		}
		a[0] ^= rc;
	}
}

std::uint64_t load_le(std::uint8_t const* p)
{
	std::uint64_t v = 0;
	for (int i = 7; i >= 0; --i)
		v = (v << 8) | p[i];
	return v;
}

}

Hash256 sponge256(bytes_view data, std::uint8_t domain)
{
	constexpr std::size_t rate = 136;
	std::array<std::uint64_t, 25> state{};
	auto absorb = [&](std::uint8_t const* block) {
		for (std::size_t i = 0; i < rate / 8; ++i)
			state[i] ^= load_le(block + 8 * i);
		keccak_f(state);
	};
	std::size_t offset = 0;
	for (; offset + rate <= data.size(); offset += rate)
		absorb(data.data() + offset);

	std::array<std::uint8_t, rate> last{};
	auto const remaining = data.size() - offset;
	if (remaining)
		std::memcpy(last.data(), data.data() + offset, remaining);
	last[remaining] ^= domain;
	last[rate - 1] ^= 0x80;
	absorb(last.data());

	Hash256 out{};
	for (std::size_t i = 0; i < out.size(); ++i)
		out[i] = static_cast<std::uint8_t>(state[i / 8] >> (8 * (i % 8)));
	return out;
}

Hash256 keccak256(bytes_view data) { return sponge256(data, 0x01); }

Hash256 keccak256(std::string_view text)
{
	return keccak256(bytes_view(reinterpret_cast<std::uint8_t const*>(text.data()), text.size()));
}

std::uint32_t selector(std::string_view signature)
{
	auto const h = keccak256(signature);
	return (std::uint32_t(h[0]) << 24) | (std::uint32_t(h[1]) << 16) | (std::uint32_t(h[2]) << 8) | h[3];
}

std::string selector_hex(std::uint32_t value)
{
	std::string out(8, '0');
	for (int i = 7; i >= 0; --i, value >>= 4)
		out[static_cast<std::size_t>(i)] = "0123456789abcdef"[value & 0xf];
	return out;
}

}
