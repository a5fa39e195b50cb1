#include "../support/reference_keccak.hpp"

#include <soldefect/evm/eip55.hpp>

#include <gtest/gtest.h>

#include <cctype>
#include <random>

using namespace soldefect;

namespace
{

std::string random_lower(std::mt19937_64& rng)
{
	std::string s;
	for (int i = 0; i < 40; ++i)
		s += "0123456789abcdef"[rng() % 16];
	return s;
}

std::string upper(std::string s)
{
	for (auto& c: s)
		c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
	return s;
}

}

TEST(Eip55, PublishedVectors)
{
	for (std::string const canonical: {"0x5aAeb6053F3E94C9b9A09f33669435E7Ef1BeAed",
			 "0xfB6916095ca1df60bB79Ce92cE3Ea74c37c5d359", "0xdbF03B407c01E7cD3CBea99509d93f8DDDC8C6FB",
			 "0xD1220A0cf47c7B9Be7A2E6BA89F429762e7b9aDb"})
	{
		std::string lower = canonical;
		for (auto& c: lower)
			c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
		EXPECT_EQ(evm::eip55_checksum(lower), canonical);
		EXPECT_TRUE(evm::eip55_is_valid(canonical));
	}
}

TEST(Eip55, OwnerLiteralFromListingOne)
{
	EXPECT_FALSE(evm::eip55_is_valid("0xdCad761e36CAb627E8CF9068A3c4fD617Cd1D3AD"));
	EXPECT_TRUE(evm::eip55_is_valid("0xdCad761e36CAb627E8CF9068A3c4fD617Cd1D3AF"));
}

TEST(Eip55, MatchesReferenceChecksum)
{
	std::mt19937_64 rng(99);
	for (int i = 0; i < 200; ++i)
	{
		auto const lower = random_lower(rng);
		EXPECT_EQ(evm::eip55_checksum(lower), test::reference_eip55(lower));
	}
}

TEST(Eip55, PropertiesOnRandomAddresses)
{
	std::mt19937_64 rng(1000);
	for (int i = 0; i < 1000; ++i)
	{
		auto const lower = random_lower(rng);
		auto const canonical = evm::eip55_checksum(lower);
		ASSERT_EQ(evm::eip55_checksum(canonical), canonical);
		ASSERT_TRUE(evm::eip55_is_valid("0x" + lower));
		ASSERT_TRUE(evm::eip55_is_valid("0x" + upper(lower)));
		ASSERT_TRUE(evm::eip55_is_valid(canonical));
		for (std::size_t k = 2; k < canonical.size(); ++k)
		{
			char const c = canonical[k];
			if (!std::isalpha(static_cast<unsigned char>(c)))
				continue;
			std::string flipped = canonical;
			flipped[k] = static_cast<char>(std::islower(static_cast<unsigned char>(c)) ? std::toupper(c) : std::tolower(c));
			// A flip that turns the literal into an all-lowercase or all-uppercase one is valid by rule.
			bool const single_case = flipped.substr(2) == lower || flipped.substr(2) == upper(lower);
			if (!single_case)
				ASSERT_FALSE(evm::eip55_is_valid(flipped)) << flipped;
		}
	}
}

TEST(Eip55, RejectsMalformed)
{
	EXPECT_THROW(evm::eip55_checksum("0x1234"), evm::InvalidAddressLiteral);
	EXPECT_THROW(evm::eip55_is_valid("0xzz5aAeb6053F3E94C9b9A09f33669435E7Ef1BeA"), evm::InvalidAddressLiteral);
}
