#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect
{

struct FetchSettings
{
	/// Explorer-style JSON API endpoint, e.g. https://api.etherscan.io/api.
	std::string api_base_url;
	std::string api_key;
	std::filesystem::path cache_dir = ".soldefect-cache";
	int timeout_seconds = 30;
};

/// Malformed address or missing API endpoint.
struct FetchUsageError: std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};

struct FetchError: std::runtime_error
{
	FetchError(std::string const& message, bool rate_limited = false, std::optional<int> retry_after = std::nullopt):
		std::runtime_error(message), rate_limited(rate_limited), retry_after(retry_after)
	{
	}
	bool rate_limited;
	std::optional<int> retry_after;
};

struct FetchResult
{
	std::string address;
	/// Written (or found) files, sorted.
	std::vector<std::filesystem::path> files;
	bool from_cache = false;
	bool verified = false;
	/// Set when only bytecode was available.
	std::string notice;
};

/// "0x" followed by 40 hex digits (the prefix is optional); returns the lowercase 0x form.
/// Throws FetchUsageError.
std::string normalize_address(std::string_view address);

/// Downloads verified source (`<address>.sol`) or, for unverified contracts, deployed bytecode
/// (`<address>.hex`) into `<cache_dir>/<address>/`. A populated cache entry is returned without
/// any network access.
FetchResult fetch_contract(std::string_view address, FetchSettings const& settings);

}
