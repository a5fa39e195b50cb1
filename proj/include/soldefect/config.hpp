#pragma once

#include <soldefect/analyzer.hpp>
#include <soldefect/fetch.hpp>
#include <soldefect/report.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soldefect
{

struct ConfigError: std::runtime_error
{
	using std::runtime_error::runtime_error;
};

struct RunConfig
{
	std::vector<std::string> inputs;
	InputMode mode = InputMode::automatic;
	ReportFormat format = ReportFormat::text;
	Impact min_impact = Impact::IP5;
	DetectorConfig detectors;
	unsigned jobs = 0;
	std::optional<std::string> output;
	FetchSettings fetch;
};

/// Applies a flat INI file. Keys may be written at top level with dots (`strict.balance_neq`)
/// or inside sections (`[strict]` then `balance_neq`). Recognized keys: format, min_impact,
/// mode, jobs, enable, disable, strict.tx_origin_all_uses, strict.balance_neq, deprecated.extra,
/// fetch.api_base_url, fetch.cache_dir, fetch.timeout. Throws ConfigError.
void apply_config_file(RunConfig& config, std::filesystem::path const& path);

/// Same as apply_config_file for INI text already in memory.
void apply_config_text(RunConfig& config, std::string const& text);

/// Reads SOLDEFECT_API_KEY into config.fetch.api_key. The key is never read from files.
void apply_environment(RunConfig& config);

/// Splits "[a, b]" or "a,b" or "a b" into items.
std::vector<std::string> split_list(std::string_view text);

}
