#pragma once

#include <soldefect/detectors.hpp>
#include <soldefect/report.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace soldefect
{

enum class InputMode
{
	/// By extension: .sol is source, .hex and .bin are bytecode.
	automatic,
	source,
	bytecode
};

/// "auto", "source" or "bytecode"; throws std::invalid_argument otherwise.
InputMode parse_input_mode(std::string_view text);

struct AnalyzeOptions
{
	InputMode mode = InputMode::automatic;
	DetectorConfig detectors;
	/// Worker threads; 0 means one per logical CPU.
	unsigned jobs = 0;
	/// Report paths relative to this directory instead of as given.
	std::optional<std::filesystem::path> display_root;
};

enum class InputStatus
{
	analyzed,
	/// The input could not be parsed or decoded at all.
	parse_failed,
	/// Missing or unreadable.
	io_failed
};

struct InputResult
{
	std::string path;
	InputStatus status = InputStatus::analyzed;
	/// Parser diagnostics, decoding or I/O error text.
	std::vector<std::string> messages;
	Report report;
};

struct AnalysisResult
{
	/// Merged over all analyzed inputs.
	Report report;
	/// In input order.
	std::vector<InputResult> inputs;

	std::size_t count(InputStatus status) const;
};

/// Expands directories (recursively, .sol/.hex/.bin files, sorted) and keeps other paths as
/// given. Paths that do not exist are kept so that they are reported as I/O failures.
std::vector<std::filesystem::path> collect_inputs(std::vector<std::filesystem::path> const& paths);

/// Analyzes one in-memory input. `display_path` names it in the findings.
InputResult analyze_text(std::string const& display_path, std::string_view contents, bool is_source,
	DetectorConfig const& config);

/// Analyzes every input on a worker pool and merges the results deterministically.
AnalysisResult analyze_paths(std::vector<std::filesystem::path> const& paths, AnalyzeOptions const& options);

}
