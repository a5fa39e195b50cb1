#pragma once

#include <soldefect/finding.hpp>
#include <soldefect/uint256.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect
{

inline constexpr std::string_view tool_name = "soldefect";
inline constexpr std::string_view tool_version = "1.0.0";

struct ReportInput
{
	std::string path;
	/// Lowercase hex SHA-256 of the file contents.
	std::string sha256;

	bool operator==(ReportInput const&) const = default;
};

/// Counts keyed by detector id, impact level and category. Every key is present, zero or not.
struct ReportSummary
{
	std::map<std::string, std::size_t> by_detector;
	std::map<std::string, std::size_t> by_impact;
	std::map<std::string, std::size_t> by_category;

	bool operator==(ReportSummary const&) const = default;
};

struct Report
{
	std::string tool = std::string(tool_name);
	std::string version = std::string(tool_version);
	/// Sorted by path.
	std::vector<ReportInput> inputs;
	/// Sorted with finding_less, one finding per identity.
	std::vector<Finding> findings;
	ReportSummary summary;

	bool operator==(Report const&) const = default;
};

struct ReportFormatError: std::runtime_error
{
	using std::runtime_error::runtime_error;
};

std::string sha256_hex(bytes_view data);
std::string sha256_hex(std::string_view text);

ReportSummary summarize(std::vector<Finding> const& findings);

/// Sorts inputs and findings, merges findings by identity and recomputes the summary.
Report make_report(std::vector<ReportInput> inputs, std::vector<Finding> findings);

/// Union of several reports; the result does not depend on the order of `parts`.
Report merge_reports(std::vector<Report> const& parts);

/// Keeps findings at `min_impact` or more severe (IP1 is the most severe).
Report filter_by_impact(Report const& report, Impact min_impact);
/// Same, with the level given as text; throws std::invalid_argument for an unknown level.
Report filter_by_impact(Report const& report, std::string_view min_impact);

/// Keeps findings of the given detector ids.
Report filter_by_detectors(Report const& report, std::set<std::string> const& ids);

enum class ReportFormat
{
	text,
	json,
	sarif
};

/// Throws std::invalid_argument for anything but text, json and sarif.
ReportFormat parse_report_format(std::string_view text);

/// text: `file:line: [id][impact] message` per finding and one closing summary line.
/// json: stable schema, absent fields are null. sarif: SARIF 2.1.0 with one rule per detector.
std::string render(Report const& report, ReportFormat format);

/// Inverse of render(report, json). Throws ReportFormatError.
Report parse_report_json(std::string_view text);

}
