#pragma once

#include <soldefect/report.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect
{

struct ManifestEntry
{
	/// Relative to the corpus root, '/' separated.
	std::string path;
	/// nullopt for the `*` wildcard. For bytecode files the value is a pc.
	std::optional<std::uint64_t> line;
	/// Detector id (slugs are resolved when parsing).
	std::string detector;

	bool operator==(ManifestEntry const&) const = default;
};

struct CorpusManifest
{
	std::vector<ManifestEntry> entries;
};

struct ManifestError: std::runtime_error
{
	ManifestError(std::size_t line_number, std::string const& message):
		std::runtime_error("manifest line " + std::to_string(line_number) + ": " + message), line_number(line_number)
	{
	}
	std::size_t line_number;
};

/// One `path:line:detector` entry per line; `*` as line matches any line; blank lines and lines
/// starting with `#` are ignored. Throws ManifestError.
CorpusManifest parse_manifest(std::string_view text);

/// Reads and parses a manifest file. When `corpus_root` is given every referenced path must exist
/// below it. Throws ManifestError, or std::runtime_error if the file cannot be read.
CorpusManifest load_manifest(std::filesystem::path const& path,
	std::optional<std::filesystem::path> const& corpus_root = std::nullopt);

struct DetectorScore
{
	/// Findings that match an entry.
	std::size_t true_positives = 0;
	/// Findings that match no entry.
	std::size_t false_positives = 0;
	/// Entries matched by no finding.
	std::size_t false_negatives = 0;
	/// Entries matched by at least one finding.
	std::size_t matched_entries = 0;

	/// 0/0 is 1.
	double precision() const;
	/// 0/0 is 1.
	double recall() const;
};

struct DistributionRow
{
	std::string detector;
	/// Input files with at least one finding of the detector.
	std::size_t files = 0;
	double percent = 0.0;
};

struct ScoreCard
{
	/// Every registered detector, in id order.
	std::map<std::string, DetectorScore> per_detector;
	/// Micro average over all detectors.
	DetectorScore overall;
	std::vector<DistributionRow> distribution;
	std::size_t total_files = 0;
};

struct ScoreOptions
{
	/// Treat every entry as a wildcard (labels per contract rather than per line).
	bool wildcard = false;
};

/// A finding matches an entry when file, detector and line (or wildcard) agree. The distribution
/// denominator is the number of analyzed inputs in `report`.
ScoreCard score(Report const& report, CorpusManifest const& manifest, ScoreOptions const& options = {});

/// "532 (90.63%)".
std::string format_distribution(std::size_t count, double percent);

std::string render_scorecard_text(ScoreCard const& card);
std::string render_scorecard_json(ScoreCard const& card);

}
