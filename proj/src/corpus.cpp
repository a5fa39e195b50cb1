#include <soldefect/corpus.hpp>
#include <soldefect/detectors.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace soldefect
{

namespace
{

std::string_view trim(std::string_view s)
{
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
		s.remove_prefix(1);
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
		s.remove_suffix(1);
	return s;
}

}

CorpusManifest parse_manifest(std::string_view text)
{
	CorpusManifest manifest;
	std::size_t number = 0;
	while (!text.empty())
	{
		auto const eol = text.find('\n');
		auto line = trim(text.substr(0, eol));
		text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
		++number;
		if (line.empty() || line.front() == '#')
			continue;

		auto const last = line.rfind(':');
		if (last == std::string_view::npos || last == 0)
			throw ManifestError(number, "expected path:line:detector");
		auto const middle = line.rfind(':', last - 1);
		if (middle == std::string_view::npos)
			throw ManifestError(number, "expected path:line:detector");
		auto const path = trim(line.substr(0, middle));
		auto const line_text = trim(line.substr(middle + 1, last - middle - 1));
		auto const detector = trim(line.substr(last + 1));
		if (path.empty())
			throw ManifestError(number, "empty path");

		ManifestEntry entry;
		entry.path = std::string(path);
		if (line_text != "*")
		{
			if (line_text.empty() || line_text.find_first_not_of("0123456789") != std::string_view::npos ||
				line_text.size() > 18)
				throw ManifestError(number, "line must be a number or *, got '" + std::string(line_text) + "'");
			entry.line = std::stoull(std::string(line_text));
		}
		auto const* d = find_detector(detector);
		if (!d)
			throw ManifestError(number, "unknown detector '" + std::string(detector) + "'");
		entry.detector = std::string(d->id);
		manifest.entries.push_back(std::move(entry));
	}
	return manifest;
}

CorpusManifest load_manifest(std::filesystem::path const& path, std::optional<std::filesystem::path> const& corpus_root)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot read manifest " + path.string());
	std::stringstream buffer;
	buffer << in.rdbuf();
	auto manifest = parse_manifest(buffer.str());
	if (corpus_root)
	{
		// Report the first missing path with its manifest line number.
		std::size_t number = 0;
		std::istringstream lines(buffer.str());
		std::string line;
		std::size_t index = 0;
		while (std::getline(lines, line))
		{
			++number;
			auto const t = trim(line);
			if (t.empty() || t.front() == '#')
				continue;
			auto const& entry = manifest.entries.at(index++);
			if (!std::filesystem::exists(*corpus_root / entry.path))
				throw ManifestError(number, "no such file in corpus: " + entry.path);
		}
	}
	return manifest;
}

double DetectorScore::precision() const
{
	auto const d = true_positives + false_positives;
	return d == 0 ? 1.0 : static_cast<double>(true_positives) / static_cast<double>(d);
}

double DetectorScore::recall() const
{
	auto const d = matched_entries + false_negatives;
	return d == 0 ? 1.0 : static_cast<double>(matched_entries) / static_cast<double>(d);
}

ScoreCard score(Report const& report, CorpusManifest const& manifest, ScoreOptions const& options)
{
	ScoreCard card;
	for (auto const& d: detector_registry())
		card.per_detector[std::string(d.id)];

	auto matches = [&](Finding const& f, ManifestEntry const& e) {
		if (f.file != e.path || f.detector != e.detector)
			return false;
		return options.wildcard || !e.line || *e.line == f.position();
	};

	for (auto const& f: report.findings)
	{
		bool hit = false;
		for (auto const& e: manifest.entries)
			if (matches(f, e))
			{
				hit = true;
				break;
			}
		auto& s = card.per_detector[f.detector];
		(hit ? s.true_positives : s.false_positives) += 1;
	}
	for (auto const& e: manifest.entries)
	{
		bool hit = false;
		for (auto const& f: report.findings)
			if (matches(f, e))
			{
				hit = true;
				break;
			}
		auto& s = card.per_detector[e.detector];
		(hit ? s.matched_entries : s.false_negatives) += 1;
	}
	for (auto const& [id, s]: card.per_detector)
	{
		card.overall.true_positives += s.true_positives;
		card.overall.false_positives += s.false_positives;
		card.overall.false_negatives += s.false_negatives;
		card.overall.matched_entries += s.matched_entries;
	}

	std::set<std::string> files;
	for (auto const& i: report.inputs)
		files.insert(i.path);
	for (auto const& f: report.findings)
		files.insert(f.file);
	card.total_files = files.size();
	std::map<std::string, std::set<std::string>> per_detector_files;
	for (auto const& f: report.findings)
		per_detector_files[f.detector].insert(f.file);
	for (auto const& d: detector_registry())
	{
		DistributionRow row;
		row.detector = std::string(d.id);
		row.files = per_detector_files[row.detector].size();
		row.percent = card.total_files == 0 ? 0.0 : 100.0 * static_cast<double>(row.files) / static_cast<double>(card.total_files);
		card.distribution.push_back(row);
	}
	return card;
}

std::string format_distribution(std::size_t count, double percent)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%zu (%.2f%%)", count, percent);
	return buffer;
}

namespace
{

std::string fixed4(double v)
{
	char buffer[32];
	std::snprintf(buffer, sizeof buffer, "%.4f", v);
	return buffer;
}

}

std::string render_scorecard_text(ScoreCard const& card)
{
	std::ostringstream out;
	char line[256];
	std::snprintf(line, sizeof line, "%-4s %-30s %5s %5s %5s %9s %9s  %s\n", "id", "detector", "TP", "FP", "FN",
		"precision", "recall", "contracts");
	out << line;
	std::size_t row = 0;
	for (auto const& [id, s]: card.per_detector)
	{
		auto const* d = find_detector(id);
		std::snprintf(line, sizeof line, "%-4s %-30s %5zu %5zu %5zu %9s %9s  %s\n", id.c_str(),
			d ? std::string(d->slug).c_str() : "", s.true_positives, s.false_positives, s.false_negatives,
			fixed4(s.precision()).c_str(), fixed4(s.recall()).c_str(),
			format_distribution(card.distribution.at(row).files, card.distribution.at(row).percent).c_str());
		out << line;
		++row;
	}
	auto const& o = card.overall;
	std::snprintf(line, sizeof line, "%-4s %-30s %5zu %5zu %5zu %9s %9s  %zu files\n", "all", "overall",
		o.true_positives, o.false_positives, o.false_negatives, fixed4(o.precision()).c_str(),
		fixed4(o.recall()).c_str(), card.total_files);
	out << line;
	return out.str();
}

std::string render_scorecard_json(ScoreCard const& card)
{
	using json = nlohmann::ordered_json;
	auto score_json = [](DetectorScore const& s) {
		return json{
			{"true_positives", s.true_positives},
			{"false_positives", s.false_positives},
			{"false_negatives", s.false_negatives},
			{"precision", s.precision()},
			{"recall", s.recall()},
		};
	};
	json j;
	j["per_detector"] = json::object();
	for (auto const& [id, s]: card.per_detector)
		j["per_detector"][id] = score_json(s);
	j["overall"] = score_json(card.overall);
	j["total_files"] = card.total_files;
	j["distribution"] = json::array();
	for (auto const& row: card.distribution)
		j["distribution"].push_back({{"detector", row.detector}, {"files", row.files}, {"percent", row.percent},
			{"formatted", format_distribution(row.files, row.percent)}});
	return j.dump(2) + "\n";
}

}
