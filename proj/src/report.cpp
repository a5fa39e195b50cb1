#include <soldefect/detectors.hpp>
#include <soldefect/report.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace soldefect
{

using json = nlohmann::ordered_json;

std::string sha256_hex(bytes_view data)
{
	unsigned char digest[EVP_MAX_MD_SIZE];
	unsigned int length = 0;
	if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
		throw std::runtime_error("SHA-256 computation failed");
	return to_hex(bytes_view(digest, length));
}

std::string sha256_hex(std::string_view text)
{
	return sha256_hex(bytes_view(reinterpret_cast<std::uint8_t const*>(text.data()), text.size()));
}

ReportSummary summarize(std::vector<Finding> const& findings)
{
	ReportSummary s;
	for (auto const& d: detector_registry())
		s.by_detector[std::string(d.id)] = 0;
	for (int i = 1; i <= 5; ++i)
		s.by_impact[std::string(to_string(static_cast<Impact>(i)))] = 0;
	for (int i = 0; i < 5; ++i)
		s.by_category[std::string(to_string(static_cast<Category>(i)))] = 0;
	for (auto const& f: findings)
	{
		++s.by_detector[f.detector];
		++s.by_impact[std::string(to_string(f.impact))];
		++s.by_category[std::string(to_string(f.category))];
	}
	return s;
}

Report make_report(std::vector<ReportInput> inputs, std::vector<Finding> findings)
{
	Report r;
	std::sort(inputs.begin(), inputs.end(),
		[](ReportInput const& a, ReportInput const& b) { return std::tie(a.path, a.sha256) < std::tie(b.path, b.sha256); });
	inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
	r.inputs = std::move(inputs);
	normalize_findings(findings);
	r.findings = std::move(findings);
	r.summary = summarize(r.findings);
	return r;
}

Report merge_reports(std::vector<Report> const& parts)
{
	std::vector<ReportInput> inputs;
	std::vector<Finding> findings;
	for (auto const& p: parts)
	{
		inputs.insert(inputs.end(), p.inputs.begin(), p.inputs.end());
		findings.insert(findings.end(), p.findings.begin(), p.findings.end());
	}
	return make_report(std::move(inputs), std::move(findings));
}

Report filter_by_impact(Report const& report, Impact min_impact)
{
	Report r = report;
	std::erase_if(r.findings, [&](Finding const& f) { return f.impact > min_impact; });
	r.summary = summarize(r.findings);
	return r;
}

Report filter_by_impact(Report const& report, std::string_view min_impact)
{
	auto const level = parse_impact(min_impact);
	if (!level)
		throw std::invalid_argument("unknown impact level '" + std::string(min_impact) + "' (expected IP1..IP5)");
	return filter_by_impact(report, *level);
}

Report filter_by_detectors(Report const& report, std::set<std::string> const& ids)
{
	Report r = report;
	std::erase_if(r.findings, [&](Finding const& f) { return !ids.count(f.detector); });
	r.summary = summarize(r.findings);
	return r;
}

ReportFormat parse_report_format(std::string_view text)
{
	if (text == "text")
		return ReportFormat::text;
	if (text == "json")
		return ReportFormat::json;
	if (text == "sarif")
		return ReportFormat::sarif;
	throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected text, json or sarif)");
}

namespace
{

template <class T>
json optional_json(std::optional<T> const& v)
{
	return v ? json(*v) : json(nullptr);
}

json summary_json(std::map<std::string, std::size_t> const& counts)
{
	json j = json::object();
	for (auto const& [k, v]: counts)
		j[k] = v;
	return j;
}

std::string render_text(Report const& report)
{
	std::ostringstream out;
	for (auto const& f: report.findings)
	{
		out << f.file << ":";
		if (f.line)
			out << *f.line;
		else
			out << "pc" << f.pc.value_or(0);
		out << ": [" << f.detector << "][" << to_string(f.impact) << "] " << f.message << "\n";
	}
	out << "summary: " << report.findings.size() << (report.findings.size() == 1 ? " finding" : " findings");
	for (auto const& [level, count]: report.summary.by_impact)
		out << " " << level << "=" << count;
	out << "\n";
	return out.str();
}

std::string render_json(Report const& report)
{
	json j;
	j["tool"] = report.tool;
	j["version"] = report.version;
	j["inputs"] = json::array();
	for (auto const& i: report.inputs)
		j["inputs"].push_back({{"path", i.path}, {"sha256", i.sha256}});
	j["findings"] = json::array();
	for (auto const& f: report.findings)
		j["findings"].push_back({
			{"detector", f.detector},
			{"category", to_string(f.category)},
			{"impact", to_string(f.impact)},
			{"file", f.file},
			{"line", optional_json(f.line)},
			{"column", optional_json(f.column)},
			{"pc", optional_json(f.pc)},
			{"block", optional_json(f.block)},
			{"message", f.message},
			{"advice", f.advice},
		});
	j["summary"] = {
		{"by_detector", summary_json(report.summary.by_detector)},
		{"by_impact", summary_json(report.summary.by_impact)},
		{"by_category", summary_json(report.summary.by_category)},
	};
	return j.dump(2) + "\n";
}

std::string_view sarif_level(Impact impact)
{
	switch (impact)
	{
	case Impact::IP1:
	case Impact::IP2: return "error";
	case Impact::IP3:
	case Impact::IP4: return "warning";
	case Impact::IP5: return "note";
	}
	return "note";
}

std::string render_sarif(Report const& report)
{
	json rules = json::array();
	std::map<std::string, std::size_t> rule_index;
	for (auto const& d: detector_registry())
	{
		rule_index[std::string(d.id)] = rules.size();
		json properties = {{"category", to_string(d.category)}, {"impact", to_string(d.impact)}};
		if (!d.impact_note.empty())
			properties["impactNote"] = d.impact_note;
		rules.push_back({
			{"id", d.id},
			{"name", d.slug},
			{"shortDescription", {{"text", d.name}}},
			{"help", {{"text", d.advice}}},
			{"defaultConfiguration", {{"level", sarif_level(d.impact)}}},
			{"properties", properties},
		});
	}
	json artifacts = json::array();
	for (auto const& i: report.inputs)
		artifacts.push_back({{"location", {{"uri", i.path}}}, {"hashes", {{"sha-256", i.sha256}}}});
	json results = json::array();
	for (auto const& f: report.findings)
	{
		json region;
		if (f.line)
		{
			region["startLine"] = *f.line;
			if (f.column)
				region["startColumn"] = *f.column;
		}
		else
			region["byteOffset"] = f.pc.value_or(0);
		json result = {
			{"ruleId", f.detector},
			{"level", sarif_level(f.impact)},
			{"message", {{"text", f.message}}},
			{"locations", json::array({{{"physicalLocation", {{"artifactLocation", {{"uri", f.file}}}, {"region", region}}}}})},
			{"properties", {{"impact", to_string(f.impact)}, {"category", to_string(f.category)}}},
		};
		if (auto it = rule_index.find(f.detector); it != rule_index.end())
			result["ruleIndex"] = it->second;
		results.push_back(std::move(result));
	}
	json j = {
		{"$schema", "https://json.schemastore.org/sarif-2.1.0.json"},
		{"version", "2.1.0"},
		{"runs", json::array({{
			{"tool", {{"driver", {{"name", report.tool}, {"version", report.version}, {"rules", rules}}}}},
			{"artifacts", artifacts},
			{"results", results},
		}})},
	};
	return j.dump(2) + "\n";
}

}

std::string render(Report const& report, ReportFormat format)
{
	switch (format)
	{
	case ReportFormat::text: return render_text(report);
	case ReportFormat::json: return render_json(report);
	case ReportFormat::sarif: return render_sarif(report);
	}
	return render_text(report);
}

namespace
{

template <class T>
std::optional<T> optional_from(json const& j, char const* key)
{
	auto const& v = j.at(key);
	if (v.is_null())
		return std::nullopt;
	return v.get<T>();
}

std::map<std::string, std::size_t> counts_from(json const& j)
{
	std::map<std::string, std::size_t> out;
	for (auto const& [k, v]: j.items())
		out[k] = v.get<std::size_t>();
	return out;
}

}

Report parse_report_json(std::string_view text)
{
	try
	{
		auto const j = json::parse(text);
		Report r;
		r.tool = j.at("tool").get<std::string>();
		r.version = j.at("version").get<std::string>();
		for (auto const& i: j.at("inputs"))
			r.inputs.push_back({i.at("path").get<std::string>(), i.at("sha256").get<std::string>()});
		for (auto const& jf: j.at("findings"))
		{
			Finding f;
			f.detector = jf.at("detector").get<std::string>();
			auto const category = parse_category(jf.at("category").get<std::string>());
			auto const impact = parse_impact(jf.at("impact").get<std::string>());
			if (!category || !impact)
				throw ReportFormatError("bad category or impact in finding");
			f.category = *category;
			f.impact = *impact;
			f.file = jf.at("file").get<std::string>();
			f.line = optional_from<std::uint32_t>(jf, "line");
			f.column = optional_from<std::uint32_t>(jf, "column");
			f.pc = optional_from<std::uint64_t>(jf, "pc");
			f.block = optional_from<std::uint64_t>(jf, "block");
			f.message = jf.at("message").get<std::string>();
			f.advice = jf.at("advice").get<std::string>();
			r.findings.push_back(std::move(f));
		}
		auto const& s = j.at("summary");
		r.summary.by_detector = counts_from(s.at("by_detector"));
		r.summary.by_impact = counts_from(s.at("by_impact"));
		r.summary.by_category = counts_from(s.at("by_category"));
		return r;
	}
	catch (json::exception const& e)
	{
		throw ReportFormatError(std::string("malformed report: ") + e.what());
	}
}

}
