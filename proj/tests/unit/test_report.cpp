#include "../support/test_support.hpp"

#include <soldefect/detectors.hpp>
#include <soldefect/report.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <random>

using namespace soldefect;
using namespace soldefect::test;
using nlohmann::json;

namespace
{

Finding random_finding(std::mt19937_64& rng)
{
	auto const registry = detector_registry();
	auto const& d = registry[rng() % registry.size()];
	Finding f;
	f.detector = std::string(d.id);
	f.category = d.category;
	f.impact = d.impact;
	f.file = "dir/file" + std::to_string(rng() % 4) + (rng() % 2 ? ".sol" : ".hex");
	if (f.file.ends_with(".sol"))
	{
		f.line = static_cast<std::uint32_t>(1 + rng() % 50);
		f.column = static_cast<std::uint32_t>(1 + rng() % 80);
	}
	else
	{
		f.pc = rng() % 5000;
		f.block = rng() % 40;
	}
	f.message = "message \"" + std::to_string(rng() % 1000) + "\"\t\\ unicode \xc3\xa9";
	f.advice = std::string(d.advice);
	return f;
}

Report random_report(std::mt19937_64& rng)
{
	std::vector<Finding> findings;
	for (std::size_t n = rng() % 25; n > 0; --n)
		findings.push_back(random_finding(rng));
	std::vector<ReportInput> inputs;
	for (int i = 0; i < 4; ++i)
		inputs.push_back({"dir/file" + std::to_string(i) + ".sol", sha256_hex(std::to_string(i))});
	return make_report(std::move(inputs), std::move(findings));
}

Report golden_report(std::string const& name)
{
	return analyze_text(name, read_file(golden(name)), true, {}).report;
}

std::set<std::string> ids(Report const& r)
{
	std::set<std::string> out;
	for (auto const& f: r.findings)
		out.insert(f.detector);
	return out;
}

}

TEST(Report, Sha256KnownAnswer)
{
	EXPECT_EQ(sha256_hex(std::string_view("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
	EXPECT_EQ(sha256_hex(std::string_view("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Report, JsonRoundTrip)
{
	std::mt19937_64 rng(11);
	for (int i = 0; i < 200; ++i)
	{
		auto const report = random_report(rng);
		auto const text = render(report, ReportFormat::json);
		ASSERT_EQ(parse_report_json(text), report);
		ASSERT_EQ(render(parse_report_json(text), ReportFormat::json), text);
	}
}

TEST(Report, SortedAndUniqueByIdentity)
{
	std::mt19937_64 rng(12);
	for (int i = 0; i < 200; ++i)
	{
		auto const report = random_report(rng);
		for (std::size_t k = 1; k < report.findings.size(); ++k)
		{
			ASSERT_FALSE(finding_less(report.findings[k], report.findings[k - 1]));
			ASSERT_FALSE(report.findings[k].same_identity(report.findings[k - 1]));
		}
	}
}

TEST(Report, ImpactFilterIdempotentAndCommutes)
{
	std::mt19937_64 rng(13);
	for (int i = 0; i < 200; ++i)
	{
		auto const report = random_report(rng);
		auto const level = static_cast<Impact>(1 + rng() % 5);
		std::set<std::string> subset;
		for (auto const& d: detector_registry())
			if (rng() % 2)
				subset.insert(std::string(d.id));
		auto const once = filter_by_impact(report, level);
		ASSERT_EQ(filter_by_impact(once, level), once);
		ASSERT_EQ(filter_by_detectors(filter_by_impact(report, level), subset),
			filter_by_impact(filter_by_detectors(report, subset), level));
		ASSERT_EQ(filter_by_impact(report, Impact::IP5), report);
		for (auto const& f: once.findings)
			ASSERT_LE(static_cast<int>(f.impact), static_cast<int>(level));
		ASSERT_EQ(once.summary, summarize(once.findings));
	}
}

TEST(Report, ImpactFilterOnListings)
{
	EXPECT_EQ(ids(filter_by_impact(golden_report("gamble.sol"), Impact::IP1)), (std::set<std::string>{"D05"}));
	auto const listing3 = filter_by_impact(golden_report("defect_example.sol"), "IP3");
	EXPECT_EQ(ids(listing3), (std::set<std::string>{"D09", "D13"}));
	EXPECT_THROW(filter_by_impact(listing3, "IP9"), std::invalid_argument);
}

TEST(Report, MergeIsOrderInsensitiveAndAssociative)
{
	std::mt19937_64 rng(14);
	for (int i = 0; i < 100; ++i)
	{
		auto const a = random_report(rng);
		auto const b = random_report(rng);
		auto const c = random_report(rng);
		auto const abc = merge_reports({a, b, c});
		ASSERT_EQ(merge_reports({c, a, b}), abc);
		ASSERT_EQ(merge_reports({merge_reports({a, b}), c}), abc);
		ASSERT_EQ(merge_reports({a, merge_reports({b, c})}), abc);
	}
}

TEST(Report, EmptyJsonHasZeroSummary)
{
	auto const doc = json::parse(render(make_report({}, {}), ReportFormat::json));
	EXPECT_TRUE(doc["findings"].is_array());
	EXPECT_TRUE(doc["findings"].empty());
	ASSERT_EQ(doc["summary"]["by_detector"].size(), 20u);
	for (auto const& [key, value]: doc["summary"]["by_detector"].items())
		EXPECT_EQ(value, 0) << key;
	for (auto const& [key, value]: doc["summary"]["by_impact"].items())
		EXPECT_EQ(value, 0) << key;
	EXPECT_EQ(doc["summary"]["by_category"].size(), 5u);
	EXPECT_EQ(doc["tool"], "soldefect");
}

TEST(Report, JsonFieldsAreNeverOmitted)
{
	auto const doc = json::parse(render(golden_report("gamble.sol"), ReportFormat::json));
	for (auto const& f: doc["findings"])
	{
		for (auto key: {"detector", "category", "impact", "file", "line", "column", "pc", "message", "advice"})
			ASSERT_TRUE(f.contains(key)) << key;
		EXPECT_TRUE(f["pc"].is_null());
		EXPECT_TRUE(f["line"].is_number());
	}
	ASSERT_EQ(doc["inputs"].size(), 1u);
	EXPECT_EQ(doc["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(Report, TextHasOneLinePerFinding)
{
	Finding f{"D05", Category::security, Impact::IP1, "a.sol", 8, 3, std::nullopt, std::nullopt, "tx.origin used", ""};
	auto const text = render(make_report({{"a.sol", sha256_hex(std::string_view("x"))}}, {f}), ReportFormat::text);
	std::istringstream lines(text);
	std::vector<std::string> all;
	for (std::string line; std::getline(lines, line);)
		all.push_back(line);
	ASSERT_EQ(all.size(), 2u);
	EXPECT_EQ(all[0], "a.sol:8: [D05][IP1] tx.origin used");
	EXPECT_TRUE(all[1].starts_with("summary:"));
}

TEST(Report, RenderingIsDeterministic)
{
	auto const report = golden_report("gamble.sol");
	for (auto format: {ReportFormat::text, ReportFormat::json, ReportFormat::sarif})
		EXPECT_EQ(render(report, format), render(report, format));
}

TEST(Report, SarifStructure)
{
	auto const report = golden_report("gamble.sol");
	auto const doc = json::parse(render(report, ReportFormat::sarif));
	EXPECT_EQ(doc["version"], "2.1.0");
	auto const& run = doc["runs"][0];
	auto const& rules = run["tool"]["driver"]["rules"];
	ASSERT_EQ(rules.size(), 20u);
	ASSERT_EQ(run["results"].size(), report.findings.size());
	for (std::size_t i = 0; i < report.findings.size(); ++i)
	{
		auto const& r = run["results"][i];
		EXPECT_EQ(r["ruleId"], report.findings[i].detector);
		EXPECT_EQ(rules[r["ruleIndex"].get<std::size_t>()]["id"], report.findings[i].detector);
		EXPECT_EQ(r["locations"][0]["physicalLocation"]["region"]["startLine"], *report.findings[i].line);
	}
}

TEST(Report, MalformedJsonIsRejected)
{
	EXPECT_THROW(parse_report_json("{"), ReportFormatError);
	EXPECT_THROW(parse_report_json("{\"tool\": 1}"), ReportFormatError);
	EXPECT_THROW(parse_report_format("xml"), std::invalid_argument);
}
