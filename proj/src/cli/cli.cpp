#include <soldefect/cli.hpp>

#include <soldefect/analyzer.hpp>
#include <soldefect/config.hpp>
#include <soldefect/corpus.hpp>
#include <soldefect/fetch.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace soldefect
{

namespace fs = std::filesystem;

namespace
{

struct AnalyzeArgs
{
	std::vector<std::string> paths;
	std::string format;
	std::string min_impact;
	std::vector<std::string> enable;
	std::vector<std::string> disable;
	std::string mode;
	std::string output;
	std::string config;
	unsigned jobs = 0;
};

struct FetchArgs
{
	std::string address;
	std::string config;
	std::string api_url;
	std::string cache_dir;
	int timeout = 0;
};

struct ScoreArgs
{
	std::string root;
	std::string manifest;
	std::string format = "text";
	bool wildcard = false;
	unsigned jobs = 0;
};

std::set<std::string> parse_lists(std::vector<std::string> const& items)
{
	std::set<std::string> out;
	for (auto const& item: items)
		out.merge(parse_detector_list(item));
	return out;
}

int run_analyze(AnalyzeArgs const& args, CLI::App const& cmd, std::ostream& out, std::ostream& err)
{
	RunConfig config;
	try
	{
		if (!args.config.empty())
			apply_config_file(config, args.config);
		apply_environment(config);
		if (cmd.count("--format"))
			config.format = parse_report_format(args.format);
		if (cmd.count("--min-impact"))
		{
			auto level = parse_impact(args.min_impact);
			if (!level)
				throw std::invalid_argument("unknown impact level '" + args.min_impact + "' (expected IP1..IP5)");
			config.min_impact = *level;
		}
		if (cmd.count("--enable"))
			config.detectors.enable = parse_lists(args.enable);
		if (cmd.count("--disable"))
			config.detectors.disable = parse_lists(args.disable);
		if (cmd.count("--mode"))
			config.mode = parse_input_mode(args.mode);
		if (cmd.count("--jobs"))
			config.jobs = args.jobs;
		if (cmd.count("--output"))
			config.output = args.output;
	}
	catch (ConfigError const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_usage;
	}
	catch (std::invalid_argument const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_usage;
	}

	AnalyzeOptions options;
	options.mode = config.mode;
	options.detectors = config.detectors;
	options.jobs = config.jobs;
	std::vector<fs::path> paths(args.paths.begin(), args.paths.end());
	AnalysisResult result = analyze_paths(paths, options);

	for (auto const& input: result.inputs)
		for (auto const& message: input.messages)
			err << message << "\n";
	if (result.inputs.empty())
	{
		err << "soldefect: no .sol, .hex or .bin inputs found\n";
		return exit_usage;
	}

	Report const report = filter_by_impact(result.report, config.min_impact);
	std::string const rendered = render(report, config.format);
	if (config.output)
	{
		std::ofstream file(*config.output, std::ios::binary);
		file << rendered;
		if (!file)
		{
			err << "soldefect: cannot write " << *config.output << "\n";
			return exit_io;
		}
	}
	else
		out << rendered;

	if (result.count(InputStatus::io_failed) > 0)
		return exit_io;
	if (result.count(InputStatus::parse_failed) == result.inputs.size())
		return exit_usage;
	return report.findings.empty() ? exit_clean : exit_findings;
}

int run_fetch(FetchArgs const& args, CLI::App const& cmd, std::ostream& out, std::ostream& err)
{
	RunConfig config;
	try
	{
		if (!args.config.empty())
			apply_config_file(config, args.config);
	}
	catch (ConfigError const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_usage;
	}
	apply_environment(config);
	if (cmd.count("--api-url"))
		config.fetch.api_base_url = args.api_url;
	if (cmd.count("--cache-dir"))
		config.fetch.cache_dir = args.cache_dir;
	if (cmd.count("--timeout"))
		config.fetch.timeout_seconds = args.timeout;

	try
	{
		FetchResult const result = fetch_contract(args.address, config.fetch);
		if (!result.notice.empty())
			err << "soldefect: " << result.address << ": " << result.notice << "\n";
		for (auto const& file: result.files)
			out << file.generic_string() << "\n";
		return exit_clean;
	}
	catch (FetchUsageError const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_usage;
	}
	catch (FetchError const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_io;
	}
	catch (std::exception const& e)
	{
		err << "soldefect: fetch failed: " << e.what() << "\n";
		return exit_io;
	}
}

int run_score(ScoreArgs const& args, std::ostream& out, std::ostream& err)
{
	fs::path const root = args.root;
	std::error_code ec;
	if (!fs::is_directory(root, ec))
	{
		err << "soldefect: corpus root " << args.root << " does not exist\n";
		return exit_io;
	}
	fs::path const manifest_path = args.manifest.empty() ? root / "manifest.txt" : fs::path(args.manifest);
	if (args.format != "text" && args.format != "json")
	{
		err << "soldefect: unknown score format '" << args.format << "' (expected text or json)\n";
		return exit_usage;
	}

	CorpusManifest manifest;
	try
	{
		manifest = load_manifest(manifest_path, root);
	}
	catch (ManifestError const& e)
	{
		err << "soldefect: " << manifest_path.generic_string() << ": " << e.what() << "\n";
		return exit_usage;
	}
	catch (std::exception const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_io;
	}

	AnalyzeOptions options;
	options.jobs = args.jobs;
	options.display_root = root;
	AnalysisResult const result = analyze_paths({root}, options);
	for (auto const& input: result.inputs)
		if (input.status != InputStatus::analyzed)
			for (auto const& message: input.messages)
				err << message << "\n";

	ScoreOptions score_options;
	score_options.wildcard = args.wildcard;
	ScoreCard const card = score(result.report, manifest, score_options);
	out << (args.format == "json" ? render_scorecard_json(card) : render_scorecard_text(card));

	if (result.count(InputStatus::io_failed) > 0)
		return exit_io;
	return card.overall.precision() == 1.0 && card.overall.recall() == 1.0 ? exit_clean : exit_findings;
}

std::string frontends_text(unsigned frontends)
{
	std::string text;
	if (frontends & frontend_source)
		text = "source";
	if (frontends & frontend_bytecode)
		text += text.empty() ? "bytecode" : ",bytecode";
	return text;
}

int run_list(std::string const& format, std::ostream& out, std::ostream& err)
{
	if (format == "json")
	{
		nlohmann::ordered_json list = nlohmann::ordered_json::array();
		for (auto const& d: detector_registry())
		{
			nlohmann::ordered_json frontends = nlohmann::ordered_json::array();
			if (d.frontends & frontend_source)
				frontends.push_back("source");
			if (d.frontends & frontend_bytecode)
				frontends.push_back("bytecode");
			list.push_back({{"id", d.id},
				{"slug", d.slug},
				{"name", d.name},
				{"category", to_string(d.category)},
				{"impact", to_string(d.impact)},
				{"impact_note", d.impact_note},
				{"frontends", frontends}});
		}
		out << list.dump(2) << "\n";
		return exit_clean;
	}
	if (format != "text")
	{
		err << "soldefect: unknown format '" << format << "' (expected text or json)\n";
		return exit_usage;
	}
	for (auto const& d: detector_registry())
	{
		char line[256];
		std::snprintf(line, sizeof line, "%-4s %-16s %-4s %-30s %-35s %s\n", std::string(d.id).c_str(),
			std::string(to_string(d.category)).c_str(), std::string(to_string(d.impact)).c_str(),
			std::string(d.slug).c_str(), std::string(d.name).c_str(), frontends_text(d.frontends).c_str());
		out << line;
	}
	return exit_clean;
}

}

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Static defect detector for Ethereum smart contracts", std::string(tool_name)};
	app.set_version_flag("--version", std::string(tool_name) + " " + std::string(tool_version));
	app.require_subcommand(1);

	AnalyzeArgs analyze;
	auto* analyze_cmd = app.add_subcommand("analyze", "Analyze Solidity sources and EVM bytecode");
	analyze_cmd->add_option("paths", analyze.paths, "Files or directories (.sol, .hex, .bin)")->required();
	analyze_cmd->add_option("--format", analyze.format, "text, json or sarif");
	analyze_cmd->add_option("--min-impact", analyze.min_impact, "Report findings at IP1..this level (default IP5)");
	analyze_cmd->add_option("--enable", analyze.enable, "Run only these detectors (ids or slugs, comma separated)");
	analyze_cmd->add_option("--disable", analyze.disable, "Skip these detectors");
	analyze_cmd->add_option("--mode", analyze.mode, "auto, source or bytecode");
	analyze_cmd->add_option("--output,-o", analyze.output, "Write the report to a file");
	analyze_cmd->add_option("--config", analyze.config, "INI configuration file");
	analyze_cmd->add_option("--jobs,-j", analyze.jobs, "Worker threads (0 = all CPUs)");

	FetchArgs fetch;
	auto* fetch_cmd = app.add_subcommand("fetch", "Download contract source or bytecode from a block explorer API");
	fetch_cmd->add_option("address", fetch.address, "Contract address")->required();
	fetch_cmd->add_option("--config", fetch.config, "INI configuration file");
	fetch_cmd->add_option("--api-url", fetch.api_url, "Explorer API endpoint");
	fetch_cmd->add_option("--cache-dir", fetch.cache_dir, "Download cache directory");
	fetch_cmd->add_option("--timeout", fetch.timeout, "HTTP timeout in seconds");

	ScoreArgs score_args;
	auto* score_cmd = app.add_subcommand("score", "Compare findings on a labelled corpus with its manifest");
	score_cmd->add_option("root", score_args.root, "Corpus directory")->required();
	score_cmd->add_option("--manifest", score_args.manifest, "Manifest file (default <root>/manifest.txt)");
	score_cmd->add_option("--format", score_args.format, "text or json");
	score_cmd->add_flag("--wildcard", score_args.wildcard, "Match entries by file and detector only");
	score_cmd->add_option("--jobs,-j", score_args.jobs, "Worker threads (0 = all CPUs)");

	std::string list_format = "text";
	auto* list_cmd = app.add_subcommand("detectors", "List the detector catalog");
	list_cmd->add_option("--format", list_format, "text or json");

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::ParseError const& e)
	{
		int const code = app.exit(e, out, err);
		return code == 0 ? exit_clean : exit_usage;
	}

	try
	{
		if (*analyze_cmd)
			return run_analyze(analyze, *analyze_cmd, out, err);
		if (*fetch_cmd)
			return run_fetch(fetch, *fetch_cmd, out, err);
		if (*score_cmd)
			return run_score(score_args, out, err);
		return run_list(list_format, out, err);
	}
	catch (std::exception const& e)
	{
		err << "soldefect: " << e.what() << "\n";
		return exit_io;
	}
}

}
