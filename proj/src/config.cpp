#include <soldefect/config.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace soldefect
{

namespace pt = boost::property_tree;

std::vector<std::string> split_list(std::string_view text)
{
	std::vector<std::string> items;
	std::string item;
	for (char c: text)
	{
		if (c == ',' || c == '[' || c == ']' || c == '"' || c == '\'' || std::isspace(static_cast<unsigned char>(c)))
		{
			if (!item.empty())
				items.push_back(std::move(item));
			item.clear();
		}
		else
			item += c;
	}
	if (!item.empty())
		items.push_back(std::move(item));
	return items;
}

namespace
{

bool parse_bool(std::string const& key, std::string const& value)
{
	std::string v;
	for (char c: value)
		v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	if (v == "true" || v == "1" || v == "yes" || v == "on")
		return true;
	if (v == "false" || v == "0" || v == "no" || v == "off")
		return false;
	throw ConfigError("config key " + key + ": expected a boolean, got '" + value + "'");
}

}

void apply_config_text(RunConfig& config, std::string const& text)
{
	// Boost's INI reader only knows ';' comments.
	std::istringstream lines(text);
	std::ostringstream cleaned;
	std::string line;
	while (std::getline(lines, line))
	{
		auto const first = line.find_first_not_of(" \t");
		if (first != std::string::npos && line[first] == '#')
			continue;
		cleaned << line << '\n';
	}

	pt::ptree tree;
	try
	{
		std::istringstream in(cleaned.str());
		pt::read_ini(in, tree);
	}
	catch (pt::ini_parser_error const& e)
	{
		throw ConfigError("config: " + e.message() + " at line " + std::to_string(e.line()));
	}

	std::map<std::string, std::string> flat;
	for (auto const& [key, node]: tree)
	{
		if (node.empty())
			flat[key] = node.data();
		else
			for (auto const& [child, value]: node)
				flat[key + "." + child] = value.data();
	}

	for (auto const& [key, value]: flat)
	{
		try
		{
			if (key == "format")
				config.format = parse_report_format(value);
			else if (key == "min_impact")
			{
				auto const level = parse_impact(value);
				if (!level)
					throw ConfigError("config key min_impact: unknown level '" + value + "'");
				config.min_impact = *level;
			}
			else if (key == "mode")
				config.mode = parse_input_mode(value);
			else if (key == "jobs")
				config.jobs = static_cast<unsigned>(std::stoul(value));
			else if (key == "enable")
				config.detectors.enable = parse_detector_list(value);
			else if (key == "disable")
				config.detectors.disable = parse_detector_list(value);
			else if (key == "strict.tx_origin_all_uses")
				config.detectors.tx_origin_all_uses = parse_bool(key, value);
			else if (key == "strict.balance_neq")
				config.detectors.balance_neq = parse_bool(key, value);
			else if (key == "deprecated.extra")
				config.detectors.deprecated_extra = split_list(value);
			else if (key == "fetch.api_base_url")
				config.fetch.api_base_url = value;
			else if (key == "fetch.cache_dir")
				config.fetch.cache_dir = value;
			else if (key == "fetch.timeout")
				config.fetch.timeout_seconds = std::stoi(value);
			else if (key == "fetch.api_key")
				throw ConfigError("config: the API key is read from SOLDEFECT_API_KEY only");
			else
				throw ConfigError("config: unknown key '" + key + "'");
		}
		catch (std::invalid_argument const& e)
		{
			throw ConfigError("config key " + key + ": " + e.what());
		}
		catch (std::out_of_range const&)
		{
			throw ConfigError("config key " + key + ": value out of range");
		}
	}
}

void apply_config_file(RunConfig& config, std::filesystem::path const& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ConfigError("cannot read config file " + path.string());
	std::stringstream buffer;
	buffer << in.rdbuf();
	apply_config_text(config, buffer.str());
}

void apply_environment(RunConfig& config)
{
	if (char const* key = std::getenv("SOLDEFECT_API_KEY"))
		config.fetch.api_key = key;
}

}
