#include <soldefect/fetch.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace soldefect
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string normalize_address(std::string_view address)
{
	std::string_view hex = address;
	if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
		hex.remove_prefix(2);
	if (hex.size() != 40 || !std::all_of(hex.begin(), hex.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); }))
		throw FetchUsageError("malformed address '" + std::string(address) + "': expected 0x followed by 40 hex digits");
	std::string out = "0x";
	for (char c: hex)
		out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	return out;
}

namespace
{

struct Endpoint
{
	std::string origin;
	std::string path;
};

Endpoint split_url(std::string const& url)
{
	auto const scheme_end = url.find("://");
	if (scheme_end == std::string::npos)
		throw FetchUsageError("api_base_url must start with http:// or https://: '" + url + "'");
	auto const path_start = url.find('/', scheme_end + 3);
	Endpoint e;
	e.origin = url.substr(0, path_start);
	e.path = path_start == std::string::npos ? "/" : url.substr(path_start);
	return e;
}

std::vector<fs::path> cached_files(fs::path const& dir)
{
	std::vector<fs::path> files;
	std::error_code ec;
	if (!fs::is_directory(dir, ec))
		return files;
	for (auto const& entry: fs::directory_iterator(dir, ec))
	{
		auto const ext = entry.path().extension();
		if (entry.is_regular_file() && (ext == ".sol" || ext == ".hex"))
			files.push_back(entry.path());
	}
	std::sort(files.begin(), files.end());
	return files;
}

std::optional<int> retry_after(httplib::Result const& res)
{
	if (!res->has_header("Retry-After"))
		return std::nullopt;
	try
	{
		return std::stoi(res->get_header_value("Retry-After"));
	}
	catch (std::exception const&)
	{
		return std::nullopt;
	}
}

json get_json(httplib::Client& client, Endpoint const& endpoint, httplib::Params const& params)
{
	auto res = client.Get(endpoint.path, params, httplib::Headers{});
	if (!res)
		throw FetchError("request to " + endpoint.origin + " failed: " + httplib::to_string(res.error()));
	if (res->status == 429)
	{
		auto const wait = retry_after(res);
		throw FetchError(
			"rate limited by " + endpoint.origin + (wait ? "; retry after " + std::to_string(*wait) + "s" : "; retry later"),
			true, wait);
	}
	if (res->status != 200)
		throw FetchError("request to " + endpoint.origin + " returned HTTP " + std::to_string(res->status));
	json body = json::parse(res->body, nullptr, false);
	if (body.is_discarded())
		throw FetchError("response from " + endpoint.origin + " is not JSON");
	if (body.value("status", "") == "0")
	{
		std::string detail = body.contains("result") && body["result"].is_string() ? body["result"].get<std::string>()
																				   : body.value("message", "");
		std::string lowered = detail;
		std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
		if (lowered.find("rate limit") != std::string::npos)
			throw FetchError("rate limited by " + endpoint.origin + ": " + detail + "; retry later", true);
		throw FetchError("explorer API error: " + detail);
	}
	if (body.contains("error"))
		throw FetchError("explorer API error: " + body["error"].dump());
	return body;
}

void write_file(fs::path const& p, std::string const& contents)
{
	std::ofstream out(p, std::ios::binary);
	out << contents;
	if (!out)
		throw FetchError("cannot write " + p.string());
}

// Multi-file submissions arrive as standard-JSON input, sometimes wrapped in an extra pair of braces.
std::optional<json> standard_json_sources(std::string const& source)
{
	if (source.empty() || source.front() != '{')
		return std::nullopt;
	std::string text = source;
	if (text.size() >= 4 && text.starts_with("{{") && text.ends_with("}}"))
		text = text.substr(1, text.size() - 2);
	json doc = json::parse(text, nullptr, false);
	if (doc.is_discarded() || !doc.is_object())
		return std::nullopt;
	if (doc.contains("sources") && doc["sources"].is_object())
		return doc["sources"];
	return doc;
}

std::string flatten_name(std::string const& name)
{
	std::string out;
	for (char c: name)
		out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') ? c : '_';
	if (!out.ends_with(".sol"))
		out += ".sol";
	return out;
}

}

FetchResult fetch_contract(std::string_view address, FetchSettings const& settings)
{
	FetchResult result;
	result.address = normalize_address(address);
	fs::path const dir = settings.cache_dir / result.address;

	if (auto files = cached_files(dir); !files.empty())
	{
		result.files = std::move(files);
		result.from_cache = true;
		result.verified = std::any_of(result.files.begin(), result.files.end(),
			[](fs::path const& p) { return p.extension() == ".sol"; });
		if (!result.verified)
			result.notice = "contract source is not verified; cached bytecode only";
		return result;
	}

	if (settings.api_base_url.empty())
		throw FetchUsageError("no explorer API configured; set fetch.api_base_url or pass --api-url");
	Endpoint const endpoint = split_url(settings.api_base_url);
	httplib::Client client(endpoint.origin);
	client.set_connection_timeout(settings.timeout_seconds, 0);
	client.set_read_timeout(settings.timeout_seconds, 0);
	client.set_follow_location(true);

	httplib::Params params{
		{"module", "contract"}, {"action", "getsourcecode"}, {"address", result.address}};
	if (!settings.api_key.empty())
		params.emplace("apikey", settings.api_key);
	json const body = get_json(client, endpoint, params);

	std::string source;
	if (body.contains("result") && body["result"].is_array() && !body["result"].empty() &&
		body["result"][0].is_object())
		source = body["result"][0].value("SourceCode", "");

	// Write to a scratch directory first so an interrupted fetch never looks like a cache hit.
	fs::path const staging = settings.cache_dir / (result.address + ".partial");
	std::error_code ec;
	fs::remove_all(staging, ec);
	fs::create_directories(staging);

	if (!source.empty())
	{
		result.verified = true;
		if (auto sources = standard_json_sources(source))
		{
			for (auto const& [name, entry]: sources->items())
				if (entry.is_object() && entry.contains("content") && entry["content"].is_string())
					write_file(staging / flatten_name(name), entry["content"].get<std::string>());
		}
		else
			write_file(staging / (result.address + ".sol"), source);
	}
	else
	{
		httplib::Params code_params{
			{"module", "proxy"}, {"action", "eth_getCode"}, {"address", result.address}, {"tag", "latest"}};
		if (!settings.api_key.empty())
			code_params.emplace("apikey", settings.api_key);
		json const code = get_json(client, endpoint, code_params);
		if (!code.contains("result") || !code["result"].is_string())
			throw FetchError("explorer API returned no bytecode for " + result.address);
		std::string hex = code["result"].get<std::string>();
		if (hex == "0x" || hex.empty())
		{
			fs::remove_all(staging, ec);
			throw FetchError("no code deployed at " + result.address);
		}
		write_file(staging / (result.address + ".hex"), hex + "\n");
		result.notice = "contract source is not verified; fetched deployed bytecode only";
	}

	fs::remove_all(dir, ec);
	fs::create_directories(dir.parent_path());
	fs::rename(staging, dir);
	result.files = cached_files(dir);
	return result;
}

}
