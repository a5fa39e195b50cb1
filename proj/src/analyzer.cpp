#include <soldefect/analyzer.hpp>
#include <soldefect/evm/disassembler.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace soldefect
{

namespace fs = std::filesystem;

InputMode parse_input_mode(std::string_view text)
{
	if (text == "auto")
		return InputMode::automatic;
	if (text == "source")
		return InputMode::source;
	if (text == "bytecode")
		return InputMode::bytecode;
	throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected auto, source or bytecode)");
}

std::size_t AnalysisResult::count(InputStatus status) const
{
	return static_cast<std::size_t>(
		std::count_if(inputs.begin(), inputs.end(), [&](InputResult const& r) { return r.status == status; }));
}

namespace
{

bool analyzable_extension(fs::path const& p)
{
	auto const ext = p.extension().string();
	return ext == ".sol" || ext == ".hex" || ext == ".bin";
}

std::string diagnostic_text(std::string const& path, Diagnostic const& d)
{
	return path + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
		(d.severity == Severity::error ? "error: " : "warning: ") + d.message;
}

}

std::vector<fs::path> collect_inputs(std::vector<fs::path> const& paths)
{
	std::vector<fs::path> out;
	for (auto const& p: paths)
	{
		std::error_code ec;
		if (fs::is_directory(p, ec))
		{
			std::vector<fs::path> found;
			for (auto it = fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec);
				!ec && it != fs::recursive_directory_iterator(); it.increment(ec))
				if (it->is_regular_file(ec) && analyzable_extension(it->path()))
					found.push_back(it->path());
			std::sort(found.begin(), found.end());
			out.insert(out.end(), found.begin(), found.end());
		}
		else
			out.push_back(p);
	}
	return out;
}

InputResult analyze_text(std::string const& display_path, std::string_view contents, bool is_source,
	DetectorConfig const& config)
{
	InputResult result;
	result.path = display_path;
	std::vector<Finding> findings;
	AnalysisContext ctx;
	ctx.config = &config;
	std::unique_ptr<SourceFacts> source;
	std::unique_ptr<BytecodeFacts> bytecode;
	if (is_source)
	{
		source = build_source_facts(display_path, contents);
		for (auto const& d: source->diagnostics)
			result.messages.push_back(diagnostic_text(display_path, d));
		if (has_errors(source->diagnostics) && source->unit.contracts.empty() && source->unit.pragmas.empty())
		{
			result.status = InputStatus::parse_failed;
			return result;
		}
		ctx.source = source.get();
	}
	else
	{
		try
		{
			bytecode = build_bytecode_facts(display_path, evm::load_bytecode(contents));
		}
		catch (evm::BytecodeInputError const& e)
		{
			result.status = InputStatus::parse_failed;
			result.messages.push_back(display_path + ": error: " + e.what());
			return result;
		}
		ctx.bytecode = bytecode.get();
	}
	for (auto& run: run_detectors(ctx))
		findings.insert(findings.end(), std::make_move_iterator(run.findings.begin()),
			std::make_move_iterator(run.findings.end()));
	result.report = make_report({{display_path, sha256_hex(contents)}}, std::move(findings));
	return result;
}

AnalysisResult analyze_paths(std::vector<fs::path> const& paths, AnalyzeOptions const& options)
{
	auto const files = collect_inputs(paths);
	AnalysisResult result;
	result.inputs.resize(files.size());

	auto work = [&](std::size_t i) {
		auto const& p = files[i];
		std::string display = p.lexically_normal().generic_string();
		if (options.display_root)
		{
			std::error_code ec;
			auto rel = fs::relative(p, *options.display_root, ec);
			if (!ec && !rel.empty())
				display = rel.generic_string();
		}
		auto& out = result.inputs[i];
		std::ifstream in(p, std::ios::binary);
		std::error_code ec;
		if (!in || fs::is_directory(p, ec))
		{
			out.path = display;
			out.status = InputStatus::io_failed;
			out.messages.push_back(display + ": error: cannot read file");
			return;
		}
		std::stringstream buffer;
		buffer << in.rdbuf();
		bool is_source = options.mode == InputMode::source;
		if (options.mode == InputMode::automatic)
		{
			auto const ext = p.extension().string();
			if (ext != ".sol" && ext != ".hex" && ext != ".bin")
			{
				out.path = display;
				out.status = InputStatus::parse_failed;
				out.messages.push_back(display + ": error: unknown extension; use --mode source or --mode bytecode");
				return;
			}
			is_source = ext == ".sol";
		}
		out = analyze_text(display, buffer.str(), is_source, options.detectors);
	};

	unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
	jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(files.size(), 1)));
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < files.size(); i = next++)
			try
			{
				work(i);
			}
			catch (std::exception const& e)
			{
				auto& out = result.inputs[i];
				out = InputResult{};
				out.path = files[i].generic_string();
				out.status = InputStatus::parse_failed;
				out.messages.push_back(out.path + ": error: " + e.what());
			}
	};
	if (jobs <= 1)
		worker();
	else
	{
		std::vector<std::jthread> pool;
		for (unsigned t = 0; t < jobs; ++t)
			pool.emplace_back(worker);
	}

	std::vector<Report> parts;
	for (auto const& r: result.inputs)
		if (r.status == InputStatus::analyzed)
			parts.push_back(r.report);
	result.report = merge_reports(parts);
	return result;
}

}
