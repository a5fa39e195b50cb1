#include <soldefect/detectors.hpp>
#include <soldefect/evm/disassembler.hpp>
#include <soldefect/parser.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace soldefect
{

namespace
{

constexpr unsigned both = frontend_source | frontend_bytecode;

constexpr std::array<DetectorDescriptor, 20> registry{{
	{"D01", "unchecked-external-calls", "Unchecked External Calls", Category::security, Impact::IP3,
		frontend_source, "type 2",
		"Check the boolean returned by send, call and delegatecall, for example with require(...), and "
		"handle the failure."},
	{"D02", "dos-under-external-influence", "DoS Under External Influence", Category::security, Impact::IP2,
		frontend_source, "",
		"Do not let one failing recipient revert a loop over many; use send and skip or record failures, or "
		"let each recipient withdraw separately."},
	{"D03", "strict-balance-equality", "Strict Balance Equality", Category::security, Impact::IP2, both, "",
		"Compare the balance against a range (>=, <) instead of an exact value; Ether can be forced into "
		"the contract."},
	{"D04", "unmatched-type-assignment", "Unmatched Type Assignment", Category::security, Impact::IP2,
		frontend_source, "",
		"Declare the loop counter as uint256 (or at least as wide as the bound) instead of relying on var."},
	{"D05", "transaction-state-dependency", "Transaction State Dependency", Category::security, Impact::IP1,
		frontend_source, "", "Authorize callers with msg.sender; tx.origin is the account that started the "
		"transaction, not the immediate caller."},
	{"D06", "block-info-dependency", "Block Info Dependency", Category::security, Impact::IP3, frontend_source,
		"type 2",
		"Do not derive decisions, indices or payments from block variables that miners influence; use a "
		"commit-reveal scheme or an oracle for randomness."},
	{"D07", "reentrancy", "Reentrancy", Category::security, Impact::IP1, frontend_source, "",
		"Update state before the external call, or pay with transfer, which forwards only a small gas "
		"stipend."},
	{"D08", "nested-call", "Nested Call", Category::security, Impact::IP2, both, "",
		"Bound the number of iterations of loops that make external calls, or process the work in batches."},
	{"D09", "misleading-data-location", "Misleading Data Location", Category::security, Impact::IP2,
		frontend_source, "",
		"State the data location of local arrays, structs and mappings explicitly (memory or storage)."},
	{"D10", "unmatched-erc20", "Unmatched ERC-20 Standard", Category::availability, Impact::IP4, both, "",
		"Implement every mandatory ERC-20 function and event with the standard parameter and return types."},
	{"D11", "missing-reminder", "Missing Reminder", Category::availability, Impact::IP4, frontend_source, "",
		"Emit an event when the function receives Ether so that off-chain clients are notified."},
	{"D12", "missing-return-statement", "Missing Return Statement", Category::availability, Impact::IP4,
		frontend_source, "", "Return a value on every path, or remove the declared return type."},
	{"D13", "greedy-contract", "Greedy Contract", Category::availability, Impact::IP3, frontend_source,
		"type 1", "Provide a way to withdraw the Ether the contract accepts, or stop accepting Ether."},
	{"D14", "unused-statement", "Unused Statement", Category::performance, Impact::IP5, frontend_source, "",
		"Remove variables and parameters whose values are never used."},
	{"D15", "high-gas-function-type", "High Gas Consumption Function Type", Category::performance, Impact::IP5,
		frontend_source, "",
		"Declare the function external when it is never called from inside the contract; array arguments "
		"are then read from calldata instead of copied to memory."},
	{"D16", "high-gas-data-type", "High Gas Consumption Data Type", Category::performance, Impact::IP5,
		frontend_source, "", "Use bytes instead of byte[]; each byte[] element is padded to a full word."},
	{"D17", "hard-code-address", "Hard Code Address", Category::maintainability, Impact::IP3, both, "type 2",
		"Pass addresses in through the constructor or a setter instead of hard-coding them, and keep "
		"mixed-case literals EIP-55 valid."},
	{"D18", "missing-interrupter", "Missing Interrupter", Category::maintainability, Impact::IP4,
		frontend_source, "",
		"Add an owner-controlled way to stop the contract, such as a pause flag or a selfdestruct function."},
	{"D19", "deprecated-apis", "Deprecated APIs", Category::reusability, Impact::IP5, frontend_source, "",
		"Replace throw with revert(), suicide with selfdestruct, sha3 with keccak256, block.blockhash with "
		"blockhash, msg.gas with gasleft(), callcode with delegatecall and constant functions with view."},
	{"D20", "unspecified-compiler-version", "Unspecified Compiler Version", Category::reusability, Impact::IP5,
		frontend_source, "", "Pin the compiler with an exact version such as pragma solidity 0.4.25;."},
}};

constexpr std::array<DetectorFunction, 20> functions{
	detect_unchecked_external_calls,
	detect_dos_under_external_influence,
	detect_strict_balance_equality,
	detect_unmatched_type_assignment,
	detect_transaction_state_dependency,
	detect_block_info_dependency,
	detect_reentrancy,
	detect_nested_call,
	detect_misleading_data_location,
	detect_unmatched_erc20,
	detect_missing_reminder,
	detect_missing_return_statement,
	detect_greedy_contract,
	detect_unused_statement,
	detect_high_gas_function_type,
	detect_high_gas_data_type,
	detect_hard_code_address,
	detect_missing_interrupter,
	detect_deprecated_apis,
	detect_unspecified_compiler_version,
};

std::string upper(std::string_view s)
{
	std::string out(s);
	for (auto& c: out)
		c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
	return out;
}

}

std::span<DetectorDescriptor const> detector_registry()
{
	return registry;
}

DetectorDescriptor const* find_detector(std::string_view id_or_slug)
{
	auto const id = upper(id_or_slug);
	for (auto const& d: registry)
		if (d.id == id || d.slug == id_or_slug)
			return &d;
	return nullptr;
}

bool DetectorConfig::is_enabled(std::string_view id) const
{
	std::string const key(id);
	if (disable.count(key))
		return false;
	return enable.empty() || enable.count(key);
}

std::set<std::string> parse_detector_list(std::string_view list)
{
	std::set<std::string> ids;
	std::string item;
	auto flush = [&] {
		if (item.empty())
			return;
		auto const* d = find_detector(item);
		if (!d)
			throw std::invalid_argument("unknown detector '" + item + "'");
		ids.emplace(d->id);
		item.clear();
	};
	for (char c: list)
	{
		if (c == ',' || c == '[' || c == ']' || c == '"' || std::isspace(static_cast<unsigned char>(c)))
			flush();
		else
			item += c;
	}
	flush();
	return ids;
}

std::string_view to_string(DetectorStatus status)
{
	switch (status)
	{
	case DetectorStatus::ran: return "ran";
	case DetectorStatus::skipped: return "skipped";
	case DetectorStatus::disabled: return "disabled";
	}
	return "ran";
}

std::unique_ptr<SourceFacts> build_source_facts(std::string path, std::string_view text, FileId file_id)
{
	auto facts = std::make_unique<SourceFacts>();
	facts->path = std::move(path);
	auto parsed = parse_source(text, file_id);
	facts->unit = std::move(parsed.unit);
	facts->diagnostics = std::move(parsed.diagnostics);

	auto const leaves = leaf_contracts(facts->unit);
	for (auto const& contract: facts->unit.contracts)
	{
		auto c = std::make_unique<ContractFacts>();
		c->contract = &contract;
		c->view = flatten(facts->unit, contract, &facts->diagnostics);
		c->symbols = SymbolTable(c->view);
		c->call_graph = build_call_graph(c->view, c->symbols);
		c->leaf = leaves.count(contract.name) > 0;
		for (auto const& fn: contract.functions)
			if (fn.body)
				c->def_use.emplace(&fn, compute_def_use(fn));
		facts->contracts.push_back(std::move(c));
	}
	return facts;
}

std::unique_ptr<BytecodeFacts> build_bytecode_facts(std::string path, bytes code)
{
	auto facts = std::make_unique<BytecodeFacts>();
	facts->path = std::move(path);
	facts->code = std::move(code);
	auto const size = evm::code_size_without_metadata(facts->code);
	facts->instructions = evm::disassemble(bytes_view(facts->code).first(size));
	facts->cfg = evm::build_cfg(facts->instructions);
	facts->selectors = evm::extract_selectors(facts->cfg);
	return facts;
}

void normalize_findings(std::vector<Finding>& findings)
{
	std::sort(findings.begin(), findings.end(), finding_less);
	std::vector<Finding> merged;
	for (auto& f: findings)
	{
		if (!merged.empty() && merged.back().same_identity(f))
		{
			auto& m = merged.back();
			if (m.message != f.message && m.message.find(f.message) == std::string::npos)
				m.message += "; " + f.message;
			m.impact = std::min(m.impact, f.impact);
			continue;
		}
		merged.push_back(std::move(f));
	}
	findings = std::move(merged);
}

DetectorRun run_detector(DetectorDescriptor const& descriptor, AnalysisContext const& ctx)
{
	DetectorRun run;
	run.descriptor = &descriptor;
	if (ctx.config && !ctx.config->is_enabled(descriptor.id))
	{
		run.status = DetectorStatus::disabled;
		return run;
	}
	bool const usable = (ctx.source && (descriptor.frontends & frontend_source)) ||
		(ctx.bytecode && (descriptor.frontends & frontend_bytecode));
	if (!usable)
	{
		run.status = DetectorStatus::skipped;
		return run;
	}
	auto const it =
		std::find_if(registry.begin(), registry.end(), [&](auto const& d) { return d.id == descriptor.id; });
	if (it == registry.end())
		throw std::invalid_argument("unknown detector '" + std::string(descriptor.id) + "'");
	run.descriptor = &*it;
	run.findings = functions.at(static_cast<std::size_t>(it - registry.begin()))(ctx);
	normalize_findings(run.findings);
	return run;
}

std::vector<DetectorRun> run_detectors(AnalysisContext const& ctx)
{
	std::vector<DetectorRun> runs;
	for (auto const& d: registry)
		runs.push_back(run_detector(d, ctx));
	return runs;
}

}
