#pragma once

#include <soldefect/ast.hpp>
#include <soldefect/evm/cfg.hpp>
#include <soldefect/finding.hpp>
#include <soldefect/semantic.hpp>

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect
{

enum Frontend: unsigned
{
	frontend_source = 1u << 0,
	frontend_bytecode = 1u << 1
};

struct DetectorDescriptor
{
	std::string_view id;
	std::string_view slug;
	std::string_view name;
	Category category = Category::security;
	Impact impact = Impact::IP5;
	unsigned frontends = frontend_source;
	/// Sub-type of the impact level, empty if none.
	std::string_view impact_note;
	std::string_view advice;
};

/// The 20 detectors in id order (D01..D20).
std::span<DetectorDescriptor const> detector_registry();
/// Lookup by id ("D07", case-insensitive) or slug ("reentrancy").
DetectorDescriptor const* find_detector(std::string_view id_or_slug);

struct DetectorConfig
{
	/// Ids to run; empty means all.
	std::set<std::string> enable;
	std::set<std::string> disable;
	/// Report tx.origin anywhere, not only in conditions.
	bool tx_origin_all_uses = false;
	/// Also report `!=` against the contract balance, at IP5.
	bool balance_neq = false;
	/// Additional deprecated names: identifiers, member names or dotted member chains.
	std::vector<std::string> deprecated_extra;

	bool is_enabled(std::string_view id) const;
};

/// Resolves ids and slugs in a comma/whitespace separated list to ids. Throws
/// std::invalid_argument naming the first unknown entry.
std::set<std::string> parse_detector_list(std::string_view list);

/// Per-contract semantic facts. Not copyable: the symbol table points into the view.
struct ContractFacts
{
	ContractDefinition const* contract = nullptr;
	ContractView view;
	SymbolTable symbols;
	CallGraph call_graph;
	/// No other contract in the file inherits from it.
	bool leaf = false;
	/// compute_def_use for each function declared by this contract that has a body.
	std::map<FunctionDefinition const*, DefUseFacts> def_use;

	ContractFacts() = default;
	ContractFacts(ContractFacts const&) = delete;
	ContractFacts& operator=(ContractFacts const&) = delete;
};

struct SourceFacts
{
	std::string path;
	SourceUnit unit;
	Diagnostics diagnostics;
	std::vector<std::unique_ptr<ContractFacts>> contracts;
};

/// Parses `text` and builds every per-contract fact.
std::unique_ptr<SourceFacts> build_source_facts(std::string path, std::string_view text, FileId file_id = 0);

struct BytecodeFacts
{
	std::string path;
	bytes code;
	std::vector<evm::Instruction> instructions;
	evm::ControlFlowGraph cfg;
	evm::SelectorTable selectors;
};

/// Disassembles `code` (metadata trailer excluded) and recovers its CFG, loops and selectors.
std::unique_ptr<BytecodeFacts> build_bytecode_facts(std::string path, bytes code);

struct AnalysisContext
{
	SourceFacts const* source = nullptr;
	BytecodeFacts const* bytecode = nullptr;
	DetectorConfig const* config = nullptr;
};

enum class DetectorStatus
{
	ran,
	/// The facts the detector needs are absent from the context.
	skipped,
	disabled
};

std::string_view to_string(DetectorStatus status);

struct DetectorRun
{
	DetectorDescriptor const* descriptor = nullptr;
	DetectorStatus status = DetectorStatus::ran;
	std::vector<Finding> findings;
};

using DetectorFunction = std::vector<Finding> (*)(AnalysisContext const&);

std::vector<Finding> detect_unchecked_external_calls(AnalysisContext const& ctx);
std::vector<Finding> detect_dos_under_external_influence(AnalysisContext const& ctx);
std::vector<Finding> detect_strict_balance_equality(AnalysisContext const& ctx);
std::vector<Finding> detect_unmatched_type_assignment(AnalysisContext const& ctx);
std::vector<Finding> detect_transaction_state_dependency(AnalysisContext const& ctx);
std::vector<Finding> detect_block_info_dependency(AnalysisContext const& ctx);
std::vector<Finding> detect_reentrancy(AnalysisContext const& ctx);
std::vector<Finding> detect_nested_call(AnalysisContext const& ctx);
std::vector<Finding> detect_misleading_data_location(AnalysisContext const& ctx);
std::vector<Finding> detect_unmatched_erc20(AnalysisContext const& ctx);
std::vector<Finding> detect_missing_reminder(AnalysisContext const& ctx);
std::vector<Finding> detect_missing_return_statement(AnalysisContext const& ctx);
std::vector<Finding> detect_greedy_contract(AnalysisContext const& ctx);
std::vector<Finding> detect_unused_statement(AnalysisContext const& ctx);
std::vector<Finding> detect_high_gas_function_type(AnalysisContext const& ctx);
std::vector<Finding> detect_high_gas_data_type(AnalysisContext const& ctx);
std::vector<Finding> detect_hard_code_address(AnalysisContext const& ctx);
std::vector<Finding> detect_missing_interrupter(AnalysisContext const& ctx);
std::vector<Finding> detect_deprecated_apis(AnalysisContext const& ctx);
std::vector<Finding> detect_unspecified_compiler_version(AnalysisContext const& ctx);

/// Runs one detector, honouring the configuration and the facts present. Findings are sorted
/// and merged by identity.
DetectorRun run_detector(DetectorDescriptor const& descriptor, AnalysisContext const& ctx);
/// Runs every registered detector in id order.
std::vector<DetectorRun> run_detectors(AnalysisContext const& ctx);

/// Sorts with finding_less and merges findings with the same identity; the messages of merged
/// findings are joined with "; ".
void normalize_findings(std::vector<Finding>& findings);

}
