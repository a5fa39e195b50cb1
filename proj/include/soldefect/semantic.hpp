#pragma once

#include <soldefect/ast.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace soldefect
{

// ---------------------------------------------------------------------------------------------
// Inheritance flattening

/// A contract together with every member it inherits. Overridden functions and modifiers are
/// represented only by the most derived definition.
struct ContractView
{
	SourceUnit const* unit = nullptr;
	ContractDefinition const* contract = nullptr;
	/// Transitive bases found in the same unit, most derived first.
	std::vector<ContractDefinition const*> bases;
	std::vector<std::string> unresolved_bases;

	std::vector<VariableDeclaration const*> state_variables;
	std::vector<FunctionDefinition const*> functions;
	std::vector<ModifierDefinition const*> modifiers;
	std::vector<EventDefinition const*> events;
	std::vector<StructDefinition const*> structs;
	std::vector<EnumDefinition const*> enums;

	/// Declaring contract of any member pointer above.
	std::unordered_map<void const*, ContractDefinition const*> owner;

	ContractDefinition const* owner_of(void const* member) const;
	StructDefinition const* find_struct(std::string_view name) const;
	std::vector<FunctionDefinition const*> functions_named(std::string_view name) const;
	bool declares_contract_type(std::string_view name) const;
};

/// Flat union of `contract` and its bases; a base reachable through more than one path produces
/// a warning and is merged once.
ContractView flatten(SourceUnit const& unit, ContractDefinition const& contract, Diagnostics* diagnostics = nullptr);

/// Names of contracts in `unit` that no other contract in the unit inherits from.
std::set<std::string> leaf_contracts(SourceUnit const& unit);

// ---------------------------------------------------------------------------------------------
// Symbols

enum class SymbolKind
{
	state_variable,
	local,
	parameter,
	return_parameter,
	function,
	modifier,
	event,
	struct_type,
	enum_type,
	contract,
	builtin
};

struct Symbol
{
	SymbolKind kind = SymbolKind::builtin;
	std::string name;
	VariableDeclaration const* variable = nullptr;
	/// Overload set for functions.
	std::vector<FunctionDefinition const*> functions;
	ModifierDefinition const* modifier = nullptr;
	EventDefinition const* event = nullptr;
	ContractDefinition const* contract = nullptr;

	bool is_variable() const
	{
		return kind == SymbolKind::state_variable || kind == SymbolKind::local || kind == SymbolKind::parameter ||
			kind == SymbolKind::return_parameter;
	}
	bool is_local_variable() const { return is_variable() && kind != SymbolKind::state_variable; }
};

/// Name resolution for one flattened contract. Every identifier expression inside the bodies of
/// its functions and modifiers is mapped to the declaration it refers to; locals shadow state
/// variables and declarations of an enclosing function are visible function-wide as a fallback.
class SymbolTable
{
public:
	SymbolTable() = default;
	explicit SymbolTable(ContractView const& view);

	ContractView const* view() const { return m_view; }
	/// Contract-level lookup (state variables, functions, modifiers, events, types, contracts).
	Symbol const* lookup(std::string_view name) const;
	/// Resolution of an identifier expression; nullptr if unresolved or not an identifier.
	Symbol const* resolve(Expression const& identifier) const;
	/// Identifier expressions that matched no declaration and no builtin.
	std::vector<Expression const*> const& unresolved() const { return m_unresolved; }

	bool is_state_variable(Expression const& expr) const;
	/// Declaration of a local, parameter or return variable named by `expr`, else nullptr.
	VariableDeclaration const* local_variable(Expression const& expr) const;
	SymbolKind kind_of(VariableDeclaration const& declaration) const;

private:
	void resolve_body(Statement const& body, std::vector<std::map<std::string, Symbol>>& scopes,
		std::map<std::string, Symbol> const& hoisted);
	void resolve_expression(Expression const& expr, std::vector<std::map<std::string, Symbol>> const& scopes,
		std::map<std::string, Symbol> const& hoisted);

	ContractView const* m_view = nullptr;
	std::map<std::string, Symbol, std::less<>> m_contract_scope;
	std::unordered_map<Expression const*, Symbol> m_resolved;
	std::unordered_map<VariableDeclaration const*, SymbolKind> m_declaration_kinds;
	std::vector<Expression const*> m_unresolved;
};

bool is_builtin_identifier(std::string_view name);

// ---------------------------------------------------------------------------------------------
// Types

/// Exact value of an integer expression built only from literals, unary minus and + - * / % **
/// << >> & | ^. nullopt for anything else or when a division is inexact.
std::optional<boost::multiprecision::cpp_int> constant_value(Expression const& expr);

/// Best-effort static type; nullopt when unknown.
std::optional<TypeName> static_type(Expression const& expr, SymbolTable const* symbols = nullptr);

/// Type given to `var x = initializer`. Integer constants get the smallest uintN (intN when
/// negative) that holds them; other initializers get their static type. nullopt when the
/// initializer is absent or its type is unknown.
std::optional<TypeName> infer_var_type(Expression const* initializer, SymbolTable const* symbols = nullptr);

// ---------------------------------------------------------------------------------------------
// External calls

enum class ExternalCallKind
{
	send,
	transfer,
	call,
	delegatecall,
	callcode,
	staticcall,
	contract_call
};

std::string_view to_string(ExternalCallKind kind);

struct ExternalCall
{
	ExternalCallKind kind = ExternalCallKind::call;
	/// The outermost call expression of the chain.
	Expression const* expression = nullptr;
	/// Address or contract the call goes to.
	Expression const* target = nullptr;
	/// Ether amount: send/transfer argument or `.value(...)` argument.
	Expression const* value = nullptr;
	Expression const* gas = nullptr;
	/// False for `x.call.value(v)` without the final argument list: the call is never made.
	bool invoked = true;

	bool transfers_ether() const
	{
		return kind == ExternalCallKind::send || kind == ExternalCallKind::transfer || value != nullptr;
	}
};

/// Recognizes `expr` as the outermost expression of an external call chain.
std::optional<ExternalCall> decode_external_call(Expression const& expr, SymbolTable const* symbols = nullptr);

/// All external calls inside `root`, each reported once (option calls such as `.value(v)` that
/// belong to an enclosing call are not reported separately).
std::vector<ExternalCall> collect_external_calls(Expression const& root, SymbolTable const* symbols = nullptr);

// ---------------------------------------------------------------------------------------------
// Call graph

struct CallGraphNode
{
	FunctionDefinition const* function = nullptr;
	ModifierDefinition const* modifier = nullptr;
	std::string name;
};

struct ExternalCallSite
{
	std::size_t caller = 0;
	ExternalCall call;
};

/// Internal call structure of one flattened contract. Nodes are its functions followed by its
/// modifiers; an edge f -> g means f calls g by name or is guarded by modifier g.
struct CallGraph
{
	std::vector<CallGraphNode> nodes;
	std::vector<std::set<std::size_t>> edges;
	/// Calls to names that resolve to nothing.
	std::vector<Expression const*> unresolved;
	std::vector<ExternalCallSite> external_calls;

	std::optional<std::size_t> index_of(void const* definition) const;
	std::optional<std::size_t> index_of(std::string_view display_name) const;
	bool has_edge(std::string_view from, std::string_view to) const;
	std::size_t in_degree(std::size_t node) const;
	std::size_t edge_count() const;
};

CallGraph build_call_graph(ContractView const& view, SymbolTable const& symbols);

// ---------------------------------------------------------------------------------------------
// Def-use

struct VariableFacts
{
	VariableDeclaration const* declaration = nullptr;
	SymbolKind kind = SymbolKind::local;
	std::vector<Span> writes;
	std::vector<Span> reads;
	/// Some read reaches a state write, return value, condition, call argument, event argument,
	/// index expression or member-call object, directly or through other locals.
	bool live = false;
};

struct DefUseFacts
{
	std::vector<VariableFacts> variables;
	VariableFacts const* find(std::string_view name) const;
};

/// Intra-procedural def-use with transitive liveness. Named return variables are always live.
/// A function containing inline assembly has every variable marked live.
DefUseFacts compute_def_use(FunctionDefinition const& function);

}
