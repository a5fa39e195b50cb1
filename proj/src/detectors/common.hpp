#pragma once

#include <soldefect/detectors.hpp>

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace soldefect::detail
{

DetectorDescriptor const& descriptor(std::string_view id);

Finding source_finding(AnalysisContext const& ctx, std::string_view id, Span const& span, std::string message);
Finding bytecode_finding(AnalysisContext const& ctx, std::string_view id, std::size_t pc, std::size_t block,
	std::string message);

/// A function or modifier body together with the contract facts used to resolve it.
struct Body
{
	ContractFacts const* facts = nullptr;
	FunctionDefinition const* function = nullptr;
	ModifierDefinition const* modifier = nullptr;
	Statement const* body = nullptr;
};

/// Bodies of the functions and modifiers declared by every contract in the file.
std::vector<Body> declared_bodies(SourceFacts const& source);

/// Bodies of every function and modifier of the flattened contract, inherited ones included.
std::vector<Body> view_bodies(ContractFacts const& facts);

/// Every top-level expression owned by a contract's own declarations: state variable
/// initializers, modifier invocation arguments and function and modifier bodies.
void for_each_contract_expression(ContractFacts const& facts, std::function<void(Expression const&)> const& visitor);

/// Leaf contracts (not interfaces or libraries): the deployable units.
std::vector<ContractFacts const*> deployable_contracts(SourceFacts const& source);

/// First payable function of the flattened contract, or nullptr.
FunctionDefinition const* first_payable(ContractView const& view);

/// Visits `stmt` and its nested statements with the chain of enclosing statements (outermost
/// first, not including `stmt`).
void walk_with_parents(Statement const& stmt,
	std::function<void(Statement const&, std::vector<Statement const*> const&)> const& visitor);

bool is_loop(Statement const& stmt);

/// True when the loop runs a number of times fixed at compile time: its condition compares a
/// variable with a literal or a constant state variable.
bool has_constant_bound(Statement const& loop, SymbolTable const& symbols);

/// Expressions that decide control flow: statement conditions, require/assert arguments and
/// ternary conditions found inside `body`.
std::vector<Expression const*> condition_roots(Statement const& body);

/// Call to a builtin or unresolved identifier `name` (not a user function of the same name).
bool is_builtin_call(Expression const& e, std::string_view name, SymbolTable const& symbols);

/// `this.balance` or `address(this).balance`.
bool is_self_balance(Expression const& e);

/// Root variable of an lvalue such as a, a[i], a.b[i].c.
VariableDeclaration const* root_variable(Expression const& lvalue, SymbolTable const& symbols);

/// State variables written by `root`: assignments, ++/--, delete, push/pop.
std::set<VariableDeclaration const*> state_writes(Expression const& root, SymbolTable const& symbols);

/// Variables (any kind) read by identifiers inside `root`.
std::set<VariableDeclaration const*> variables_read(Expression const& root, SymbolTable const& symbols);

/// Statement terminates the function: return, throw or revert(...).
bool is_terminating(Statement const& stmt, SymbolTable const& symbols);

bool is_selfdestruct_call(Expression const& e, SymbolTable const& symbols);

/// Value flow into variables: declaration initializers and assignments (compound ones included).
struct Assignment
{
	std::vector<VariableDeclaration const*> targets;
	Expression const* value = nullptr;
};

std::vector<Assignment> assignments(Statement const& body, SymbolTable const& symbols);

/// Expressions owned directly by `stmt` (condition, expression, initializer), not by nested
/// statements.
std::vector<Expression const*> own_expressions(Statement const& stmt);

}
