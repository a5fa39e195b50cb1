#pragma once

#include <soldefect/span.hpp>
#include <soldefect/uint256.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace soldefect
{

// ---------------------------------------------------------------------------------------------
// Types

enum class TypeKind
{
	elementary,
	array,
	mapping,
	user_defined,
	var_inferred
};

struct TypeName
{
	TypeKind kind = TypeKind::elementary;
	/// Normalized elementary name (uint -> uint256, int -> int256, byte -> bytes1 is NOT applied:
	/// `byte` is kept so that byte[] can be told apart from bytes). For user-defined types the
	/// possibly dotted name.
	std::string name;
	/// For uintN / intN: N. Zero otherwise.
	unsigned bit_width = 0;
	bool is_signed = false;
	/// Array element type, or mapping value type.
	std::shared_ptr<TypeName const> element;
	/// Mapping key type.
	std::shared_ptr<TypeName const> key;
	/// Static array length text (uint[20] -> "20"); empty for dynamic arrays.
	std::string array_length;
	Span span;

	bool is_integer() const { return kind == TypeKind::elementary && bit_width != 0; }
	bool is_reference() const;
	/// Canonical ABI-ish spelling: uint256, address[], mapping(address=>uint256), uint256[20].
	std::string canonical() const;
};

/// Elementary type by name; returns nullopt for identifiers that are not elementary type names.
std::optional<TypeName> elementary_type(std::string_view name);
TypeName integer_type(unsigned bits, bool is_signed);

// ---------------------------------------------------------------------------------------------
// Expressions

enum class ExprKind
{
	identifier,
	member_access,
	index_access,
	call,
	binary,
	unary,
	assignment,
	conditional,
	literal,
	tuple,
	new_expression
};

enum class LiteralKind
{
	number,
	hex_number,
	address,
	string,
	hex_string,
	boolean
};

struct Expression;
using ExprPtr = std::unique_ptr<Expression>;

/// One expression node. Operand layout depends on kind:
///   member_access: [object]                name = member
///   index_access:  [base, index?]
///   call:          [callee, args...]
///   binary:        [lhs, rhs]              name = operator
///   unary:         [operand]               name = operator, prefix flag
///   assignment:    [lhs, rhs]              name = operator (=, +=, ...)
///   conditional:   [condition, then, else]
///   tuple:         [components...] (null entries for omitted components are not kept)
///   new_expression: []                     type = created type
struct Expression
{
	ExprKind kind = ExprKind::identifier;
	Span span;
	std::string name;
	std::vector<ExprPtr> operands;
	bool prefix = false;

	LiteralKind literal_kind = LiteralKind::number;
	/// Literal source text without the unit suffix.
	std::string literal_text;
	/// Denomination keyword (ether, wei, seconds, ...) if any.
	std::string unit;
	/// Exact integer value after unit scaling, when integral and within 256 bits.
	std::optional<uint256> value;

	std::shared_ptr<TypeName const> type;

	Expression const& operand(std::size_t i) const { return *operands.at(i); }
	std::size_t argument_count() const { return kind == ExprKind::call ? operands.size() - 1 : 0; }
	Expression const& argument(std::size_t i) const { return *operands.at(i + 1); }
	Expression const& callee() const { return *operands.at(0); }
	bool is_identifier(std::string_view n) const { return kind == ExprKind::identifier && name == n; }
};

/// Dotted text of a pure identifier/member chain ("msg.sender", "block.blockhash"); empty if the
/// chain contains anything else.
std::string member_chain(Expression const& expr);

/// Pre-order traversal of an expression tree. Return false from the visitor to skip children.
void walk(Expression const& expr, std::function<bool(Expression const&)> const& visitor);

// ---------------------------------------------------------------------------------------------
// Declarations and statements

enum class DataLocation
{
	unspecified,
	storage,
	memory,
	calldata
};

enum class Visibility
{
	default_,
	public_,
	external,
	internal,
	private_
};

struct VariableDeclaration
{
	std::string name;
	TypeName type;
	DataLocation location = DataLocation::unspecified;
	std::shared_ptr<Expression> initializer;
	Visibility visibility = Visibility::default_;
	bool is_constant = false;
	bool indexed = false;
	Span span;
	Span name_span;
};

enum class StmtKind
{
	block,
	if_,
	for_,
	while_,
	do_while,
	expression,
	return_,
	variable_declaration,
	emit,
	throw_,
	break_,
	continue_,
	placeholder,
	/// Skipped inline assembly block; its effects are unknown.
	inline_assembly
};

struct Statement;
using StmtPtr = std::unique_ptr<Statement>;

struct Statement
{
	StmtKind kind = StmtKind::block;
	Span span;
	/// block children
	std::vector<StmtPtr> statements;
	/// if / loops
	ExprPtr condition;
	StmtPtr then_branch;
	StmtPtr else_branch;
	StmtPtr body;
	StmtPtr init;
	/// expression statement, return value, emitted event call, for-loop update
	ExprPtr expression;
	/// variable_declaration: one entry, or several for `var (a, b) = ...`
	std::vector<VariableDeclaration> declarations;
	/// Initializer of a declaration statement (shared by tuple declarations).
	std::shared_ptr<Expression> initializer;
};

/// Pre-order traversal over statements (not into expressions).
void walk(Statement const& stmt, std::function<bool(Statement const&)> const& visitor);

/// Calls `visitor` for every top-level expression owned by `stmt` or its nested statements:
/// conditions, expression statements, return values, initializers, loop updates.
void for_each_expression(Statement const& stmt, std::function<void(Expression const&)> const& visitor);

struct ModifierInvocation
{
	std::string name;
	std::vector<ExprPtr> arguments;
	Span span;
};

enum class FunctionKind
{
	function,
	constructor,
	fallback
};

enum class Mutability
{
	nonpayable,
	payable,
	view,
	pure,
	constant
};

struct FunctionDefinition
{
	FunctionKind kind = FunctionKind::function;
	/// Empty for constructors and the fallback function.
	std::string name;
	std::vector<VariableDeclaration> parameters;
	std::vector<VariableDeclaration> returns;
	Visibility visibility = Visibility::default_;
	Mutability mutability = Mutability::nonpayable;
	bool is_payable = false;
	std::vector<ModifierInvocation> modifiers;
	StmtPtr body;
	Span span;
	Span name_span;

	bool is_public() const
	{
		return visibility == Visibility::public_ || visibility == Visibility::default_;
	}
	bool is_externally_callable() const { return is_public() || visibility == Visibility::external; }
	std::string display_name() const;
	/// name(type1,type2) with canonical parameter types.
	std::string signature() const;
};

struct ModifierDefinition
{
	std::string name;
	std::vector<VariableDeclaration> parameters;
	StmtPtr body;
	Span span;
};

struct EventDefinition
{
	std::string name;
	std::vector<VariableDeclaration> parameters;
	Span span;
	std::string signature() const;
};

struct StructDefinition
{
	std::string name;
	std::vector<VariableDeclaration> members;
	Span span;
};

struct EnumDefinition
{
	std::string name;
	std::vector<std::string> values;
	Span span;
};

enum class ContractKind
{
	contract,
	interface,
	library
};

struct ContractDefinition
{
	ContractKind kind = ContractKind::contract;
	std::string name;
	std::vector<std::string> bases;
	std::vector<VariableDeclaration> state_variables;
	std::vector<FunctionDefinition> functions;
	std::vector<ModifierDefinition> modifiers;
	std::vector<EventDefinition> events;
	std::vector<StructDefinition> structs;
	std::vector<EnumDefinition> enums;
	Span span;
	Span name_span;
};

enum class VersionConstraint
{
	exact,
	caret,
	range,
	other
};

struct PragmaDirective
{
	/// "solidity", "experimental", ...
	std::string name;
	VersionConstraint constraint_kind = VersionConstraint::other;
	std::string version_text;
	Span span;
};

/// Classifies the text after `pragma solidity`.
VersionConstraint classify_version(std::string_view version_text);

struct SourceUnit
{
	FileId file_id = 0;
	std::vector<PragmaDirective> pragmas;
	std::vector<ContractDefinition> contracts;
	/// Set when some construct was skipped or recovered from; findings may be incomplete.
	bool partial = false;
	Span span;
};

}
