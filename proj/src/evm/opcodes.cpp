#include <soldefect/evm/opcodes.hpp>

#include <array>
#include <string>

namespace soldefect::evm
{

namespace
{

struct Table
{
	std::array<OpcodeInfo, 256> entries{};
	std::array<std::string, 256> names{};

	void set(std::uint8_t code, std::string_view name, std::uint8_t in, std::uint8_t out)
	{
		names[code] = std::string(name);
		entries[code] = {names[code], in, out, true};
	}

	Table()
	{
		for (unsigned i = 0; i < 256; ++i)
		{
			names[i] = "UNKNOWN_0x" + std::string(1, "0123456789abcdef"[i >> 4]) + "0123456789abcdef"[i & 0xf];
			entries[i] = {names[i], 0, 0, false};
		}
		set(op::STOP, "STOP", 0, 0);
		set(op::ADD, "ADD", 2, 1);
		set(op::MUL, "MUL", 2, 1);
		set(op::SUB, "SUB", 2, 1);
		set(op::DIV, "DIV", 2, 1);
		set(op::SDIV, "SDIV", 2, 1);
		set(op::MOD, "MOD", 2, 1);
		set(op::SMOD, "SMOD", 2, 1);
		set(op::ADDMOD, "ADDMOD", 3, 1);
		set(op::MULMOD, "MULMOD", 3, 1);
		set(op::EXP, "EXP", 2, 1);
		set(op::SIGNEXTEND, "SIGNEXTEND", 2, 1);
		set(op::LT, "LT", 2, 1);
		set(op::GT, "GT", 2, 1);
		set(op::SLT, "SLT", 2, 1);
		set(op::SGT, "SGT", 2, 1);
		set(op::EQ, "EQ", 2, 1);
		set(op::ISZERO, "ISZERO", 1, 1);
		set(op::AND, "AND", 2, 1);
		set(op::OR, "OR", 2, 1);
		set(op::XOR, "XOR", 2, 1);
		set(op::NOT, "NOT", 1, 1);
		set(op::BYTE, "BYTE", 2, 1);
		set(op::SHA3, "SHA3", 2, 1);
		set(op::ADDRESS, "ADDRESS", 0, 1);
		set(op::BALANCE, "BALANCE", 1, 1);
		set(op::ORIGIN, "ORIGIN", 0, 1);
		set(op::CALLER, "CALLER", 0, 1);
		set(op::CALLVALUE, "CALLVALUE", 0, 1);
		set(op::CALLDATALOAD, "CALLDATALOAD", 1, 1);
		set(op::CALLDATASIZE, "CALLDATASIZE", 0, 1);
		set(op::CALLDATACOPY, "CALLDATACOPY", 3, 0);
		set(op::CODESIZE, "CODESIZE", 0, 1);
		set(op::CODECOPY, "CODECOPY", 3, 0);
		set(op::GASPRICE, "GASPRICE", 0, 1);
		set(op::EXTCODESIZE, "EXTCODESIZE", 1, 1);
		set(op::EXTCODECOPY, "EXTCODECOPY", 4, 0);
		set(op::RETURNDATASIZE, "RETURNDATASIZE", 0, 1);
		set(op::RETURNDATACOPY, "RETURNDATACOPY", 3, 0);
		set(op::BLOCKHASH, "BLOCKHASH", 1, 1);
		set(op::COINBASE, "COINBASE", 0, 1);
		set(op::TIMESTAMP, "TIMESTAMP", 0, 1);
		set(op::NUMBER, "NUMBER", 0, 1);
		set(op::DIFFICULTY, "DIFFICULTY", 0, 1);
		set(op::GASLIMIT, "GASLIMIT", 0, 1);
		set(op::POP, "POP", 1, 0);
		set(op::MLOAD, "MLOAD", 1, 1);
		set(op::MSTORE, "MSTORE", 2, 0);
		set(op::MSTORE8, "MSTORE8", 2, 0);
		set(op::SLOAD, "SLOAD", 1, 1);
		set(op::SSTORE, "SSTORE", 2, 0);
		set(op::JUMP, "JUMP", 1, 0);
		set(op::JUMPI, "JUMPI", 2, 0);
		set(op::PC, "PC", 0, 1);
		set(op::MSIZE, "MSIZE", 0, 1);
		set(op::GAS, "GAS", 0, 1);
		set(op::JUMPDEST, "JUMPDEST", 0, 0);
		for (unsigned n = 1; n <= 32; ++n)
			set(static_cast<std::uint8_t>(op::PUSH1 + n - 1), "PUSH" + std::to_string(n), 0, 1);
		for (unsigned n = 1; n <= 16; ++n)
		{
			set(static_cast<std::uint8_t>(op::DUP1 + n - 1), "DUP" + std::to_string(n),
				static_cast<std::uint8_t>(n), static_cast<std::uint8_t>(n + 1));
			set(static_cast<std::uint8_t>(op::SWAP1 + n - 1), "SWAP" + std::to_string(n),
				static_cast<std::uint8_t>(n + 1), static_cast<std::uint8_t>(n + 1));
		}
		for (unsigned n = 0; n <= 4; ++n)
			set(static_cast<std::uint8_t>(op::LOG0 + n), "LOG" + std::to_string(n), static_cast<std::uint8_t>(n + 2), 0);
		set(op::CREATE, "CREATE", 3, 1);
		set(op::CALL, "CALL", 7, 1);
		set(op::CALLCODE, "CALLCODE", 7, 1);
		set(op::RETURN, "RETURN", 2, 0);
		set(op::DELEGATECALL, "DELEGATECALL", 6, 1);
		set(op::STATICCALL, "STATICCALL", 6, 1);
		set(op::REVERT, "REVERT", 2, 0);
		set(op::INVALID, "INVALID", 0, 0);
		set(op::SELFDESTRUCT, "SELFDESTRUCT", 1, 0);
	}
};

Table const& table()
{
	static Table const t;
	return t;
}

}

OpcodeInfo const& opcode_info(std::uint8_t opcode) { return table().entries[opcode]; }

std::optional<std::uint8_t> opcode_by_mnemonic(std::string_view mnemonic)
{
	auto const& t = table();
	for (unsigned i = 0; i < 256; ++i)
		if (t.entries[i].defined && t.entries[i].mnemonic == mnemonic)
			return static_cast<std::uint8_t>(i);
	// Common alias.
	if (mnemonic == "KECCAK256")
		return op::SHA3;
	if (mnemonic == "SUICIDE")
		return op::SELFDESTRUCT;
	return std::nullopt;
}

}
