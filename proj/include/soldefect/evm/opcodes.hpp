#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace soldefect::evm
{

/// Byzantium instruction set (no SHL/SHR/SAR, CREATE2 or EXTCODEHASH).
namespace op
{
constexpr std::uint8_t STOP = 0x00, ADD = 0x01, MUL = 0x02, SUB = 0x03, DIV = 0x04, SDIV = 0x05, MOD = 0x06,
	SMOD = 0x07, ADDMOD = 0x08, MULMOD = 0x09, EXP = 0x0a, SIGNEXTEND = 0x0b;
constexpr std::uint8_t LT = 0x10, GT = 0x11, SLT = 0x12, SGT = 0x13, EQ = 0x14, ISZERO = 0x15, AND = 0x16,
	OR = 0x17, XOR = 0x18, NOT = 0x19, BYTE = 0x1a;
constexpr std::uint8_t SHA3 = 0x20;
constexpr std::uint8_t ADDRESS = 0x30, BALANCE = 0x31, ORIGIN = 0x32, CALLER = 0x33, CALLVALUE = 0x34,
	CALLDATALOAD = 0x35, CALLDATASIZE = 0x36, CALLDATACOPY = 0x37, CODESIZE = 0x38, CODECOPY = 0x39,
	GASPRICE = 0x3a, EXTCODESIZE = 0x3b, EXTCODECOPY = 0x3c, RETURNDATASIZE = 0x3d, RETURNDATACOPY = 0x3e;
constexpr std::uint8_t BLOCKHASH = 0x40, COINBASE = 0x41, TIMESTAMP = 0x42, NUMBER = 0x43, DIFFICULTY = 0x44,
	GASLIMIT = 0x45;
constexpr std::uint8_t POP = 0x50, MLOAD = 0x51, MSTORE = 0x52, MSTORE8 = 0x53, SLOAD = 0x54, SSTORE = 0x55,
	JUMP = 0x56, JUMPI = 0x57, PC = 0x58, MSIZE = 0x59, GAS = 0x5a, JUMPDEST = 0x5b;
constexpr std::uint8_t PUSH1 = 0x60, PUSH4 = 0x63, PUSH20 = 0x73, PUSH32 = 0x7f;
constexpr std::uint8_t DUP1 = 0x80, DUP16 = 0x8f, SWAP1 = 0x90, SWAP16 = 0x9f;
constexpr std::uint8_t LOG0 = 0xa0, LOG4 = 0xa4;
constexpr std::uint8_t CREATE = 0xf0, CALL = 0xf1, CALLCODE = 0xf2, RETURN = 0xf3, DELEGATECALL = 0xf4,
	STATICCALL = 0xfa, REVERT = 0xfd, INVALID = 0xfe, SELFDESTRUCT = 0xff;
}

struct OpcodeInfo
{
	std::string_view mnemonic;
	std::uint8_t inputs = 0;
	std::uint8_t outputs = 0;
	/// False for bytes outside the instruction set; they execute as INVALID.
	bool defined = false;
};

OpcodeInfo const& opcode_info(std::uint8_t opcode);
std::optional<std::uint8_t> opcode_by_mnemonic(std::string_view mnemonic);

inline bool is_push(std::uint8_t opcode) { return opcode >= op::PUSH1 && opcode <= op::PUSH32; }
inline unsigned push_size(std::uint8_t opcode) { return is_push(opcode) ? opcode - op::PUSH1 + 1u : 0u; }
inline bool is_dup(std::uint8_t opcode) { return opcode >= op::DUP1 && opcode <= op::DUP16; }
inline bool is_swap(std::uint8_t opcode) { return opcode >= op::SWAP1 && opcode <= op::SWAP16; }
inline bool is_call(std::uint8_t opcode)
{
	return opcode == op::CALL || opcode == op::CALLCODE || opcode == op::DELEGATECALL || opcode == op::STATICCALL;
}

}
