#pragma once

#include <soldefect/uint256.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soldefect::evm
{

struct BytecodeInputError: std::runtime_error
{
	using std::runtime_error::runtime_error;
};

struct Instruction
{
	std::size_t pc = 0;
	std::uint8_t opcode = 0;
	std::string_view mnemonic;
	/// Immediate of PUSH1..PUSH32; shorter than n only for a push truncated by the end of code.
	bytes push_bytes;
	/// Push cut short by the end of the code.
	bool truncated = false;

	bool is_valid() const;
	std::size_t size() const { return 1 + push_bytes.size(); }
	uint256 push_value() const { return from_big_endian(push_bytes); }
	/// "PUSH1 0x01", "ADD".
	std::string to_string() const;
};

/// Hex text (optional 0x prefix, surrounding whitespace ignored) to bytes. Throws
/// BytecodeInputError on odd length or non-hex characters.
bytes parse_hex(std::string_view text);

/// File contents to code: hex text when every non-whitespace byte is a hex digit (after an
/// optional 0x), raw binary otherwise.
bytes load_bytecode(std::string_view contents);

std::vector<Instruction> disassemble(bytes_view code);

/// Inverse of disassemble: concatenates opcodes and immediates.
bytes assemble(std::vector<Instruction> const& instructions);

/// Length of `code` without the compiler's CBOR metadata trailer (unchanged if none is found).
std::size_t code_size_without_metadata(bytes_view code);

/// Assembles whitespace-separated mnemonics. `name:` defines a label at the current offset and
/// `@name` as a PUSH operand refers to it; other operands are hex (0x..) or decimal numbers.
/// Example: "PUSH1 0x00 loop: JUMPDEST PUSH2 @loop JUMP". Throws BytecodeInputError.
bytes assemble_text(std::string_view program);

}
