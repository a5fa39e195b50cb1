#include <soldefect/evm/disassembler.hpp>
#include <soldefect/evm/opcodes.hpp>

#include <cctype>
#include <map>
#include <sstream>

namespace soldefect::evm
{

bool Instruction::is_valid() const { return !truncated && opcode_info(opcode).defined && opcode != op::INVALID; }

std::string Instruction::to_string() const
{
	std::string s(mnemonic);
	if (is_push(opcode))
		s += " 0x" + soldefect::to_hex(bytes_view(push_bytes));
	return s;
}

namespace
{

int hex_value(char c)
{
	if (c >= '0' && c <= '9')
		return c - '0';
	if (c >= 'a' && c <= 'f')
		return c - 'a' + 10;
	if (c >= 'A' && c <= 'F')
		return c - 'A' + 10;
	return -1;
}

std::string_view trim(std::string_view s)
{
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
		s.remove_prefix(1);
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
		s.remove_suffix(1);
	return s;
}

}

bytes parse_hex(std::string_view text)
{
	text = trim(text);
	if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
		text.remove_prefix(2);
	if (text.size() % 2 != 0)
		throw BytecodeInputError("hex bytecode has odd length");
	bytes out;
	out.reserve(text.size() / 2);
	for (std::size_t i = 0; i < text.size(); i += 2)
	{
		int const hi = hex_value(text[i]);
		int const lo = hex_value(text[i + 1]);
		if (hi < 0 || lo < 0)
			throw BytecodeInputError("invalid hex digit at offset " + std::to_string(i));
		out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
	}
	return out;
}

bytes load_bytecode(std::string_view contents)
{
	auto t = trim(contents);
	if (t.size() >= 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X'))
		return parse_hex(t);
	bool all_hex = !t.empty();
	for (char c: t)
		if (hex_value(c) < 0)
		{
			all_hex = false;
			break;
		}
	if (all_hex || t.empty())
		return parse_hex(t);
	return bytes(contents.begin(), contents.end());
}

std::vector<Instruction> disassemble(bytes_view code)
{
	std::vector<Instruction> out;
	std::size_t pc = 0;
	while (pc < code.size())
	{
		Instruction ins;
		ins.pc = pc;
		ins.opcode = code[pc];
		ins.mnemonic = opcode_info(ins.opcode).mnemonic;
		auto const n = push_size(ins.opcode);
		auto const available = std::min<std::size_t>(n, code.size() - pc - 1);
		ins.push_bytes.assign(code.begin() + static_cast<std::ptrdiff_t>(pc + 1),
			code.begin() + static_cast<std::ptrdiff_t>(pc + 1 + available));
		ins.truncated = available < n;
		pc += 1 + available;
		out.push_back(std::move(ins));
	}
	return out;
}

bytes assemble(std::vector<Instruction> const& instructions)
{
	bytes out;
	for (auto const& ins: instructions)
	{
		out.push_back(ins.opcode);
		out.insert(out.end(), ins.push_bytes.begin(), ins.push_bytes.end());
	}
	return out;
}

std::size_t code_size_without_metadata(bytes_view code)
{
	if (code.size() < 2)
		return code.size();
	std::size_t const length = (std::size_t(code[code.size() - 2]) << 8) | code[code.size() - 1];
	if (length == 0 || length + 2 > code.size())
		return code.size();
	std::size_t const start = code.size() - 2 - length;
	// A CBOR map with one to five entries (a1..a5) whose first key is a short text string.
	if (code[start] < 0xa1 || code[start] > 0xa5 || length < 2 || (code[start + 1] & 0xe0) != 0x60)
		return code.size();
	return start;
}

bytes assemble_text(std::string_view program)
{
	std::istringstream in{std::string(program)};
	std::vector<std::string> words;
	for (std::string w; in >> w;)
		words.push_back(w);

	struct Item
	{
		std::uint8_t opcode;
		std::string operand;
	};
	std::vector<Item> items;
	std::map<std::string, std::size_t> labels;
	std::size_t offset = 0;
	for (std::size_t i = 0; i < words.size(); ++i)
	{
		auto const& w = words[i];
		if (w.back() == ':')
		{
			labels[w.substr(0, w.size() - 1)] = offset;
			continue;
		}
		auto const code = opcode_by_mnemonic(w);
		if (!code)
			throw BytecodeInputError("unknown mnemonic '" + w + "'");
		Item item{*code, {}};
		if (is_push(*code))
		{
			if (i + 1 >= words.size())
				throw BytecodeInputError(w + " needs an operand");
			item.operand = words[++i];
		}
		offset += 1 + push_size(*code);
		items.push_back(std::move(item));
	}

	bytes out;
	for (auto const& item: items)
	{
		out.push_back(item.opcode);
		auto const n = push_size(item.opcode);
		if (!n)
			continue;
		uint256 value = 0;
		if (item.operand[0] == '@')
		{
			auto const it = labels.find(item.operand.substr(1));
			if (it == labels.end())
				throw BytecodeInputError("undefined label " + item.operand);
			value = it->second;
		}
		else if (auto v = item.operand.rfind("0x", 0) == 0 ? parse_hex_literal(item.operand)
															: parse_decimal_literal(item.operand))
			value = *v;
		else
			throw BytecodeInputError("bad operand " + item.operand);
		if (n < 32 && (value >> (8 * n)) != 0)
			throw BytecodeInputError("operand " + item.operand + " does not fit in " + std::to_string(n) + " bytes");
		for (int b = static_cast<int>(n) - 1; b >= 0; --b)
			out.push_back(static_cast<std::uint8_t>((value >> (8 * b)) & 0xff));
	}
	return out;
}

}
