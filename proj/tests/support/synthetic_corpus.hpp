#pragma once

// Seeded generator of Solidity 0.4 contracts for determinism and throughput runs. Functions are
// drawn from shapes that exercise most detectors, so the analysis does real work on every file.

#include "test_support.hpp"

#include <random>

namespace soldefect::test
{

struct SyntheticCorpus
{
	std::size_t files = 0;
	std::size_t lines = 0;
};

inline std::string synthetic_function(std::mt19937_64& rng, std::size_t index)
{
	auto const n = std::to_string(index);
	auto const k = std::to_string(1 + rng() % 900);
	switch (rng() % 12)
	{
	case 0:
		return "  function pay" + n + "() public {\n    for (uint i = 0; i < members.length; i++) {\n"
			"      members[i].transfer(" + k + ");\n      total += " + k + ";\n    }\n  }\n";
	case 1:
		return "  function guard" + n + "(uint a) public {\n    require(tx.origin == owner);\n    total = a + " + k +
			";\n    balances[msg.sender] = total;\n  }\n";
	case 2:
		return "  function check" + n + "() public payable {\n    count++;\n    if (this.balance == " + k +
			" ether) {\n      total = 0;\n    }\n  }\n";
	case 3:
		return "  function send" + n + "(address to) public {\n    to.send(" + k + ");\n    count = count + 1;\n  }\n";
	case 4:
		return "  function bonus" + n + "() returns (bool) {\n    for (var i = 0; i < members.length; i++) {\n"
			"      members[i].send(" + k + ");\n    }\n  }\n";
	case 5:
		return "  function deposit" + n + "() public payable {\n    balances[msg.sender] += msg.value;\n"
			"    if (msg.value > " + k + ") {\n      count++;\n    }\n  }\n";
	case 6:
		return "  function calc" + n + "(uint a, uint b, uint c) public view returns (uint) {\n    uint x = a * " + k +
			";\n    uint y = b + x;\n    if (y > c) {\n      y = y - c;\n    } else {\n      y = c - y;\n    }\n"
			"    for (uint j = 0; j < 8; j++) {\n      y = y * 2 + j;\n    }\n    return y + total;\n  }\n";
	case 7:
		return "  function withdraw" + n + "() public {\n    uint amount = balances[msg.sender];\n"
			"    if (amount > 0) {\n      msg.sender.call.value(amount)();\n      balances[msg.sender] = 0;\n    }\n  }\n";
	case 8:
		return "  function note" + n + "(uint v) public {\n    count = v;\n    emit Changed(msg.sender, v);\n  }\n";
	case 9:
		return "  function rand" + n + "() public {\n    uint r = uint(block.blockhash(block.number - 1)) % " + k +
			";\n    members[r].transfer(1);\n  }\n";
	case 10:
		return "  function store" + n + "(uint[] data) public {\n    uint[] tmp;\n    uint unused = " + k +
			";\n    for (uint i = 0; i < data.length; i++) {\n      total += data[i];\n    }\n  }\n";
	default:
		return "  function old" + n + "(uint v) constant returns (bytes32) {\n    if (v == 0) throw;\n"
			"    return sha3(v, " + k + ");\n  }\n";
	}
}

inline std::string synthetic_contract(std::mt19937_64& rng, std::size_t index, std::size_t functions)
{
	std::string text = rng() % 2 ? "pragma solidity ^0.4.25;\n\n" : "pragma solidity 0.4.25;\n\n";
	text += "contract Synthetic" + std::to_string(index) + " {\n  address owner = 0x05f4b39a620417b8dcbf0be78737b6a423a3bd27;\n"
		"  address[] members;\n  mapping(address => uint) balances;\n  uint total;\n  uint count;\n"
		"  event Changed(address who, uint value);\n\n";
	for (std::size_t f = 0; f < functions; ++f)
		text += synthetic_function(rng, f) + "\n";
	if (rng() % 3 == 0)
		text += "  function kill() public {\n    require(msg.sender == owner);\n    selfdestruct(owner);\n  }\n";
	text += "}\n";
	return text;
}

/// Writes `files` contracts of about `lines_per_file` lines each below `root`.
inline SyntheticCorpus write_synthetic_corpus(std::filesystem::path const& root, std::size_t files,
	std::size_t lines_per_file, std::uint64_t seed)
{
	std::mt19937_64 rng(seed);
	SyntheticCorpus corpus;
	for (std::size_t i = 0; i < files; ++i)
	{
		std::string text;
		std::size_t functions = 1;
		while (true)
		{
			std::mt19937_64 probe = rng;
			text = synthetic_contract(probe, i, functions);
			if (static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) >= lines_per_file)
			{
				rng = probe;
				break;
			}
			functions += std::max<std::size_t>(1, (lines_per_file - std::count(text.begin(), text.end(), '\n')) / 9);
		}
		corpus.lines += static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
		char name[32];
		std::snprintf(name, sizeof name, "c%04zu.sol", i);
		write_file(root / ("part" + std::to_string(i % 7)) / name, text);
		++corpus.files;
	}
	return corpus;
}

}
