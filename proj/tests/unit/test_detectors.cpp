#include "../support/test_support.hpp"

#include <soldefect/detectors.hpp>

#include <gtest/gtest.h>

using namespace soldefect;
using namespace soldefect::test;

namespace
{

using Lines = std::vector<std::uint64_t>;

std::vector<Finding> golden_findings(std::string const& name, DetectorConfig const& config = {})
{
	return analyze_source(read_file(golden(name)), config);
}

// Wraps statements in a pinned-pragma contract with a few common members.
std::string in_function(std::string const& body, std::string const& members = "")
{
	return "pragma solidity 0.4.25;\ncontract T {\n  address[] members;\n  uint total;\n  address owner;\n" + members +
		"\n  function f(address x, uint n) public {\n" + body + "\n  }\n}\n";
}

std::string const token_events = R"(
  event Transfer(address indexed from, address indexed to, uint256 value);
  event Approval(address indexed owner, address indexed spender, uint256 value);)";

std::string token(std::string const& transfer_returns)
{
	return "pragma solidity 0.4.25;\ncontract Token {\n" + token_events + R"(
  mapping(address => uint256) balances;
  function totalSupply() public view returns (uint256) { return 0; }
  function balanceOf(address o) public view returns (uint256) { return balances[o]; }
  function transfer(address to, uint256 v) public )" +
		transfer_returns + R"( { balances[to] += v; emit Transfer(msg.sender, to, v); }
  function transferFrom(address a, address b, uint256 v) public returns (bool) { emit Transfer(a, b, v); return true; }
  function approve(address s, uint256 v) public returns (bool) { emit Approval(msg.sender, s, v); return true; }
  function allowance(address o, address s) public view returns (uint256) { o; s; return 0; }
}
)";
}

}

// ---------------------------------------------------------------------------------------------
// Golden listings

TEST(GoldenListings, GambleAnnotatedFindings)
{
	auto const f = golden_findings("gamble.sol");
	EXPECT_EQ(positions(f, "D05"), (Lines{8}));
	EXPECT_EQ(positions(f, "D03"), (Lines{21}));
	EXPECT_EQ(positions(f, "D06"), (Lines{25}));
	EXPECT_EQ(positions(f, "D01"), (Lines{26, 39}));
	EXPECT_EQ(positions(f, "D04"), (Lines{30}));
	EXPECT_EQ(positions(f, "D08"), (Lines{30}));
	EXPECT_EQ(positions(f, "D02"), (Lines{33}));
	EXPECT_EQ(positions(f, "D12"), (Lines{28}));
	EXPECT_EQ(positions(f, "D11"), (Lines{15}));
	EXPECT_EQ(positions(f, "D20"), (Lines{1}));
	EXPECT_EQ(positions(f, "D17"), (Lines{12, 38}));
	EXPECT_TRUE(positions(f, "D13").empty());
	EXPECT_TRUE(positions(f, "D18").empty());
}

TEST(GoldenListings, HardCodedOwnerCarriesChecksumDiagnosis)
{
	auto const f = golden_findings("gamble.sol");
	auto const it = std::find_if(f.begin(), f.end(), [](Finding const& x) { return x.detector == "D17" && x.line == 12u; });
	ASSERT_NE(it, f.end());
	EXPECT_NE(it->message.find("illegal address"), std::string::npos);
	EXPECT_NE(it->message.find("0xDcAD761E36caB627E8CF9068a3c4fD617cD1d3aD"), std::string::npos);
}

TEST(GoldenListings, ReentrancyInWithdraw)
{
	auto const f = golden_findings("reentrancy.sol");
	EXPECT_EQ(positions(f, "D07"), (Lines{6}));
}

TEST(GoldenListings, DefectExample)
{
	auto const f = golden_findings("defect_example.sol");
	EXPECT_EQ(positions(f, "D20"), (Lines{1}));
	EXPECT_EQ(positions(f, "D09"), (Lines{8}));
	EXPECT_EQ(positions(f, "D14"), (Lines{11, 13}));
	EXPECT_EQ(positions(f, "D15"), (Lines{16}));
	EXPECT_EQ(positions(f, "D13"), (Lines{2}));
	EXPECT_EQ(positions(f, "D18"), (Lines{2}));
}

// ---------------------------------------------------------------------------------------------
// Per-detector examples

TEST(D01, CheckedSendIsQuiet)
{
	EXPECT_EQ(count(analyze_source(in_function("require(x.send(1 ether));")), "D01"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("if (!x.send(1)) revert();")), "D01"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("x.send(1);")), "D01"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("x.transfer(1);")), "D01"), 0u);
}

TEST(D02, ConstantBoundAndBooleanHandling)
{
	EXPECT_EQ(count(analyze_source(in_function("for (uint i = 0; i < 5; i++) { x.transfer(1); }")), "D02"), 0u);
	EXPECT_EQ(count(analyze_source(in_function(
				  "for (uint i = 0; i < members.length; i++) { if (members[i].send(1) == false) break; }")),
				  "D02"),
		0u);
	EXPECT_EQ(count(analyze_source(in_function("for (uint i = 0; i < n; i++) { require(i != 3); }")), "D02"), 1u);
}

TEST(D03, RangeCheckIsQuietAndNotEqualIsOptIn)
{
	EXPECT_EQ(count(analyze_source(in_function("if (this.balance >= 10 ether && this.balance < 11 ether) total = 1;")), "D03"), 0u);
	auto const neq = in_function("if (address(this).balance != 10 ether) total = 1;");
	EXPECT_EQ(count(analyze_source(neq), "D03"), 0u);
	DetectorConfig strict;
	strict.balance_neq = true;
	auto const f = analyze_source(neq, strict);
	ASSERT_EQ(count(f, "D03"), 1u);
	EXPECT_EQ(f[0].impact, Impact::IP5);
}

TEST(D04, CounterWidths)
{
	EXPECT_EQ(count(analyze_source(in_function("for (uint256 i = 0; i < members.length; i++) { total += i; }")), "D04"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("for (uint8 i = 0; i < 10; i++) { total += i; }")), "D04"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("for (uint8 i = 0; i < 300; i++) { total += i; }")), "D04"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("for (var i = 0; i < n; i++) { total += i; }")), "D04"), 1u);
}

TEST(D05, ConditionsOnlyUnlessStrict)
{
	EXPECT_EQ(count(analyze_source(in_function("require(msg.sender == owner);")), "D05"), 0u);
	auto const logged = in_function("Seen(tx.origin);", "  event Seen(address a);");
	EXPECT_EQ(count(analyze_source(logged), "D05"), 0u);
	DetectorConfig strict;
	strict.tx_origin_all_uses = true;
	EXPECT_EQ(count(analyze_source(logged, strict), "D05"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("if (tx.origin == owner) total = 1;")), "D05"), 1u);
}

TEST(D06, EventArgumentsAreNotSinks)
{
	EXPECT_EQ(count(analyze_source(in_function("emit Stamp(block.timestamp);", "  event Stamp(uint t);")), "D06"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("total = n + 1;")), "D06"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("uint t = now; uint d = t + 1; if (d > n) total = 1;")), "D06"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("x.transfer(block.number);")), "D06"), 1u);
}

TEST(D07, OrderingAndTransfer)
{
	std::string const members = "  mapping(address => uint) bal;";
	EXPECT_EQ(count(analyze_source(in_function(
				  "uint a = bal[msg.sender]; if (a > 0) { bal[msg.sender] = 0; msg.sender.call.value(a)(); }", members)),
				  "D07"),
		0u);
	EXPECT_EQ(count(analyze_source(in_function(
				  "uint a = bal[msg.sender]; if (a > 0) { msg.sender.transfer(a); bal[msg.sender] = 0; }", members)),
				  "D07"),
		0u);
	EXPECT_EQ(count(analyze_source(in_function(
				  "uint a = bal[msg.sender]; if (a > 0) { msg.sender.call.value(a)(); bal[msg.sender] = 0; }", members)),
				  "D07"),
		1u);
}

TEST(D08, BoundedLoopIsQuiet)
{
	EXPECT_EQ(count(analyze_source(in_function("for (uint i = 0; i < 5; i++) { x.transfer(1); }")), "D08"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("for (uint i = 0; i < n; i++) { total += i; }")), "D08"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("for (uint i = 0; i < n; i++) { x.send(1); }")), "D08"), 1u);
}

TEST(D09, DataLocations)
{
	EXPECT_EQ(count(analyze_source(in_function("uint[] memory tmp; tmp;")), "D09"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("uint y; y = 1;")), "D09"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("uint[] tmp; tmp;")), "D09"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("S s; s.a = 1;", "  struct S { uint a; }")), "D09"), 1u);
}

TEST(D10, TokenConformance)
{
	EXPECT_EQ(count(analyze_source(token("returns (bool)")), "D10"), 0u);
	EXPECT_EQ(count(analyze_source(token("")), "D10"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("total = n;")), "D10"), 0u);
	auto const partial = "pragma solidity 0.4.25;\ncontract P {\n  function transfer(address to, uint256 v) public returns (bool) { to; v; return true; }\n}\n";
	EXPECT_GE(count(analyze_source(partial), "D10"), 1u);
}

TEST(D11, EmissionSilences)
{
	std::string const with_emit = "pragma solidity 0.4.25;\ncontract R {\n  uint total;\n  event Received(address a);\n"
								  "  function pay() public payable { total += msg.value; emit Received(msg.sender); }\n}\n";
	EXPECT_EQ(count(analyze_source(with_emit), "D11"), 0u);
	std::string const empty_fallback = "pragma solidity 0.4.25;\ncontract R {\n  function() payable {}\n}\n";
	EXPECT_EQ(count(analyze_source(empty_fallback), "D11"), 0u);
	std::string const silent = "pragma solidity 0.4.25;\ncontract R {\n  uint total;\n"
							   "  function pay() public payable { total += msg.value; }\n}\n";
	EXPECT_EQ(count(analyze_source(silent), "D11"), 1u);
}

TEST(D12, ReturnsAndNamedExemption)
{
	auto wrap = [](std::string const& fn) { return "pragma solidity 0.4.25;\ncontract M {\n  uint v;\n" + fn + "\n}\n"; };
	EXPECT_EQ(count(analyze_source(wrap("  function g() returns (bool) { v = 1; return true; }")), "D12"), 0u);
	EXPECT_EQ(count(analyze_source(wrap("  function g() returns (bool ok) { ok = true; }")), "D12"), 0u);
	EXPECT_EQ(count(analyze_source(wrap("  function g() returns (bool) { if (v > 1) return true; }")), "D12"), 1u);
	EXPECT_EQ(count(analyze_source(wrap("  function g() returns (bool) { if (v > 1) return true; else revert(); }")), "D12"), 0u);
}

TEST(D13, NeedsPayableAndNoWayOut)
{
	auto const plain = "pragma solidity 0.4.25;\ncontract N {\n  uint v;\n  function set(uint a) public { v = a; }\n}\n";
	EXPECT_EQ(count(analyze_source(plain), "D13"), 0u);
	auto const out = "pragma solidity 0.4.25;\ncontract N {\n  function() payable {}\n  function w() public { msg.sender.transfer(1); }\n}\n";
	EXPECT_EQ(count(analyze_source(out), "D13"), 0u);
	auto const inherited = "pragma solidity 0.4.25;\ncontract B {\n  function w() public { msg.sender.transfer(1); }\n}\n"
						   "contract N is B {\n  function() payable {}\n}\n";
	EXPECT_EQ(count(analyze_source(inherited), "D13"), 0u);
}

TEST(D14, LivenessIsTransitive)
{
	auto wrap = [](std::string const& fn) { return "pragma solidity 0.4.25;\ncontract U {\n  uint v;\n" + fn + "\n}\n"; };
	EXPECT_EQ(count(analyze_source(wrap("  function g(uint a, uint b) public { v = a + b; }")), "D14"), 0u);
	EXPECT_EQ(count(analyze_source(wrap("  function g() public {\n    uint x = 1;\n    uint y = x;\n    y = y + 1;\n  }")), "D14"), 2u);
}

TEST(D15, InternalCallersAndExternal)
{
	auto const called = "pragma solidity 0.4.25;\ncontract G {\n  uint v;\n"
						"  function h(uint[] a) public { v = a.length; }\n"
						"  function k(uint[] b) public { h(b); }\n}\n";
	auto const f = analyze_source(called);
	EXPECT_EQ(positions(f, "D15"), (Lines{5}));
	auto const ext = "pragma solidity 0.4.25;\ncontract G {\n  uint v;\n  function h(uint[] a) external { v = a.length; }\n}\n";
	EXPECT_EQ(count(analyze_source(ext), "D15"), 0u);
}

TEST(D16, ByteArrays)
{
	auto wrap = [](std::string const& decl) { return "pragma solidity 0.4.25;\ncontract D {\n  " + decl + "\n}\n"; };
	EXPECT_EQ(count(analyze_source(wrap("byte[] data;")), "D16"), 1u);
	EXPECT_EQ(count(analyze_source(wrap("bytes data;")), "D16"), 0u);
	EXPECT_EQ(count(analyze_source(wrap("uint8[] data;")), "D16"), 0u);
	EXPECT_EQ(count(analyze_source(wrap("function g(byte[] p) public { p; }")), "D16"), 1u);
}

TEST(D17, OnlyLiterals)
{
	EXPECT_EQ(count(analyze_source(in_function("owner = x;")), "D17"), 0u);
	auto const f = analyze_source(in_function("owner = 0x05f4b39a620417b8dcbf0be78737b6a423a3bd27;"));
	ASSERT_EQ(count(f, "D17"), 1u);
	EXPECT_EQ(f[0].message.find("illegal"), std::string::npos);
	EXPECT_EQ(count(analyze_source(in_function("owner = address(0);")), "D17"), 0u);
}

TEST(D18, Interrupters)
{
	auto const plain = "pragma solidity 0.4.25;\ncontract I {\n  uint v;\n  function set(uint a) public { v = a; }\n}\n";
	EXPECT_EQ(count(analyze_source(plain), "D18"), 0u);
	auto const breaker = R"(pragma solidity 0.4.25;
contract I {
  address owner;
  bool stopped;
  modifier onlyOwner() { require(msg.sender == owner); _; }
  function stop() public onlyOwner { stopped = true; }
  function deposit() public payable { require(!stopped); }
  function withdraw() public { require(!stopped); msg.sender.transfer(1); }
}
)";
	EXPECT_EQ(count(analyze_source(breaker), "D18"), 0u);
	auto const kill = "pragma solidity 0.4.25;\ncontract I {\n  function() payable {}\n  function kill() public { selfdestruct(msg.sender); }\n}\n";
	EXPECT_EQ(count(analyze_source(kill), "D18"), 0u);
	auto const stuck = "pragma solidity 0.4.25;\ncontract I {\n  function() payable {}\n}\n";
	EXPECT_EQ(count(analyze_source(stuck), "D18"), 1u);
}

TEST(D19, DeprecatedNames)
{
	EXPECT_EQ(count(analyze_source(in_function("if (n == 0) throw;")), "D19"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("if (n == 0) revert();")), "D19"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("bytes32 h = sha3(n); h;")), "D19"), 1u);
	EXPECT_EQ(count(analyze_source(in_function("bytes32 h = keccak256(n); h;")), "D19"), 0u);
	EXPECT_EQ(count(analyze_source(in_function("total = msg.gas;")), "D19"), 1u);
	DetectorConfig extra;
	extra.deprecated_extra = {"ecrecover"};
	EXPECT_EQ(count(analyze_source(in_function("address a = ecrecover(0, 0, 0, 0); a;"), extra), "D19"), 1u);
}

TEST(D20, Pragmas)
{
	EXPECT_EQ(positions(analyze_source("pragma solidity ^0.4.25;\ncontract A {}\n"), "D20"), (Lines{1}));
	EXPECT_EQ(count(analyze_source("pragma solidity 0.4.25;\ncontract A {}\n"), "D20"), 0u);
	EXPECT_EQ(count(analyze_source("pragma solidity =0.4.25;\ncontract A {}\n"), "D20"), 0u);
	EXPECT_EQ(positions(analyze_source("contract A {}\n"), "D20"), (Lines{1}));
	EXPECT_EQ(count(analyze_source("pragma solidity >=0.4.22 <0.6.0;\ncontract A {}\n"), "D20"), 1u);
}

// ---------------------------------------------------------------------------------------------
// Registry and runner properties

TEST(Registry, CategoriesImpactsAndLookup)
{
	auto const registry = detector_registry();
	ASSERT_EQ(registry.size(), 20u);
	std::map<Category, int> categories;
	for (std::size_t i = 0; i < registry.size(); ++i)
	{
		char id[24];
		std::snprintf(id, sizeof id, "D%02zu", i + 1);
		EXPECT_EQ(registry[i].id, id);
		++categories[registry[i].category];
		EXPECT_EQ(find_detector(registry[i].slug), &registry[i]);
		EXPECT_FALSE(registry[i].advice.empty());
	}
	EXPECT_EQ(categories[Category::security], 9);
	EXPECT_EQ(categories[Category::availability], 4);
	EXPECT_EQ(categories[Category::performance], 3);
	EXPECT_EQ(categories[Category::maintainability], 2);
	EXPECT_EQ(categories[Category::reusability], 2);
	EXPECT_EQ(find_detector("reentrancy")->impact, Impact::IP1);
	EXPECT_EQ(find_detector("nested-call")->impact, Impact::IP2);
	EXPECT_EQ(find_detector("hard-code-address")->impact, Impact::IP3);
	EXPECT_EQ(find_detector("missing-reminder")->impact, Impact::IP4);
	EXPECT_EQ(find_detector("deprecated-apis")->impact, Impact::IP5);
	EXPECT_THROW(parse_detector_list("D01,bogus"), std::invalid_argument);
	EXPECT_EQ(parse_detector_list("[d01, reentrancy]"), (std::set<std::string>{"D01", "D07"}));
}

TEST(Runner, DetectorsArePure)
{
	for (auto name: {"gamble.sol", "reentrancy.sol", "defect_example.sol"})
	{
		auto const text = read_file(golden(name));
		auto const facts = build_source_facts(name, text);
		DetectorConfig config;
		AnalysisContext ctx{facts.get(), nullptr, &config};
		for (auto const& d: detector_registry())
		{
			auto const first = run_detector(d, ctx);
			auto const second = run_detector(d, ctx);
			EXPECT_EQ(first.findings, second.findings) << name << " " << d.id;
		}
	}
}

TEST(Runner, DisablingRemovesExactlyThatDetector)
{
	for (auto name: {"gamble.sol", "reentrancy.sol", "defect_example.sol", "tx_origin_attacker.sol"})
	{
		auto const all = golden_findings(name);
		for (auto const& d: detector_registry())
		{
			DetectorConfig config;
			config.disable = {std::string(d.id)};
			auto const without = golden_findings(name, config);
			std::vector<Finding> expected;
			std::copy_if(all.begin(), all.end(), std::back_inserter(expected), [&](Finding const& f) { return f.detector != d.id; });
			EXPECT_EQ(without, expected) << name << " " << d.id;
		}
	}
}

TEST(Runner, SkipsDetectorsWithoutFacts)
{
	auto const facts = build_bytecode_facts("x.hex", evm::parse_hex("6001600201"));
	DetectorConfig config;
	AnalysisContext ctx{nullptr, facts.get(), &config};
	auto const runs = run_detectors(ctx);
	ASSERT_EQ(runs.size(), 20u);
	for (auto const& run: runs)
	{
		bool const bytecode = run.descriptor->frontends & frontend_bytecode;
		EXPECT_EQ(run.status, bytecode ? DetectorStatus::ran : DetectorStatus::skipped) << run.descriptor->id;
	}
}

TEST(Runner, NormalizeMergesByIdentity)
{
	Finding a{"D01", Category::security, Impact::IP3, "f.sol", 3, 1, std::nullopt, std::nullopt, "first", ""};
	Finding b = a;
	b.message = "second";
	b.column = 9;
	Finding c = a;
	c.line = 2;
	std::vector<Finding> findings{a, b, c};
	normalize_findings(findings);
	ASSERT_EQ(findings.size(), 2u);
	EXPECT_EQ(findings[0].line, 2u);
	EXPECT_EQ(findings[1].message, "first; second");
}

// ---------------------------------------------------------------------------------------------
// Source and bytecode agree on the dual-mode detectors

TEST(Probes, SourceAndBytecodeAgree)
{
	std::set<std::string> const dual{"D03", "D08", "D10", "D17"};
	std::map<std::string, std::set<std::string>> const expected{
		{"balance_equality", {"D03"}},
		{"bounded_loop", {}},
		{"fallback_only", {}},
		{"hardcoded_address", {"D17"}},
		{"partial_token", {"D10"}},
		{"token", {}},
		{"two_functions", {}},
		{"unbounded_loop", {"D08"}},
	};
	for (auto const& [probe, ids]: expected)
	{
		auto ids_of = [&](std::vector<Finding> const& findings) {
			std::set<std::string> out;
			for (auto const& f: findings)
				if (dual.count(f.detector))
					out.insert(f.detector);
			return out;
		};
		auto const source = ids_of(analyze_source(read_file(fixture("probes/" + probe + ".sol"))));
		auto const runtime = ids_of(analyze_hex(read_file(fixture("probes/" + probe + ".runtime.hex"))));
		EXPECT_EQ(source, ids) << probe;
		EXPECT_EQ(runtime, ids) << probe;
	}
}
