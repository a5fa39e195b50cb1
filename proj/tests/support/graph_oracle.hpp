#pragma once

// Quadratic reference algorithms over block successor lists.

#include <soldefect/evm/cfg.hpp>

#include <map>
#include <set>
#include <vector>

namespace soldefect::test
{

/// Blocks reachable from `from` without entering `removed`.
inline std::vector<bool> reach(std::vector<evm::BasicBlock> const& blocks, std::size_t from,
	std::optional<std::size_t> removed = std::nullopt)
{
	std::vector<bool> seen(blocks.size(), false);
	if (removed == from)
		return seen;
	std::vector<std::size_t> work{from};
	seen[from] = true;
	while (!work.empty())
	{
		auto const n = work.back();
		work.pop_back();
		for (auto const s: blocks[n].successors)
			if (!seen[s] && s != removed)
			{
				seen[s] = true;
				work.push_back(s);
			}
	}
	return seen;
}

/// dom[a][b]: every path from the entry to b passes through a (b reachable).
inline std::vector<std::vector<bool>> brute_dominance(std::vector<evm::BasicBlock> const& blocks, std::size_t entry)
{
	auto const reachable = reach(blocks, entry);
	std::vector<std::vector<bool>> dom(blocks.size(), std::vector<bool>(blocks.size(), false));
	for (std::size_t a = 0; a < blocks.size(); ++a)
	{
		if (!reachable[a])
			continue;
		auto const without = reach(blocks, entry, a);
		for (std::size_t b = 0; b < blocks.size(); ++b)
			dom[a][b] = reachable[b] && (a == b || !without[b]);
	}
	return dom;
}

/// Natural loops keyed by header: back edges u->h with h dominating u; the body is h plus every
/// block that reaches some such u without passing through h.
inline std::map<std::size_t, std::set<std::size_t>> brute_loops(std::vector<evm::BasicBlock> const& blocks, std::size_t entry)
{
	auto const dom = brute_dominance(blocks, entry);
	std::map<std::size_t, std::set<std::size_t>> loops;
	for (std::size_t u = 0; u < blocks.size(); ++u)
		for (auto const h: blocks[u].successors)
		{
			if (!dom[h][u])
				continue;
			auto& body = loops[h];
			body.insert(h);
			for (std::size_t n = 0; n < blocks.size(); ++n)
			{
				if (!dom[n][n] || n == h)
					continue;
				if (reach(blocks, n, h)[u])
					body.insert(n);
			}
		}
	return loops;
}

/// Reachable blocks that lie on some cycle.
inline std::set<std::size_t> cyclic_blocks(std::vector<evm::BasicBlock> const& blocks, std::size_t entry)
{
	auto const reachable = reach(blocks, entry);
	std::set<std::size_t> out;
	for (std::size_t n = 0; n < blocks.size(); ++n)
	{
		if (!reachable[n])
			continue;
		for (auto const s: blocks[n].successors)
			if (reach(blocks, s)[n])
			{
				out.insert(n);
				break;
			}
	}
	return out;
}

}
