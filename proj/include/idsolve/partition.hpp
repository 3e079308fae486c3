#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "idsolve/bitset.hpp"
#include "idsolve/graph.hpp"

namespace idsolve {

// Canonical partition of a vertex subset: blocks sorted ascending, ordered by
// minimum element, so equal partitions have equal representations.
struct Partition {
    std::vector<std::vector<int>> blocks;
    std::vector<int> ground;

    static Partition of_blocks(std::vector<std::vector<int>> blocks_in) {
        Partition p;
        std::vector<int> seen;
        for (auto& b : blocks_in) {
            if (b.empty()) continue;
            std::sort(b.begin(), b.end());
            seen.insert(seen.end(), b.begin(), b.end());
            p.blocks.push_back(std::move(b));
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw std::invalid_argument("partition blocks not disjoint");
        p.ground = std::move(seen);
        std::sort(p.blocks.begin(), p.blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return p;
    }

    static Partition identity(std::vector<int> ground) {
        std::vector<std::vector<int>> bs;
        bs.reserve(ground.size());
        for (int v : ground) bs.push_back({v});
        return of_blocks(std::move(bs));
    }

    static Partition single_block(std::vector<int> ground) {
        if (ground.empty()) return Partition{};
        return of_blocks({std::move(ground)});
    }

    bool is_identity() const {
        for (auto& b : blocks)
            if (b.size() != 1) return false;
        return true;
    }

    size_t block_count() const { return blocks.size(); }

    bool operator==(const Partition& o) const { return blocks == o.blocks; }
    bool operator!=(const Partition& o) const { return !(*this == o); }
};

// Partition of `ground` induced by C: singletons for ground ∩ C, remaining
// vertices grouped by N(.) ∩ C.
inline Partition induced_partition(const std::vector<int>& ground, const Bitset& c,
                                   const Graph& g) {
    for (int v : ground)
        if (v < 0 || v >= g.n) throw std::invalid_argument("ground vertex out of range");
    std::vector<std::vector<int>> blocks;
    std::map<std::vector<int>, std::vector<int>> classes;
    for (int v : ground) {
        if (c.test(v)) {
            blocks.push_back({v});
            continue;
        }
        std::vector<int> code;
        for (int u : g.adj[v])
            if (c.test(u)) code.push_back(u);
        classes[code].push_back(v);
    }
    for (auto& [code, vs] : classes) blocks.push_back(vs);
    return Partition::of_blocks(std::move(blocks));
}

inline Partition induced_partition(const std::vector<int>& ground, const std::vector<int>& c,
                                   const Graph& g) {
    return induced_partition(ground, Bitset::of(g.n, c), g);
}

// P ⊓ Q: pairwise block intersections, empties dropped.
inline Partition meet(const Partition& p, const Partition& q) {
    if (p.ground != q.ground) throw std::invalid_argument("meet: ground sets differ");
    if (p.ground.empty()) return Partition{};
    int maxid = p.ground.back() + 1;
    std::vector<int> pb(maxid, -1), qb(maxid, -1);
    for (size_t i = 0; i < p.blocks.size(); ++i)
        for (int v : p.blocks[i]) pb[v] = (int)i;
    for (size_t j = 0; j < q.blocks.size(); ++j)
        for (int v : q.blocks[j]) qb[v] = (int)j;
    std::map<std::pair<int, int>, std::vector<int>> cells;
    for (int v : p.ground) cells[{pb[v], qb[v]}].push_back(v);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(cells.size());
    for (auto& [key, vs] : cells) blocks.push_back(vs);
    return Partition::of_blocks(std::move(blocks));
}

}  // namespace idsolve
