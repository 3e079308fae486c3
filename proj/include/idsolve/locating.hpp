#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "idsolve/bitset.hpp"
#include "idsolve/graph.hpp"
#include "idsolve/partition.hpp"

namespace idsolve {

struct Solution {
    std::vector<int> vertices;  // sorted
    int size() const { return (int)vertices.size(); }
};

inline bool is_locating_dominating(const Graph& g, const Bitset& s) {
    if (s.capacity() != g.n) throw std::invalid_argument("vertex set size mismatch");
    std::vector<std::vector<int>> codes;
    for (int v = 0; v < g.n; ++v) {
        if (s.test(v)) continue;
        std::vector<int> code;
        for (int u : g.adj[v])
            if (s.test(u)) code.push_back(u);
        if (code.empty()) return false;  // undominated
        codes.push_back(std::move(code));
    }
    std::sort(codes.begin(), codes.end());
    return std::adjacent_find(codes.begin(), codes.end()) == codes.end();
}

inline bool is_locating_dominating(const Graph& g, const std::vector<int>& s) {
    for (int v : s)
        if (v < 0 || v >= g.n) throw std::invalid_argument("vertex id out of range");
    return is_locating_dominating(g, Bitset::of(g.n, s));
}

// Maximal classes of mutual twins. A class is homogeneous: either all pairs are
// false twins (equal open neighborhoods) or all true twins (equal closed ones);
// no vertex can sit in both kinds of pair at once.
inline Partition twin_classes(const Graph& g) {
    std::map<std::vector<int>, std::vector<int>> open, closed;
    for (int v = 0; v < g.n; ++v) {
        open[g.adj[v]].push_back(v);
        std::vector<int> cl = g.adj[v];
        cl.insert(std::lower_bound(cl.begin(), cl.end(), v), v);
        closed[cl].push_back(v);
    }
    std::vector<int> cls(g.n, -1);
    std::vector<std::vector<int>> blocks;
    for (auto& [key, vs] : open)
        if (vs.size() >= 2) {
            for (int v : vs) cls[v] = (int)blocks.size();
            blocks.push_back(vs);
        }
    for (auto& [key, vs] : closed)
        if (vs.size() >= 2) {
            for (int v : vs) {
                if (cls[v] != -1) throw std::logic_error("vertex in two twin classes");
                cls[v] = (int)blocks.size();
            }
            blocks.push_back(vs);
        }
    for (int v = 0; v < g.n; ++v)
        if (cls[v] == -1) blocks.push_back({v});
    return Partition::of_blocks(std::move(blocks));
}

struct TwinRuleResult {
    Graph graph;
    int k;
    std::vector<int> removed;   // deleted vertices, original ids
    std::vector<int> kept;      // kept[new_id] = original id
};

// Reduction rule: while some twin class has >= 3 vertices, delete one (the
// largest id) and decrement k. Output has <= 2 vertices per twin class.
inline TwinRuleResult apply_twin_rule(const Graph& g, int k) {
    TwinRuleResult res;
    res.graph = g;
    res.k = k;
    res.kept.resize(g.n);
    std::iota(res.kept.begin(), res.kept.end(), 0);
    while (true) {
        Partition classes = twin_classes(res.graph);
        std::vector<int> drop;
        for (auto& blk : classes.blocks)
            for (size_t i = 2; i < blk.size(); ++i) drop.push_back(blk[i]);
        if (drop.empty()) break;
        std::sort(drop.begin(), drop.end());
        for (int v : drop) res.removed.push_back(res.kept[v]);
        res.k -= (int)drop.size();
        std::vector<int> keep;
        Bitset dropped = Bitset::of(res.graph.n, drop);
        for (int v = 0; v < res.graph.n; ++v)
            if (!dropped.test(v)) keep.push_back(v);
        std::vector<int> old_of;
        Graph reduced = res.graph.induced(keep, &old_of);
        std::vector<int> new_kept(old_of.size());
        for (size_t i = 0; i < old_of.size(); ++i) new_kept[i] = res.kept[old_of[i]];
        res.graph = std::move(reduced);
        res.kept = std::move(new_kept);
    }
    return res;
}

namespace detail {

// Word-sized LDS check for the enumeration oracle (n <= 62).
inline bool is_ld_mask(int n, const std::vector<uint64_t>& adj, uint64_t s) {
    uint64_t seen_codes[64];
    int nc = 0;
    for (int v = 0; v < n; ++v) {
        if ((s >> v) & 1) continue;
        uint64_t code = adj[v] & s;
        if (!code) return false;
        seen_codes[nc++] = code;
    }
    std::sort(seen_codes, seen_codes + nc);
    return std::adjacent_find(seen_codes, seen_codes + nc) == seen_codes + nc;
}

// First subset of given size that satisfies pred, in lexicographic order over
// ascending index tuples; returns nullopt if none.
template <typename Pred>
inline std::optional<std::vector<int>> first_combination(int n, int size, Pred pred) {
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    if (size > n) return std::nullopt;
    while (true) {
        if (pred(idx)) return idx;
        int i = size - 1;
        while (i >= 0 && idx[i] == n - size + i) --i;
        if (i < 0) return std::nullopt;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Minimum locating-dominating set by subset enumeration in increasing size,
// lexicographically smallest witness. Refuses when n exceeds the cap.
inline Solution brute_force_lds(const Graph& g, int cap = 20) {
    if (g.n > cap)
        throw Refused("brute_force_lds: n=" + std::to_string(g.n) + " exceeds cap " +
                      std::to_string(cap));
    if (g.n == 0) return Solution{};
    std::vector<uint64_t> adj(g.n, 0);
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u]) adj[u] |= uint64_t(1) << v;
    for (int size = 1; size <= g.n; ++size) {
        auto hit = detail::first_combination(g.n, size, [&](const std::vector<int>& idx) {
            uint64_t s = 0;
            for (int i : idx) s |= uint64_t(1) << i;
            return detail::is_ld_mask(g.n, adj, s);
        });
        if (hit) return Solution{*hit};
    }
    throw std::logic_error("no locating-dominating set found");  // unreachable: V(G) works
}

inline bool brute_force_lds_decision(const Graph& g, int k, int cap = 20) {
    if (k < 0) return false;
    return brute_force_lds(g, cap).size() <= k;
}

}  // namespace idsolve
