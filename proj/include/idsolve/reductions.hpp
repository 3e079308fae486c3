#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

// Red-Blue Dominating Set: pick at most k red vertices covering all blue ones.
struct RbdsInstance {
    int nr = 0, nb = 0;
    std::vector<std::pair<int, int>> edges;  // (red, blue), 0-based per side
    int k = 0;

    std::vector<std::vector<int>> red_adj() const {
        std::vector<std::vector<int>> adj(nr);
        for (auto [r, b] : edges) {
            if (r < 0 || r >= nr || b < 0 || b >= nb)
                throw std::invalid_argument("rbds edge out of range");
            adj[r].push_back(b);
        }
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        return adj;
    }
};

enum class RbdsOutcome { Reduced, TrivialNo, TrivialYes };

struct RbdsPreprocessed {
    RbdsOutcome outcome;
    RbdsInstance inst;  // meaningful only when Reduced
};

// Drops isolated red vertices and duplicate red neighborhoods; an isolated
// blue vertex is an immediate no, k at least the red count an immediate yes.
inline RbdsPreprocessed preprocess_rbds(const RbdsInstance& in) {
    auto adj = in.red_adj();
    std::vector<char> blue_covered(in.nb, 0);
    for (auto [r, b] : in.edges) blue_covered[b] = 1;
    for (char c : blue_covered)
        if (!c) return {RbdsOutcome::TrivialNo, {}};

    std::map<std::vector<int>, int> seen;
    std::vector<int> keep;
    for (int r = 0; r < in.nr; ++r) {
        if (adj[r].empty()) continue;
        if (seen.emplace(adj[r], r).second) keep.push_back(r);
    }
    RbdsInstance out;
    out.nb = in.nb;
    out.nr = (int)keep.size();
    out.k = in.k;
    for (int i = 0; i < out.nr; ++i)
        for (int b : adj[keep[i]]) out.edges.emplace_back(i, b);
    if (out.k >= out.nr) return {RbdsOutcome::TrivialYes, out};
    return {RbdsOutcome::Reduced, out};
}

inline std::optional<Solution> brute_force_rbds(const RbdsInstance& in, int cap = 20) {
    if (in.nr > cap) throw Refused("brute_force_rbds: red side exceeds cap");
    auto adj = in.red_adj();
    for (int size = 0; size <= std::min(in.k, in.nr); ++size) {
        auto hit = detail::first_combination(in.nr, size, [&](const std::vector<int>& idx) {
            std::vector<char> cov(in.nb, 0);
            for (int r : idx)
                for (int b : adj[r]) cov[b] = 1;
            for (char c : cov)
                if (!c) return false;
            return true;
        });
        if (hit) return Solution{*hit};
    }
    return std::nullopt;
}

namespace reductions_detail {

inline int ceil_log2(int x) {
    int q = 0;
    while ((1 << q) < x) ++q;
    return q;
}

inline bool bit_of(int value, int i) { return (value >> (i - 1)) & 1; }

}  // namespace reductions_detail

// Layout of the locating-dominating instance produced from an RBDS instance.
// Vertex order: R block, interleaved B pairs, y pairs (y_{1..q}, then y_0),
// z pairs (z_{1..p}, then z_0).
struct LdsReduction {
    Graph g;
    int k = 0;
    int q = 0, p = 0;
    std::vector<int> r_ids;                     // per red vertex
    std::vector<std::pair<int, int>> b_pairs;   // per blue vertex: (b°, b*)
    std::vector<int> y_connectors, z_connectors;  // y_{i,1} / z_{i,1}, index 1..q then 0
};

inline LdsReduction rbds_to_lds(const RbdsInstance& in) {
    auto adj = in.red_adj();
    int nr = in.nr, nb = in.nb;
    LdsReduction red;
    red.q = reductions_detail::ceil_log2(nr) + 1;
    red.p = reductions_detail::ceil_log2(nb) + 1;

    int next = 0;
    for (int r = 0; r < nr; ++r) red.r_ids.push_back(next++);
    for (int b = 0; b < nb; ++b) {
        int bo = next++, bs = next++;
        red.b_pairs.emplace_back(bo, bs);
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<int> y1(red.q + 1, -1), z1(red.p + 1, -1);
    for (int i = 1; i <= red.q; ++i) {
        int c = next++, pend = next++;
        y1[i] = c;
        edges.emplace_back(c, pend);
    }
    {
        int c = next++, pend = next++;
        y1[0] = c;
        edges.emplace_back(c, pend);
    }
    for (int i = 1; i <= red.p; ++i) {
        int c = next++, pend = next++;
        z1[i] = c;
        edges.emplace_back(c, pend);
    }
    {
        int c = next++, pend = next++;
        z1[0] = c;
        edges.emplace_back(c, pend);
    }
    for (int i = 1; i <= red.q; ++i) red.y_connectors.push_back(y1[i]);
    red.y_connectors.push_back(y1[0]);
    for (int i = 1; i <= red.p; ++i) red.z_connectors.push_back(z1[i]);
    red.z_connectors.push_back(z1[0]);

    // bit representation of the red side, indices starting from 1
    for (int r = 0; r < nr; ++r) {
        for (int i = 1; i <= red.q; ++i)
            if (reductions_detail::bit_of(r + 1, i)) edges.emplace_back(red.r_ids[r], y1[i]);
        edges.emplace_back(red.r_ids[r], y1[0]);
    }
    // bit representation of the blue pairs
    for (int b = 0; b < nb; ++b) {
        auto [bo, bs] = red.b_pairs[b];
        for (int i = 1; i <= red.p; ++i)
            if (reductions_detail::bit_of(b + 1, i)) {
                edges.emplace_back(bo, z1[i]);
                edges.emplace_back(bs, z1[i]);
            }
        edges.emplace_back(bo, z1[0]);
        edges.emplace_back(bs, z1[0]);
    }
    // cross edges: a non-neighbor sees both pair vertices, a neighbor only b°
    for (int r = 0; r < nr; ++r) {
        for (int b = 0; b < nb; ++b) {
            bool adjacent = std::binary_search(adj[r].begin(), adj[r].end(), b);
            auto [bo, bs] = red.b_pairs[b];
            edges.emplace_back(red.r_ids[r], bo);
            if (!adjacent) edges.emplace_back(red.r_ids[r], bs);
        }
    }
    red.g = Graph::from_edges(next, edges);
    red.k = in.k + (red.q + 1) + (red.p + 1);
    if (red.g.n != nr + 2 * nb + 2 * (red.q + 1) + 2 * (red.p + 1))
        throw std::logic_error("lds reduction size accounting broken");
    return red;
}

// Test Cover companion: tests are the red vertices plus the z connectors,
// items are the blue pairs, the z pendants, and one isolated item.
struct TcReduction {
    SetSystem sys;
    int k = 0;
    int p = 0;
    std::vector<std::pair<int, int>> b_pair_items;  // (b°, b*) item ids
    std::vector<int> z_tests;                        // z_{1..p,1} then z_{0,1}
    int isolated_item = -1;
};

inline TcReduction rbds_to_tc(const RbdsInstance& in) {
    auto adj = in.red_adj();
    int nr = in.nr, nb = in.nb;
    TcReduction red;
    red.p = reductions_detail::ceil_log2(nb) + 1;

    int item = 0;
    for (int b = 0; b < nb; ++b) {
        int bo = item++, bs = item++;
        red.b_pair_items.emplace_back(bo, bs);
    }
    std::vector<int> z2(red.p + 1, -1);
    for (int i = 1; i <= red.p; ++i) z2[i] = item++;
    z2[0] = item++;
    red.isolated_item = item++;

    red.sys.universe = item;
    for (int r = 0; r < nr; ++r) {
        std::vector<int> test;
        for (int b = 0; b < nb; ++b) {
            bool adjacent = std::binary_search(adj[r].begin(), adj[r].end(), b);
            test.push_back(red.b_pair_items[b].first);
            if (!adjacent) test.push_back(red.b_pair_items[b].second);
        }
        red.sys.tests.push_back(test);
    }
    for (int i = 1; i <= red.p; ++i) {
        std::vector<int> test{z2[i]};
        for (int b = 0; b < nb; ++b)
            if (reductions_detail::bit_of(b + 1, i)) {
                test.push_back(red.b_pair_items[b].first);
                test.push_back(red.b_pair_items[b].second);
            }
        red.z_tests.push_back((int)red.sys.tests.size());
        red.sys.tests.push_back(test);
    }
    {
        std::vector<int> test{z2[0]};
        for (int b = 0; b < nb; ++b) {
            test.push_back(red.b_pair_items[b].first);
            test.push_back(red.b_pair_items[b].second);
        }
        red.z_tests.push_back((int)red.sys.tests.size());
        red.sys.tests.push_back(test);
    }
    red.sys.normalize();
    red.k = in.k + (red.p + 1);
    return red;
}

}  // namespace idsolve
