#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "idsolve/graph.hpp"

namespace idsolve {

// Rooted solution types for trees, ordered A < B < C < D < E:
//   A: dominates V\{v}, locates pairs outside L∪{v}
//   B: dominates V, locates pairs outside L∪{v}
//   C: locating-dominating set
//   D: C with v ∈ L
//   E: D and no vertex w ∉ L has N(w) ∩ L = {v}
// The doubly-rooted (X,Y) types relax the same conditions around v2; pairs
// containing v1 are only required from C upward, the pair {v1,v2} never.

namespace tree_detail {

constexpr int64_t INF = std::numeric_limits<int64_t>::max() / 4;

// Interface of a solved subtree toward its parent. In a tree, two distinct
// vertices share a code only when it is empty or a single common neighbor,
// so clash bookkeeping localizes to these states.
enum State {
    IN0 = 0,   // in L, no pending {u}-coded vertex
    IN1,       // in L, one pending {u}-coded vertex (not v2)
    IN1V2,     // in L, the pending {u}-coded vertex is exactly v2
    IN0_NS,    // in L, clean, but must not end as the sole L-neighbor of a
               // non-exempt vertex (the v2 interface under (-,E))
    UND,       // not in L, not yet dominated
    SAFE,      // not in L, dominated, nothing required of the parent
    NEEDP,     // not in L, dominated, parent must join L (clash or (-,E) ban)
    NEEDPV2,   // as NEEDP, but the only conflict partner is v2 itself
    NSTATES
};

using Costs = std::array<int64_t, NSTATES>;

// Combine children interfaces at u; v2_child is u's direct child equal to v2
// (or -1). is_root toggles the exemptions that v1 enjoys as a pair partner.
inline Costs combine(const std::vector<Costs>& kids, bool is_root, int v2_child) {
    Costs out;
    out.fill(INF);

    // u in L: every non-UND interface is self-contained; UND children become
    // {u}-coded and at most one may exist
    {
        int64_t base = 1;
        bool ok = true;
        int64_t d_v2 = INF, d_other = INF;
        for (size_t j = 0; j < kids.size() && ok; ++j) {
            const Costs& c = kids[j];
            int64_t np = std::min({c[IN0], c[IN1], c[IN1V2], c[IN0_NS], c[SAFE], c[NEEDP],
                                   c[NEEDPV2]});
            if (np >= INF) {
                ok = false;
                break;
            }
            base += np;
            if (c[UND] < INF) {
                int64_t delta = c[UND] - np;
                if ((int)j == v2_child)
                    d_v2 = std::min(d_v2, delta);
                else
                    d_other = std::min(d_other, delta);
            }
        }
        if (ok) {
            out[IN0] = base;
            if (d_other < INF) out[IN1] = base + d_other;
            if (d_v2 < INF) out[IN1V2] = base + d_v2;
        }
    }

    // u not in L: non-L children must be SAFE; the sole-L-child interface
    // decides u's own state, two or more L-children make u's code unique
    {
        // slots: no L-child; sole IN0; sole IN1; sole IN1V2; sole IN0_NS; >= 2
        std::array<int64_t, 6> dp{0, INF, INF, INF, INF, INF};
        for (const Costs& c : kids) {
            std::array<int64_t, 6> nx;
            nx.fill(INF);
            int64_t lmin = std::min({c[IN0], c[IN1], c[IN1V2], c[IN0_NS]});
            for (int s = 0; s < 6; ++s) {
                if (dp[s] >= INF) continue;
                if (c[SAFE] < INF) nx[s] = std::min(nx[s], dp[s] + c[SAFE]);
                if (s == 0) {
                    if (c[IN0] < INF) nx[1] = std::min(nx[1], dp[0] + c[IN0]);
                    if (c[IN1] < INF) nx[2] = std::min(nx[2], dp[0] + c[IN1]);
                    if (c[IN1V2] < INF) nx[3] = std::min(nx[3], dp[0] + c[IN1V2]);
                    if (c[IN0_NS] < INF) nx[4] = std::min(nx[4], dp[0] + c[IN0_NS]);
                } else if (lmin < INF) {
                    nx[5] = std::min(nx[5], dp[s] + lmin);
                }
            }
            dp = nx;
        }
        out[UND] = dp[0];
        out[SAFE] = std::min(dp[5], dp[1]);
        // sole L-child with a pending partner: u's code equals the pending
        // vertex's code until u's parent joins L
        out[NEEDP] = dp[2];
        out[NEEDPV2] = dp[3];
        // sole L-child is the (-,E) interface: u would be {v2}-coded
        if (is_root)
            out[SAFE] = std::min(out[SAFE], dp[4]);  // v1 is exempt from the ban
        else
            out[NEEDP] = std::min(out[NEEDP], dp[4]);
    }
    return out;
}

// Apply the (-,Y) relaxations at v2 to its combined interface.
inline Costs remap_v2(const Costs& c, int y) {
    Costs out;
    out.fill(INF);
    switch (y) {
        case 0:  // A: neither domination nor location required at v2
            out[IN0] = c[IN0];
            out[IN1] = c[IN1];
            out[SAFE] = std::min({c[SAFE], c[UND], c[NEEDP], c[NEEDPV2]});
            break;
        case 1:  // B: domination required, location not
            out[IN0] = c[IN0];
            out[IN1] = c[IN1];
            out[SAFE] = std::min({c[SAFE], c[NEEDP], c[NEEDPV2]});
            out[NEEDP] = c[UND];
            break;
        case 2:  // C: fully constrained
            out = c;
            break;
        case 3:  // D: v2 in L
            out[IN0] = c[IN0];
            out[IN1] = c[IN1];
            break;
        case 4:  // E: v2 in L and no {v2}-coded vertex except possibly v1
            out[IN0_NS] = c[IN0];
            break;
    }
    return out;
}

// Bottom-up pass; v2 < 0 for the single-rooted variant.
inline Costs run_pass(const Graph& t, int root, int v2, int y) {
    int n = t.n;
    std::vector<int> parent(n, -2), order;
    order.reserve(n);
    parent[root] = -1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (int w : t.adj[u])
            if (parent[w] == -2) {
                parent[w] = u;
                stack.push_back(w);
            }
    }
    if ((int)order.size() != n) throw std::invalid_argument("tree is not connected");

    std::vector<std::vector<int>> kids(n);
    for (int u : order)
        if (parent[u] >= 0) kids[parent[u]].push_back(u);

    std::vector<Costs> dp(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        std::vector<Costs> kc;
        kc.reserve(kids[u].size());
        int v2_child = -1;
        for (size_t j = 0; j < kids[u].size(); ++j) {
            kc.push_back(dp[kids[u][j]]);
            if (kids[u][j] == v2) v2_child = (int)j;
        }
        dp[u] = combine(kc, u == root, v2_child);
        if (u == v2) dp[u] = remap_v2(dp[u], y);
    }
    return dp[root];
}

inline int finalize(const Costs& c, int x) {
    int64_t r = INF;
    switch (x) {
        case 0:
            r = std::min({c[IN0], c[IN1], c[IN1V2], c[UND], c[SAFE], c[NEEDP], c[NEEDPV2]});
            break;
        case 1: r = std::min({c[IN0], c[IN1], c[IN1V2], c[SAFE], c[NEEDP], c[NEEDPV2]}); break;
        case 2: r = std::min({c[IN0], c[IN1], c[IN1V2], c[SAFE], c[NEEDPV2]}); break;
        case 3: r = std::min({c[IN0], c[IN1], c[IN1V2]}); break;
        case 4: r = std::min(c[IN0], c[IN1V2]); break;
    }
    if (r >= INF) throw std::logic_error("tree type unexpectedly infeasible");
    return (int)r;
}

}  // namespace tree_detail

// The five minimum sizes opt_A..opt_E for (T, v).
inline std::array<int, 5> opt_rooted(const Graph& t, int root) {
    if (!t.is_tree()) throw std::invalid_argument("opt_rooted requires a tree");
    if (root < 0 || root >= t.n) throw std::invalid_argument("root out of range");
    auto costs = tree_detail::run_pass(t, root, -1, -1);
    std::array<int, 5> out;
    for (int x = 0; x < 5; ++x) out[x] = tree_detail::finalize(costs, x);
    return out;
}

// The 25 minimum sizes opt_{X,Y}, X-major (index 5x + y).
inline std::array<int, 25> opt_doubly(const Graph& t, int v1, int v2) {
    if (!t.is_tree()) throw std::invalid_argument("opt_doubly requires a tree");
    if (v1 < 0 || v1 >= t.n || v2 < 0 || v2 >= t.n || v1 == v2)
        throw std::invalid_argument("roots must be two distinct vertices");
    std::array<int, 25> out;
    for (int y = 0; y < 5; ++y) {
        auto costs = tree_detail::run_pass(t, v1, v2, y);
        for (int x = 0; x < 5; ++x) out[5 * x + y] = tree_detail::finalize(costs, x);
    }
    return out;
}

struct RootedClass {
    int type;  // 0..4 = A..E
    int k;
};

inline char type_name(int x) { return "ABCDE"[x]; }

// The unique threshold class: opt_{X'} = k for X' <= type, k+1 beyond.
inline RootedClass classify_rooted(const Graph& t, int root) {
    auto v = opt_rooted(t, root);
    int k = v[0];
    int type = 0;
    while (type + 1 < 5 && v[type + 1] == k) ++type;
    for (int x = 0; x < 5; ++x) {
        int expect = x <= type ? k : k + 1;
        if (v[x] != expect)
            throw std::logic_error("rooted opt vector is not of threshold shape");
    }
    return RootedClass{type, k};
}

struct DoublyClass {
    std::array<uint8_t, 25> g;  // offsets from opt_{A,A}, X-major
    int k;                      // opt_{A,A}

    // 25 base-3 digits, (A,A) first
    std::string signature() const {
        std::string s(25, '0');
        for (int i = 0; i < 25; ++i) s[i] = char('0' + g[i]);
        return s;
    }
};

inline DoublyClass classify_doubly(const Graph& t, int v1, int v2) {
    auto v = opt_doubly(t, v1, v2);
    DoublyClass out;
    out.k = v[0];
    for (int i = 0; i < 25; ++i) {
        int d = v[i] - out.k;
        if (d < 0 || d > 2) throw std::logic_error("doubly-rooted offset outside {0,1,2}");
        out.g[i] = (uint8_t)d;
    }
    // monotone componentwise with bounded steps
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            if (x + 1 < 5 && (v[5 * (x + 1) + y] < v[5 * x + y] ||
                              v[5 * (x + 1) + y] > v[5 * x + y] + 1))
                throw std::logic_error("doubly-rooted vector violates the step bound");
            if (y + 1 < 5 &&
                (v[5 * x + y + 1] < v[5 * x + y] || v[5 * x + y + 1] > v[5 * x + y] + 1))
                throw std::logic_error("doubly-rooted vector violates the step bound");
        }
    return out;
}

}  // namespace idsolve
