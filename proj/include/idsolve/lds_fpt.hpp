#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/parallel.hpp"
#include "idsolve/partition.hpp"
#include "idsolve/refinement_dp.hpp"

namespace idsolve {

// Minimum vertex cover by branching on a max-degree vertex (v in, or N(v) in).
namespace vc_detail {

struct Search {
    const Graph& g;
    Bitset removed;
    std::vector<int> chosen, best;
    bool found = false;

    explicit Search(const Graph& g_) : g(g_), removed(g_.n) {}

    void branch() {
        if (found && chosen.size() >= best.size()) return;
        int pick = -1, pick_deg = 0;
        for (int v = 0; v < g.n; ++v) {
            if (removed.test(v)) continue;
            int d = 0;
            for (int u : g.adj[v])
                if (!removed.test(u)) ++d;
            if (d > pick_deg) {
                pick_deg = d;
                pick = v;
            }
        }
        if (pick < 0) {
            if (!found || chosen.size() < best.size()) {
                best = chosen;
                std::sort(best.begin(), best.end());
                found = true;
            }
            return;
        }
        removed.set(pick);
        chosen.push_back(pick);
        branch();
        chosen.pop_back();
        if (pick_deg > 1) {
            std::vector<int> taken;
            for (int u : g.adj[pick])
                if (!removed.test(u)) {
                    removed.set(u);
                    chosen.push_back(u);
                    taken.push_back(u);
                }
            branch();
            for (int u : taken) {
                removed.reset(u);
                chosen.pop_back();
            }
        } else {
            // degree 1: taking the single neighbor instead can only tie
            int u = -1;
            for (int w : g.adj[pick])
                if (!removed.test(w)) u = w;
            removed.set(u);
            chosen.push_back(u);
            branch();
            chosen.pop_back();
            removed.reset(u);
        }
        removed.reset(pick);
    }
};

}  // namespace vc_detail

inline std::vector<int> exact_vertex_cover(const Graph& g) {
    vc_detail::Search s(g);
    s.branch();
    return s.best;
}

// Smallest modulator whose removal leaves disjoint cliques of mutual twins.
inline std::vector<int> exact_twin_cover(const Graph& g) {
    auto is_twin_clique_rest = [&](const Bitset& mod) {
        std::vector<int> comp(g.n, -1);
        std::vector<int> stack;
        int c = 0;
        for (int s = 0; s < g.n; ++s) {
            if (mod.test(s) || comp[s] >= 0) continue;
            comp[s] = c;
            stack.push_back(s);
            std::vector<int> members{s};
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v : g.adj[u])
                    if (!mod.test(v) && comp[v] < 0) {
                        comp[v] = c;
                        stack.push_back(v);
                        members.push_back(v);
                    }
            }
            for (size_t i = 0; i < members.size(); ++i)
                for (size_t j = i + 1; j < members.size(); ++j) {
                    int u = members[i], v = members[j];
                    if (!g.has_edge(u, v)) return false;
                    // true twins in G
                    std::vector<int> nu, nv;
                    for (int w : g.adj[u])
                        if (w != v) nu.push_back(w);
                    for (int w : g.adj[v])
                        if (w != u) nv.push_back(w);
                    if (nu != nv) return false;
                }
            ++c;
        }
        return true;
    };
    for (int size = 0; size <= g.n; ++size) {
        auto hit = detail::first_combination(g.n, size, [&](const std::vector<int>& idx) {
            return is_twin_clique_rest(Bitset::of(g.n, idx));
        });
        if (hit) return *hit;
    }
    return {};
}

// Distance to clique: vertex cover of the complement.
inline std::vector<int> exact_clique_modulator(const Graph& g) {
    std::vector<std::pair<int, int>> co;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (!g.has_edge(u, v)) co.emplace_back(u, v);
    return exact_vertex_cover(Graph::from_edges(g.n, co));
}

enum class LdsMode { VertexCover, TwinCover, DistClique };

struct LdsOptions {
    int threads = 1;
    bool optimize = false;  // false: stop at the first witness of size <= k
};

namespace lds_detail {

struct GuessOutcome {
    bool found = false;
    std::vector<int> witness;  // on the reduced graph
};

// One X_L guess of the structured pipeline on the twin-reduced graph.
inline GuessOutcome run_guess(const Graph& g, const std::vector<int>& cover,
                              const Bitset& y_seed, uint32_t mask, int lambda_cap,
                              LdsMode mode) {
    GuessOutcome out;
    const int n = g.n;
    Bitset in_cover(n);
    for (int v : cover) in_cover.set(v);
    Bitset xl(n);
    for (size_t i = 0; i < cover.size(); ++i)
        if ((mask >> i) & 1) xl.set(cover[i]);
    // Y_L ∩ U must be guessed inside X_L
    for (int v = y_seed.next(0); v >= 0; v = y_seed.next(v + 1))
        if (in_cover.test(v) && !xl.test(v)) return out;

    Bitset y = y_seed;
    y |= xl;
    // R-vertices no choice can ever dominate are forced into the solution
    if (mode != LdsMode::DistClique) {
        Bitset dominated(n);
        for (int v = y.next(0); v >= 0; v = y.next(v + 1))
            for (int u : g.adj[v]) dominated.set(u);
        for (int v = 0; v < n; ++v)
            if (!in_cover.test(v) && !y.test(v) && !dominated.test(v)) y.set(v);
    }

    Bitset b_set = in_cover;
    b_set.subtract(xl);
    Bitset y_r = y;
    y_r.subtract(in_cover);
    // the partial solution is spent up front; the engine only buys extra picks,
    // whose locating effect on the rest rides entirely on Q and the edges to B
    int lambda = lambda_cap - xl.count() - y_r.count();
    if (lambda < 0) return out;

    // zero-pick candidate (engine handles the at-least-one-pick branch in
    // clique mode, where R-domination hinges on some pick existing)
    if (mode == LdsMode::DistClique) {
        Bitset zero = y | xl;
        if ((int)zero.count() <= lambda_cap && is_locating_dominating(g, zero)) {
            out.found = true;
            out.witness = zero.to_vector();
            return out;
        }
    }

    std::vector<int> rb;
    for (int v = 0; v < n; ++v)
        if (!xl.test(v) && !y_r.test(v)) rb.push_back(v);
    std::vector<int> newid(n, -1);
    for (size_t i = 0; i < rb.size(); ++i) newid[rb[i]] = (int)i;

    RefinementInstance inst;
    inst.n = (int)rb.size();
    inst.adj.assign(inst.n, {});
    for (int v : rb)
        for (int u : g.adj[v])
            if (newid[u] >= 0 && in_cover.test(u) != in_cover.test(v))
                inst.adj[newid[v]].push_back(newid[u]);
    for (auto& nb : inst.adj) std::sort(nb.begin(), nb.end());
    inst.r_side = Bitset(inst.n);
    inst.b_side = Bitset(inst.n);
    for (int v : rb)
        (in_cover.test(v) ? inst.b_side : inst.r_side).set(newid[v]);
    inst.clique_r = (mode == LdsMode::DistClique);

    // Q = partition induced by the partial solution, on the remaining graph
    Partition qfull = induced_partition(rb, y, g);
    std::vector<std::vector<int>> qblocks;
    for (auto& blk : qfull.blocks) {
        std::vector<int> nb;
        for (int v : blk) nb.push_back(newid[v]);
        qblocks.push_back(std::move(nb));
    }
    inst.q = Partition::of_blocks(std::move(qblocks));

    inst.c0 = Bitset(inst.n);
    // B-vertices not dominated by the partial solution
    inst.t_demand = Bitset(inst.n);
    for (int v = b_set.next(0); v >= 0; v = b_set.next(v + 1)) {
        bool dom = false;
        for (int u : g.adj[v]) dom |= y.test(u);
        if (!dom && !y.test(v)) inst.t_demand.set(newid[v]);
    }
    inst.budget = lambda;

    auto res = solve_refinement(inst);
    if (!res) return out;
    Bitset total = xl | y_r;
    for (int v : res->witness) total.set(rb[v]);
    if ((int)total.count() > lambda_cap) return out;
    out.found = true;
    out.witness = total.to_vector();
    return out;
}

inline std::optional<Solution> solve_structured(const Graph& g0, int k, LdsMode mode,
                                                const LdsOptions& opts) {
    if (g0.n == 0) return Solution{};
    auto red = apply_twin_rule(g0, k);
    const Graph& g = red.graph;
    int kr = red.k;
    if (kr < 0) return std::nullopt;

    std::vector<int> cover;
    switch (mode) {
        case LdsMode::VertexCover: cover = exact_vertex_cover(g); break;
        case LdsMode::TwinCover: cover = exact_twin_cover(g); break;
        case LdsMode::DistClique: cover = exact_clique_modulator(g); break;
    }
    if (cover.size() > 25)
        throw Refused("structured modulator too large for the subset loop");

    // one vertex of every remaining twin pair joins the partial solution
    Bitset y_seed(g.n);
    for (const auto& blk : twin_classes(g).blocks)
        if (blk.size() == 2) y_seed.set(blk[0]);

    const uint32_t total = uint32_t(1) << cover.size();
    // masks in increasing popcount, numeric order within a batch
    std::vector<std::vector<uint32_t>> batches(cover.size() + 1);
    for (uint32_t m = 0; m < total; ++m)
        batches[__builtin_popcount(m)].push_back(m);

    std::optional<std::vector<int>> best;  // witness on reduced graph
    for (const auto& batch : batches) {
        std::vector<GuessOutcome> results(batch.size());
        parallel_for((long long)batch.size(), opts.threads, [&](long long i) {
            int cap = kr;
            if (opts.optimize && best) cap = std::min(cap, (int)best->size() - 1);
            results[i] = run_guess(g, cover, y_seed, batch[i], cap, mode);
        });
        for (const auto& r : results) {
            if (!r.found) continue;
            if (!best || r.witness.size() < best->size()) best = r.witness;
        }
        if (best && !opts.optimize) break;  // decision mode: first feasible batch wins
    }
    if (!best) return std::nullopt;

    // lift through the twin-rule trace
    std::vector<int> lifted;
    for (int v : *best) lifted.push_back(red.kept[v]);
    lifted.insert(lifted.end(), red.removed.begin(), red.removed.end());
    std::sort(lifted.begin(), lifted.end());
    Solution sol{lifted};
    if (!is_locating_dominating(g0, sol.vertices))
        throw std::logic_error("lds witness failed verification");
    if (sol.size() > k) return std::nullopt;
    return sol;
}

}  // namespace lds_detail

inline std::optional<Solution> solve_lds_vc(const Graph& g, int k, const LdsOptions& opts = {}) {
    return lds_detail::solve_structured(g, k, LdsMode::VertexCover, opts);
}
inline std::optional<Solution> solve_lds_twincover(const Graph& g, int k,
                                                   const LdsOptions& opts = {}) {
    return lds_detail::solve_structured(g, k, LdsMode::TwinCover, opts);
}
inline std::optional<Solution> solve_lds_distclique(const Graph& g, int k,
                                                    const LdsOptions& opts = {}) {
    return lds_detail::solve_structured(g, k, LdsMode::DistClique, opts);
}

// Exact optimum via the structured solver (optimize mode, budget n).
inline Solution lds_optimum(const Graph& g, LdsMode mode, const LdsOptions& opts_in = {}) {
    LdsOptions opts = opts_in;
    opts.optimize = true;
    auto sol = lds_detail::solve_structured(g, g.n, mode, opts);
    if (!sol) throw std::logic_error("a locating-dominating set always exists");
    return *sol;
}

struct NdKernel {
    Graph graph;
    int k;
    std::vector<int> removed;  // original ids deleted by the twin rule
    std::vector<int> kept;     // kernel id -> original id
};

// Exhaustive twin rule: at most 2 vertices per neighbourhood class remain.
inline NdKernel nd_kernel(const Graph& g, int k) {
    auto red = apply_twin_rule(g, k);
    return NdKernel{red.graph, red.k, red.removed, red.kept};
}

inline std::optional<Solution> solve_lds_nd(const Graph& g, int k, int cap = 20) {
    NdKernel ker = nd_kernel(g, k);
    if (ker.k < 0) return std::nullopt;
    if (ker.graph.n > cap)
        throw Refused("nd kernel larger than the brute-force cap");
    Solution on_kernel = brute_force_lds(ker.graph, cap);
    if (on_kernel.size() > ker.k) return std::nullopt;
    std::vector<int> lifted;
    for (int v : on_kernel.vertices) lifted.push_back(ker.kept[v]);
    lifted.insert(lifted.end(), ker.removed.begin(), ker.removed.end());
    std::sort(lifted.begin(), lifted.end());
    Solution sol{lifted};
    if (!is_locating_dominating(g, sol.vertices))
        throw std::logic_error("nd witness failed verification");
    return sol;
}

}  // namespace idsolve
