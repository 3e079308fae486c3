#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "idsolve/bitset.hpp"
#include "idsolve/graph.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/partition.hpp"

namespace idsolve {

// Annotated red-blue partition refinement: find a minimum C with
// C0 ⊆ C ⊆ R, C dominating T_L, and Q ⊓ P(C) the identity partition.
// Edges must cross between R and B. In clique_r mode R behaves as a clique:
// every chosen vertex dominates all of R and is a neighbor of every other
// R-vertex for code purposes (the split-graph variant).
struct RefinementInstance {
    int n = 0;
    std::vector<std::vector<int>> adj;  // cross edges only
    Bitset r_side, b_side;
    Partition q;
    Bitset c0;
    Bitset t_demand;
    int budget = 0;
    bool clique_r = false;

    void validate() const {
        if ((int)adj.size() != n) throw std::invalid_argument("adjacency size mismatch");
        for (int v = 0; v < n; ++v) {
            if (r_side.test(v) == b_side.test(v))
                throw std::invalid_argument("every vertex must be in exactly one side");
            for (int u : adj[v])
                if (r_side.test(u) == r_side.test(v))
                    throw std::invalid_argument("edge does not cross R/B");
        }
        if (!c0.is_subset_of(r_side)) throw std::invalid_argument("c0 must be within R");
        if (!t_demand.is_subset_of(b_side)) throw std::invalid_argument("t_demand must be within B");
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        if (q.ground != all) throw std::invalid_argument("q must partition all vertices");
    }

    Bitset nbr(const Bitset& s) const {
        Bitset out(n);
        for (int v = s.next(0); v >= 0; v = s.next(v + 1))
            for (int u : adj[v]) out.set(u);
        return out;
    }
};

struct RefinementResult {
    int size = 0;
    std::vector<int> witness;  // sorted, includes c0
};

struct RefinementStats {
    long long guesses = 0;
    long long states = 0;               // inserted DP entries over all guesses
    long long max_partition_pairs = 0;  // distinct (B-partition, S) keys in one run
};

// One surviving guess after pre-processing: monochromatic parts, exact
// coverage target, possibly grown forced set.
struct PreppedInstance {
    Bitset c0;
    Bitset undominated;  // guessed undominated vertices (disjoint from t_demand)
    Bitset target;       // B minus undominated; C must satisfy N(C) ∩ B == target
    std::vector<std::vector<int>> r_parts;  // monochromatic R-side parts (candidates + pruned)
    std::vector<std::vector<int>> b_parts;  // monochromatic B-side parts
    // DP payload
    std::vector<int> order;        // candidates r_1..r_l, part-consecutive
    std::vector<int> cand_part;    // dp part index per candidate
    std::vector<char> part_rho;    // per dp part: 0 = at most one unpicked, 1 = exactly one, 2 = none
    int universe = 0;              // |B| + pseudo elements
    std::vector<int> elem_of_b;    // b vertex -> universe element
    std::vector<int> init_block;   // initial block id per universe element
    bool require_pick = false;     // split mode with empty c0: C = ∅ handled by caller
};

namespace refinement_detail {

constexpr int kMaxUniverse = 25;
constexpr long long kGuessCap = 1ll << 20;

struct WorkPart {
    std::vector<int> members;
    bool rho = false;
};

// Q ⊓ P(c0) under engine semantics: c0 vertices become singletons, unchosen
// R-vertices of one Q-part stay together (their code w.r.t. a subset of R is
// uniform in both modes), B-vertices group by N(.) ∩ c0.
inline std::vector<WorkPart> engine_parts(const RefinementInstance& inst, const Bitset& c0) {
    std::vector<WorkPart> parts;
    for (const auto& blk : inst.q.blocks) {
        std::vector<int> rrest;
        std::map<std::vector<int>, std::vector<int>> bgroups;
        for (int v : blk) {
            if (c0.test(v)) {
                parts.push_back({{v}, false});
            } else if (inst.r_side.test(v)) {
                rrest.push_back(v);
            } else {
                std::vector<int> code;
                for (int u : inst.adj[v])
                    if (c0.test(u)) code.push_back(u);
                bgroups[code].push_back(v);
            }
        }
        // A non-chosen R-vertex has code ∅ (bipartite) or all of c0 (clique_r);
        // it shares a part with the B-group of the matching code.
        std::vector<int> rcode;
        if (inst.clique_r) rcode = c0.to_vector();
        bool merged = false;
        for (auto& [code, vs] : bgroups) {
            if (!rrest.empty() && code == rcode) {
                std::vector<int> m = rrest;
                m.insert(m.end(), vs.begin(), vs.end());
                std::sort(m.begin(), m.end());
                parts.push_back({m, false});
                merged = true;
            } else {
                parts.push_back({vs, false});
            }
        }
        if (!rrest.empty() && !merged) parts.push_back({rrest, false});
    }
    std::sort(parts.begin(), parts.end(),
              [](const WorkPart& a, const WorkPart& b) { return a.members[0] < b.members[0]; });
    return parts;
}

}  // namespace refinement_detail

// Applies the pre-processing bullets for one guess. Returns nullopt when the
// guess is discarded. rho_bits selects, per mixed part (clique_r mode only),
// whether its R-side is forced into c0 (0) or exactly one vertex stays out (1).
inline std::optional<PreppedInstance> preprocess_guess(const RefinementInstance& inst,
                                                       const Bitset& undominated,
                                                       uint32_t rho_bits = 0) {
    using namespace refinement_detail;
    Bitset c0 = inst.c0;
    Bitset target = inst.b_side;
    target.subtract(undominated);

    auto parts = engine_parts(inst, c0);
    if (inst.clique_r) {
        int mixed_seen = 0;
        for (auto& p : parts) {
            bool has_r = false, has_b = false;
            for (int v : p.members) (inst.r_side.test(v) ? has_r : has_b) = true;
            if (has_r && has_b && !c0.test(p.members[0])) {
                bool rho = (rho_bits >> mixed_seen) & 1;
                ++mixed_seen;
                if (rho) {
                    p.rho = true;
                } else {
                    for (int v : p.members)
                        if (inst.r_side.test(v)) c0.set(v);
                }
            }
        }
    }

    // Fixpoint over the sanity/modification bullets.
    auto adj_und = [&](int r) {
        for (int u : inst.adj[r])
            if (undominated.test(u)) return true;
        return false;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        // chosen vertices may not dominate guessed-undominated vertices
        for (int v = c0.next(0); v >= 0; v = c0.next(v + 1))
            if (adj_und(v)) return std::nullopt;
        // rebuild parts against the current c0, keeping rho marks by R-members
        Bitset rho_r(inst.n);
        for (auto& p : parts)
            if (p.rho)
                for (int v : p.members)
                    if (inst.r_side.test(v) && !c0.test(v)) rho_r.set(v);
        parts = engine_parts(inst, c0);
        for (auto& p : parts)
            for (int v : p.members)
                if (rho_r.test(v)) p.rho = true;

        for (auto& p : parts) {
            if (c0.test(p.members[0]) && p.members.size() == 1) continue;
            std::vector<int> rp, bp;
            for (int v : p.members)
                (inst.r_side.test(v) ? rp : bp).push_back(v);
            if (!rp.empty()) {
                std::vector<int> touching;
                for (int r : rp)
                    if (adj_und(r)) touching.push_back(r);
                if (touching.size() >= 2) return std::nullopt;
                if (touching.size() == 1 && rp.size() > 1) {
                    for (int r : rp)
                        if (r != touching[0]) c0.set(r);
                    changed = true;
                }
            }
            if (!inst.clique_r && !rp.empty() && !bp.empty()) {
                int und_here = 0;
                for (int b : bp)
                    if (undominated.test(b)) ++und_here;
                if (und_here >= 2) return std::nullopt;
                if (und_here == 1) {
                    for (int r : rp) c0.set(r);  // undominated b and an unchosen r would share a part
                    changed = true;
                }
                // und_here == 0: domination alone separates the sides; split below
            }
        }
        if (changed) continue;
    }

    PreppedInstance prep;
    prep.c0 = c0;
    prep.undominated = undominated;
    prep.target = target;

    // Final monochromatic parts. In bipartite mode leftover mixed parts have no
    // undominated B-vertex and split cleanly; in clique_r mode rho parts stay
    // linked through a pseudo element adjacent to every candidate.
    std::vector<int> bvec = inst.b_side.to_vector();
    prep.elem_of_b.assign(inst.n, -1);
    for (size_t i = 0; i < bvec.size(); ++i) prep.elem_of_b[bvec[i]] = (int)i;
    prep.universe = (int)bvec.size();
    prep.init_block.assign(prep.universe, -1);

    int next_block = 0;
    for (auto& p : parts) {
        if (p.members.size() == 1 && c0.test(p.members[0])) continue;
        std::vector<int> rp, bp;
        for (int v : p.members)
            (inst.r_side.test(v) ? rp : bp).push_back(v);
        if (!rp.empty() && !bp.empty() && !inst.clique_r)
            p.rho = false;  // bipartite leftover mixed part: plain split
        if (!bp.empty()) {
            prep.b_parts.push_back(bp);
            int blk = next_block++;
            for (int b : bp) prep.init_block[prep.elem_of_b[b]] = blk;
            if (p.rho && !rp.empty()) {
                prep.init_block.push_back(blk);  // pseudo element for the unpicked R-vertex
                ++prep.universe;
            }
        }
        if (rp.empty()) {
            if (p.rho) return std::nullopt;  // exactly-one-unpicked with no R-side left
            continue;
        }
        prep.r_parts.push_back(rp);
        std::vector<int> cands;
        int pruned = 0;
        for (int r : rp) {
            if (adj_und(r))
                ++pruned;
            else
                cands.push_back(r);
        }
        if (pruned >= 2) return std::nullopt;
        char rule = 0;  // at most one unpicked
        if (p.rho) {
            int need = 1 - pruned;
            if (need == 1 && cands.empty()) return std::nullopt;
            rule = (need == 1) ? 1 : 2;  // exactly one / exactly zero unpicked candidates
        } else if (pruned == 1 && !cands.empty()) {
            rule = 2;  // the pruned vertex uses up the part's unpicked slot
        }
        if (!cands.empty()) {
            int part_idx = (int)prep.part_rho.size();
            prep.part_rho.push_back(rule);
            for (int r : cands) {
                prep.order.push_back(r);
                prep.cand_part.push_back(part_idx);
            }
        }
    }
    // canonicalize initial block ids by first occurrence over the universe
    {
        std::vector<int> remap(next_block, -1);
        int next = 0;
        for (int& b : prep.init_block) {
            if (remap[b] < 0) remap[b] = next++;
            b = remap[b];
        }
    }

    prep.require_pick = inst.clique_r && inst.c0.none();
    if (prep.universe > kMaxUniverse)
        throw Refused("refinement instance exceeds engine universe bound");
    return prep;
}

namespace refinement_detail {

struct StateKey {
    uint64_t lo = 0, hi = 0;  // 5-bit block ids, elements 0..11 in lo, 12..24 in hi
    uint32_t covered = 0;
    uint8_t pend = 0;
    uint8_t picked = 1;  // tracked only under a must-pick constraint
    bool operator==(const StateKey& o) const {
        return lo == o.lo && hi == o.hi && covered == o.covered && pend == o.pend &&
               picked == o.picked;
    }
};

struct KeyHash {
    size_t operator()(const StateKey& k) const {
        uint64_t h = k.lo * 0x9e3779b97f4a7c15ull;
        h ^= k.hi + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= (uint64_t(k.covered) << 9 | uint64_t(k.pend) << 1 | k.picked) *
             0xc2b2ae3d27d4eb4full;
        return (size_t)(h ^ (h >> 29));
    }
};

inline int key_get(const StateKey& k, int e) {
    return e < 12 ? (int)((k.lo >> (5 * e)) & 31) : (int)((k.hi >> (5 * (e - 12))) & 31);
}
inline void key_set(StateKey& k, int e, int v) {
    if (e < 12) {
        k.lo = (k.lo & ~(uint64_t(31) << (5 * e))) | (uint64_t(v) << (5 * e));
    } else {
        k.hi = (k.hi & ~(uint64_t(31) << (5 * (e - 12)))) | (uint64_t(v) << (5 * (e - 12)));
    }
}

// Split every block by the mask, renumbering by first occurrence.
inline void refine_key(StateKey& k, uint32_t mask, int m) {
    int8_t newid[64];
    std::fill(newid, newid + 2 * m + 2, -1);
    int next = 0;
    for (int e = 0; e < m; ++e) {
        int c = key_get(k, e) * 2 + ((mask >> e) & 1);
        if (newid[c] < 0) newid[c] = (int8_t)next++;
        key_set(k, e, newid[c]);
    }
}

inline bool key_identity(const StateKey& k, int m) {
    for (int e = 0; e < m; ++e)
        if (key_get(k, e) != e) return false;
    return true;
}

struct Entry {
    StateKey key;
    int32_t value;
    int32_t parent;
    int8_t took;  // 0 skip, 1 take, 2 boundary
};

using Layer = std::vector<Entry>;

}  // namespace refinement_detail

#ifndef NDEBUG
// Semantic audit of every reachable table entry on small instances: the
// reconstructed pick set must reproduce the stored partition, coverage, and
// per-part unpicked bookkeeping (the valid-tuple properties in operational
// form), and the skip/take edges must satisfy the table recurrence.
inline void validate_layers(const RefinementInstance& inst, const PreppedInstance& prep,
                            const std::vector<refinement_detail::Layer>& layers,
                            const std::vector<int>& step_cand, const std::vector<int>& tpos,
                            int m, const std::vector<uint32_t>& refine_mask,
                            const std::vector<uint32_t>& cover_mask) {
    using namespace refinement_detail;
    long long total = 0;
    for (auto& layer : layers) total += (long long)layer.size();
    const int l = (int)prep.order.size();
    if (l > 40 || m > 10 || total > 20000) return;

    // universe element codes under a concrete pick set
    std::vector<int> bvert(m, -1);
    for (int v = 0; v < inst.n; ++v)
        if (prep.elem_of_b[v] >= 0) bvert[prep.elem_of_b[v]] = v;

    std::vector<std::pair<int, int>> part_span(prep.part_rho.size(), {l, -1});
    for (int i = 0; i < l; ++i) {
        auto& sp = part_span[prep.cand_part[i]];
        sp.first = std::min(sp.first, i);
        sp.second = std::max(sp.second, i);
    }

    for (int li = 0; li < (int)layers.size(); ++li) {
        int last_cand = -1;
        for (int s = 1; s <= li; ++s)
            if (step_cand[s] >= 0) last_cand = step_cand[s];
        for (int j = 0; j < (int)layers[li].size(); ++j) {
            // reconstruct the picks along the stored parents
            Bitset c = prep.c0;
            {
                int a = li, b = j;
                while (a > 0) {
                    const Entry& e = layers[a][b];
                    if (e.took == 1) c.set(prep.order[step_cand[a]]);
                    b = e.parent;
                    --a;
                }
            }
            const Entry& e = layers[li][j];
            if (e.value != (int)c.count()) throw std::logic_error("dp value out of sync");

            uint32_t cov = 0;
            for (int v = c.next(0); v >= 0; v = c.next(v + 1))
                for (int u : inst.adj[v])
                    if (tpos[u] >= 0) cov |= uint32_t(1) << tpos[u];
            if (cov != e.key.covered) throw std::logic_error("dp coverage out of sync");

            // partition: same block iff same initial part and same code
            std::vector<std::vector<int>> codes(m);
            for (int el = 0; el < m; ++el) {
                if (bvert[el] >= 0) {
                    for (int u : inst.adj[bvert[el]])
                        if (c.test(u)) codes[el].push_back(u);
                } else {
                    codes[el] = c.to_vector();  // pseudo element: adjacent to every pick
                }
            }
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b) {
                    bool together = key_get(e.key, a) == key_get(e.key, b);
                    bool expect =
                        prep.init_block[a] == prep.init_block[b] && codes[a] == codes[b];
                    if (together != expect)
                        throw std::logic_error("dp partition out of sync");
                }

            // per-part unpicked bookkeeping (valid-tuple properties)
            for (size_t p = 0; p < prep.part_rho.size(); ++p) {
                auto [lo, hi] = part_span[p];
                if (hi < 0) continue;
                int unpicked = 0;
                for (int i = lo; i <= std::min(hi, last_cand); ++i)
                    if (!c.test(prep.order[i])) ++unpicked;
                bool closed = hi < last_cand || (hi <= last_cand && step_cand[li] == -1);
                if (closed) {
                    char rho = prep.part_rho[p];
                    bool ok = rho == 0 ? unpicked <= 1 : rho == 1 ? unpicked == 1 : unpicked == 0;
                    if (!ok) throw std::logic_error("closed part violates its unpicked rule");
                } else if (last_cand >= lo && last_cand <= hi) {
                    if (unpicked != e.key.pend)
                        throw std::logic_error("pending counter out of sync");
                }
            }
        }

        // recurrence edges into the next candidate layer
        if (li + 1 < (int)layers.size() && step_cand[li + 1] >= 0) {
            int i = step_cand[li + 1];
            std::unordered_map<StateKey, int, KeyHash> index;
            for (int j = 0; j < (int)layers[li + 1].size(); ++j)
                index.emplace(layers[li + 1][j].key, j);
            char rho = prep.part_rho[prep.cand_part[i]];
            int max_pend = (rho == 2) ? 0 : 1;
            for (const Entry& e : layers[li]) {
                if (e.key.pend + 1 <= max_pend) {
                    StateKey k = e.key;
                    k.pend = (uint8_t)(e.key.pend + 1);
                    auto it = index.find(k);
                    if (it == index.end() || layers[li + 1][it->second].value > e.value)
                        throw std::logic_error("skip edge violates the recurrence");
                }
                if (e.value + 1 <= inst.budget) {
                    StateKey k = e.key;
                    refine_key(k, refine_mask[i], m);
                    k.covered |= cover_mask[i];
                    k.picked = 1;
                    auto it = index.find(k);
                    if (it == index.end() || layers[li + 1][it->second].value > e.value + 1)
                        throw std::logic_error("take edge violates the recurrence");
                }
            }
        }
    }
}
#endif

// DP over one preprocessed guess (Eq.-style skip/take transitions, forward).
inline std::optional<RefinementResult> solve_prepped(const RefinementInstance& inst,
                                                     const PreppedInstance& prep,
                                                     RefinementStats* stats = nullptr) {
    using namespace refinement_detail;
    const int m = prep.universe;
    const int l = (int)prep.order.size();

    // candidate masks
    std::vector<int> tpos(inst.n, -1);
    auto tvec = prep.target.to_vector();
    if ((int)tvec.size() > 32) throw Refused("coverage target exceeds engine bound");
    for (size_t i = 0; i < tvec.size(); ++i) tpos[tvec[i]] = (int)i;
    const uint32_t t_full = tvec.empty() ? 0 : (uint32_t)((uint64_t(1) << tvec.size()) - 1);

    uint32_t pseudo_mask = 0;
    int nb = 0;
    for (int v = 0; v < inst.n; ++v)
        if (prep.elem_of_b[v] >= 0) nb = std::max(nb, prep.elem_of_b[v] + 1);
    for (int e = nb; e < m; ++e) pseudo_mask |= uint32_t(1) << e;

    std::vector<uint32_t> cover_mask(l, 0), refine_mask(l, 0);
    for (int i = 0; i < l; ++i) {
        for (int u : inst.adj[prep.order[i]]) {
            if (prep.undominated.test(u)) throw std::logic_error("pruned candidate in order");
            cover_mask[i] |= uint32_t(1) << tpos[u];
            refine_mask[i] |= uint32_t(1) << prep.elem_of_b[u];
        }
        if (inst.clique_r) refine_mask[i] |= pseudo_mask;
    }

    StateKey init;
    init.picked = (!prep.require_pick || prep.c0.any()) ? 1 : 0;
    for (int e = 0; e < m; ++e) key_set(init, e, prep.init_block[e]);
    uint32_t covered0 = 0;
    for (int v = prep.c0.next(0); v >= 0; v = prep.c0.next(v + 1))
        for (int u : inst.adj[v]) {
            if (tpos[u] < 0) return std::nullopt;  // forced vertex dominates outside target
            covered0 |= uint32_t(1) << tpos[u];
        }
    init.covered = covered0;

    std::vector<Layer> layers;
    layers.push_back({Entry{init, prep.c0.count(), -1, 2}});

    auto insert_into = [&](Layer& layer, std::unordered_map<StateKey, int, KeyHash>& index,
                           const Entry& e) {
        auto [it, fresh] = index.try_emplace(e.key, (int)layer.size());
        if (fresh) {
            layer.push_back(e);
            if (stats) ++stats->states;
        } else if (e.value < layer[it->second].value) {
            layer[it->second] = e;
        }
    };

    for (int i = 0; i < l; ++i) {
        if (i > 0 && prep.cand_part[i] != prep.cand_part[i - 1]) {
            // close previous part: enforce its unpicked rule, reset the counter
            Layer closed;
            std::unordered_map<StateKey, int, KeyHash> index;
            char rho = prep.part_rho[prep.cand_part[i - 1]];
            const Layer& prev = layers.back();
            for (int j = 0; j < (int)prev.size(); ++j) {
                const Entry& e = prev[j];
                if (rho == 1 && e.key.pend != 1) continue;
                if (rho == 2 && e.key.pend != 0) continue;
                Entry ne{e.key, e.value, j, 2};
                ne.key.pend = 0;
                insert_into(closed, index, ne);
            }
            layers.push_back(std::move(closed));
            if (layers.back().empty()) return std::nullopt;
        }
        Layer next;
        std::unordered_map<StateKey, int, KeyHash> index;
        const Layer& prev = layers.back();
        char rho = prep.part_rho[prep.cand_part[i]];
        int max_pend = (rho == 2) ? 0 : 1;
        for (int j = 0; j < (int)prev.size(); ++j) {  // skips first: ties prefer skip
            const Entry& e = prev[j];
            if (e.key.pend + 1 > max_pend) continue;
            Entry ne{e.key, e.value, j, 0};
            ne.key.pend = (uint8_t)(e.key.pend + 1);
            insert_into(next, index, ne);
        }
        for (int j = 0; j < (int)prev.size(); ++j) {
            const Entry& e = prev[j];
            if (e.value + 1 > inst.budget) continue;
            Entry ne{e.key, e.value + 1, j, 1};
            refine_key(ne.key, refine_mask[i], m);
            ne.key.covered |= cover_mask[i];
            ne.key.picked = 1;
            insert_into(next, index, ne);
        }
        layers.push_back(std::move(next));
        if (layers.back().empty()) return std::nullopt;
    }
    if (l > 0) {
        // close the last part
        Layer closed;
        std::unordered_map<StateKey, int, KeyHash> index;
        char rho = prep.part_rho[prep.cand_part[l - 1]];
        const Layer& prev = layers.back();
        for (int j = 0; j < (int)prev.size(); ++j) {
            const Entry& e = prev[j];
            if (rho == 1 && e.key.pend != 1) continue;
            if (rho == 2 && e.key.pend != 0) continue;
            Entry ne{e.key, e.value, j, 2};
            ne.key.pend = 0;
            insert_into(closed, index, ne);
        }
        layers.push_back(std::move(closed));
    }

    if (stats) {
        long long pairs = 0;
        for (auto& layer : layers) pairs += (long long)layer.size();
        stats->max_partition_pairs = std::max(stats->max_partition_pairs, pairs);
    }

    // per layer: candidate index, or -1 for boundary steps
    std::vector<int> step_cand;
    step_cand.push_back(-1);
    for (int i = 0; i < l; ++i) {
        if (i > 0 && prep.cand_part[i] != prep.cand_part[i - 1]) step_cand.push_back(-1);
        step_cand.push_back(i);
    }
    if (l > 0) step_cand.push_back(-1);

#ifndef NDEBUG
    validate_layers(inst, prep, layers, step_cand, tpos, m, refine_mask, cover_mask);
#endif

    // harvest
    const Layer& last = layers.back();
    int best = -1;
    for (int j = 0; j < (int)last.size(); ++j) {
        const Entry& e = last[j];
        if (e.key.covered != t_full) continue;
        if (!key_identity(e.key, m)) continue;
        if (prep.require_pick && !e.key.picked) continue;
        if (e.value > inst.budget) continue;
        if (best < 0 || e.value < last[best].value) best = j;
    }
    if (best < 0) return std::nullopt;

    // witness
    Bitset c = prep.c0;
    {
        int li = (int)layers.size() - 1, j = best;
        while (li > 0) {
            const Entry& e = layers[li][j];
            if (e.took == 1) c.set(prep.order[step_cand[li]]);
            j = e.parent;
            --li;
        }
    }
    RefinementResult res;
    res.witness = c.to_vector();
    res.size = (int)res.witness.size();
    return res;
}

// Spec-level DP state and a single transition, exposed for direct inspection.
struct DPState {
    int index = 0;
    Partition partition;
    Bitset covered;
};

inline DPState dp_step(const DPState& s, bool take, int r, const RefinementInstance& inst) {
    DPState out = s;
    out.index = s.index + 1;
    if (take) {
        Graph g(inst.n);
        g.adj = inst.adj;
        out.partition = meet(s.partition, induced_partition(s.partition.ground,
                                                            Bitset::of(inst.n, {r}), g));
        Bitset cov = s.covered;
        for (int u : inst.adj[r]) cov.set(u);
        out.covered = cov;
    }
    return out;
}

// Feasibility of a concrete C against the original (unpreprocessed) instance.
inline bool refinement_feasible(const RefinementInstance& inst, const Bitset& c) {
    if (!inst.c0.is_subset_of(c) || !c.is_subset_of(inst.r_side)) return false;
    Bitset nc = inst.nbr(c);
    Bitset td = inst.t_demand;
    if (!td.is_subset_of(nc)) return false;
    // engine-semantics induced partition
    std::map<std::vector<int>, std::vector<int>> groups;
    std::vector<std::vector<int>> blocks;
    std::vector<int> full_code = c.to_vector();
    for (int v = 0; v < inst.n; ++v) {
        if (c.test(v)) {
            blocks.push_back({v});
            continue;
        }
        std::vector<int> code;
        if (inst.r_side.test(v)) {
            if (inst.clique_r) code = full_code;
        } else {
            for (int u : inst.adj[v])
                if (c.test(u)) code.push_back(u);
        }
        groups[code].push_back(v);
    }
    for (auto& [k, vs] : groups) blocks.push_back(vs);
    Partition pc = Partition::of_blocks(std::move(blocks));
    return meet(inst.q, pc).is_identity();
}

// Lazily enumerates guesses (undominated-set choices, plus rho branches in
// clique_r mode) and hands each surviving preprocessed instance to fn.
// Refuses instances whose guess count exceeds the enumeration budget.
template <typename Fn>
inline void for_each_guess(const RefinementInstance& inst, Fn&& fn,
                           RefinementStats* stats = nullptr) {
    using namespace refinement_detail;
    inst.validate();
    Bitset tl0 = inst.t_demand;
    tl0 |= (inst.nbr(inst.c0) & inst.b_side);
    auto parts0 = engine_parts(inst, inst.c0);

    std::vector<std::vector<int>> slots;  // per B-containing part: -1 plus each guessable vertex
    int mixed = 0;
    for (auto& p : parts0) {
        if (inst.c0.test(p.members[0]) && p.members.size() == 1) continue;
        std::vector<int> bs;
        bool has_r = false;
        for (int v : p.members)
            if (inst.b_side.test(v))
                bs.push_back(v);
            else if (!inst.c0.test(v))
                has_r = true;
        if (bs.empty()) continue;
        if (has_r && inst.clique_r) ++mixed;
        std::vector<int> slot{-1};
        for (int b : bs)
            if (!tl0.test(b)) slot.push_back(b);
        slots.push_back(std::move(slot));
    }
    long long total = inst.clique_r ? (1ll << mixed) : 1;
    for (auto& s : slots) {
        total *= (long long)s.size();
        if (total > kGuessCap) throw Refused("refinement guess enumeration exceeds budget");
    }
    if (total > kGuessCap) throw Refused("refinement guess enumeration exceeds budget");

    std::vector<size_t> odo(slots.size(), 0);
    while (true) {
        Bitset und(inst.n);
        for (size_t i = 0; i < slots.size(); ++i)
            if (slots[i][odo[i]] >= 0) und.set(slots[i][odo[i]]);
        uint32_t rb_count = inst.clique_r ? (uint32_t(1) << mixed) : 1;
        for (uint32_t rb = 0; rb < rb_count; ++rb) {
            auto prep = preprocess_guess(inst, und, rb);
            if (stats) ++stats->guesses;
            if (prep) fn(*prep);
        }
        size_t i = 0;
        for (; i < slots.size(); ++i) {
            if (++odo[i] < slots[i].size()) break;
            odo[i] = 0;
        }
        if (i == slots.size()) break;
    }
}

// All surviving guesses, materialized.
inline std::vector<PreppedInstance> preprocess(const RefinementInstance& inst,
                                               RefinementStats* stats = nullptr) {
    std::vector<PreppedInstance> out;
    for_each_guess(inst, [&](const PreppedInstance& p) { out.push_back(p); }, stats);
    return out;
}

// Full solve: min over all guesses, witness re-verified from first principles.
inline std::optional<RefinementResult> solve_refinement(const RefinementInstance& inst,
                                                        RefinementStats* stats = nullptr) {
    std::optional<RefinementResult> best;
    for_each_guess(
        inst,
        [&](const PreppedInstance& prep) {
            auto r = solve_prepped(inst, prep, stats);
            if (r && (!best || r->size < best->size)) best = r;
        },
        stats);
    if (!best) return std::nullopt;
    if (best->size > inst.budget) return std::nullopt;
    if (!refinement_feasible(inst, Bitset::of(inst.n, best->witness)))
        throw std::logic_error("refinement witness failed re-verification");
    return best;
}

}  // namespace idsolve
