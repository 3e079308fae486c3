#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/parallel.hpp"
#include "idsolve/tree_dp.hpp"
#include "idsolve/tree_enum.hpp"

namespace idsolve {

// ---- rooted gadgets -------------------------------------------------------

// The five hard-coded rooted tree gadgets, one per class, root = vertex 0.
inline Graph rooted_gadget(int x) {
    switch (x) {
        case 0: return Graph(1);
        case 1: return Graph::from_edges(3, {{0, 1}, {1, 2}});
        case 2: return Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}});
        case 3: return Graph::from_edges(2, {{0, 1}});
        case 4: return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 5}});
        default: throw std::invalid_argument("gadget class out of range");
    }
}

inline int rooted_gadget_value(int x) {
    static const int k[5] = {0, 1, 2, 1, 3};
    return k[x];
}

// Re-derives each gadget's class and value; run once before kernelizing.
inline void verify_rooted_gadgets() {
    static bool checked = [] {
        for (int x = 0; x < 5; ++x) {
            RootedClass c = classify_rooted(rooted_gadget(x), 0);
            if (c.type != x || c.k != rooted_gadget_value(x))
                throw std::logic_error("built-in rooted gadget table failed self-check");
        }
        return true;
    }();
    (void)checked;
}

// ---- hanging trees --------------------------------------------------------

struct HangingTree {
    std::vector<int> vertices;  // includes the anchor
    int anchor;
};

// Iteratively marks degree-1 vertices of the unmarked subgraph; each anchor
// (unmarked vertex with marked neighbors) collects its marked appendages.
// Acyclic components surface whole, rooted at the marking survivor (or the
// smallest vertex of the final round when the marking consumes everything).
inline std::vector<HangingTree> find_hanging_trees(const Graph& g) {
    std::vector<char> marked(g.n, 0);
    std::vector<int> deg(g.n), round_of(g.n, -1);
    for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    int round = 0;
    while (true) {
        std::vector<int> now;
        for (int v = 0; v < g.n; ++v)
            if (!marked[v] && deg[v] == 1) now.push_back(v);
        if (now.empty()) break;
        for (int v : now) {
            marked[v] = 1;
            round_of[v] = round;
        }
        for (int v : now)
            for (int u : g.adj[v])
                if (!marked[u]) --deg[u];
        ++round;
    }
    auto comp = g.component_of();
    int nc = g.component_count();
    std::vector<int> survivor(nc, -1), last_round_min(nc, -1);
    for (int v = 0; v < g.n; ++v) {
        if (!marked[v]) {
            if (survivor[comp[v]] < 0) survivor[comp[v]] = v;
        }
    }
    for (int c = 0; c < nc; ++c) {
        if (survivor[c] >= 0) continue;
        int best = -1;
        for (int v = 0; v < g.n; ++v) {
            if (comp[v] != c) continue;
            if (best < 0 || round_of[v] > round_of[best] ||
                (round_of[v] == round_of[best] && v < best))
                best = v;
        }
        marked[best] = 0;  // it anchors its fully-consumed component
    }
    std::vector<HangingTree> out;
    std::vector<char> used(g.n, 0);
    for (int w = 0; w < g.n; ++w) {
        if (marked[w]) continue;
        std::vector<int> tree{w};
        std::vector<int> stack;
        for (int u : g.adj[w])
            if (marked[u] && !used[u]) stack.push_back(u);
        bool isolated_comp = g.adj[w].empty();
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (used[u]) continue;
            used[u] = 1;
            tree.push_back(u);
            for (int x : g.adj[u])
                if (marked[x] && !used[x]) stack.push_back(x);
        }
        if (tree.size() == 1 && !isolated_comp) continue;  // nothing hangs here
        std::sort(tree.begin(), tree.end());
        out.push_back(HangingTree{tree, w});
    }
    return out;
}

// ---- core multigraph ------------------------------------------------------

struct CoreEdge {
    int v1, v2;                 // core endpoints
    std::vector<int> interior;  // path vertices from v1 side to v2 side
    bool direct() const { return interior.empty(); }
};

struct CoreMultigraph {
    std::vector<int> vertices;  // branch and promoted vertices
    std::vector<CoreEdge> edges;
    std::vector<char> in_two_core;  // per vertex of the host graph
};

namespace fes_detail {

inline std::vector<char> two_core(const Graph& g) {
    std::vector<char> alive(g.n, 1);
    std::vector<int> deg(g.n);
    for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.n; ++v)
            if (alive[v] && deg[v] <= 1) {
                alive[v] = 0;
                changed = true;
                for (int u : g.adj[v])
                    if (alive[u]) --deg[u];
            }
    }
    return alive;
}

}  // namespace fes_detail

// Degree->=3 vertices of the 2-core plus promotions: one vertex per bare
// cycle component, and the interior midpoint of every loop walk.
inline CoreMultigraph core_multigraph(const Graph& g) {
    CoreMultigraph core;
    core.in_two_core = fes_detail::two_core(g);
    const auto& alive = core.in_two_core;
    std::vector<int> cdeg(g.n, 0);
    for (int v = 0; v < g.n; ++v)
        if (alive[v])
            for (int u : g.adj[v])
                if (alive[u]) ++cdeg[v];

    std::vector<char> branch(g.n, 0);
    for (int v = 0; v < g.n; ++v)
        if (alive[v] && cdeg[v] >= 3) branch[v] = 1;
    // bare cycle components: promote the smallest vertex
    {
        auto comp = g.component_of();
        std::map<int, int> promote;  // component -> min alive vertex
        std::map<int, bool> has_branch;
        for (int v = 0; v < g.n; ++v)
            if (alive[v]) {
                if (branch[v]) has_branch[comp[v]] = true;
                if (!promote.count(comp[v])) promote[comp[v]] = v;
            }
        for (auto [c, v] : promote)
            if (!has_branch[c]) branch[v] = 1;
    }

    // walk maximal degree-2 paths between branch vertices
    std::map<std::pair<int, int>, int> visited;  // directed half-edge use count
    auto walked = [&](int a, int b) { return visited[{a, b}]; };
    std::vector<CoreEdge> raw;
    for (int s = 0; s < g.n; ++s) {
        if (!branch[s]) continue;
        for (int first : g.adj[s]) {
            if (!alive[first]) continue;
            if (walked(s, first) >= 1) continue;
            ++visited[{s, first}];
            std::vector<int> interior;
            int prev = s, cur = first;
            while (!branch[cur]) {
                interior.push_back(cur);
                int nxt = -1;
                for (int u : g.adj[cur])
                    if (alive[u] && u != prev) nxt = u;
                prev = cur;
                cur = nxt;
            }
            ++visited[{cur, prev}];
            raw.push_back(CoreEdge{s, cur, interior});
        }
    }
    // split loops at the interior midpoint (ties toward the v1 side)
    for (auto& e : raw) {
        if (e.v1 != e.v2) {
            core.edges.push_back(e);
            continue;
        }
        int m = (int)e.interior.size();
        int mid = (m - 1) / 2;
        int x = e.interior[mid];
        branch[x] = 1;
        core.edges.push_back(
            CoreEdge{e.v1, x, {e.interior.begin(), e.interior.begin() + mid}});
        core.edges.push_back(
            CoreEdge{x, e.v2, {e.interior.begin() + mid + 1, e.interior.end()}});
    }
    for (int v = 0; v < g.n; ++v)
        if (branch[v]) core.vertices.push_back(v);

    // structural bounds per cyclic component
    {
        auto comp = g.component_of();
        std::map<int, std::array<int, 4>> stats;  // fes pieces + core counts
        for (int v = 0; v < g.n; ++v) {
            auto& s = stats[comp[v]];
            s[0] += 1;
            s[1] += g.degree(v);
        }
        for (int v : core.vertices) ++stats[comp[v]][2];
        for (auto& e : core.edges) ++stats[comp[e.v1]][3];
        for (auto& [c, s] : stats) {
            int fes = s[1] / 2 - s[0] + 1;
            if (fes <= 0) continue;
            int vbound = fes == 1 ? 2 : 3 * fes - 2;
            int ebound = fes == 1 ? 2 : 4 * fes - 3;
            if (s[2] > vbound || s[3] > ebound)
                throw std::logic_error("core multigraph exceeds its structural bounds");
        }
    }
    return core;
}

// ---- gadget library -------------------------------------------------------

struct GadgetEntry {
    std::string signature;
    int k_g = 0;
    int vx = 0, vy = 0;
    std::vector<std::pair<int, int>> edges;
    int n = 0;

    Graph tree() const { return n == 1 ? Graph(1) : Graph::from_edges(n, edges); }
};

struct GadgetLibrary {
    int max_n = 0;
    std::map<std::string, GadgetEntry> entries;

    const GadgetEntry* find(const std::string& sig) const {
        auto it = entries.find(sig);
        return it == entries.end() ? nullptr : &it->second;
    }
};

namespace fes_detail {

inline uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string entry_line(const GadgetEntry& e) {
    std::ostringstream out;
    out << "g " << e.signature << " k=" << e.k_g << " roots=" << e.vx << "," << e.vy
        << " edges=";
    for (size_t i = 0; i < e.edges.size(); ++i) {
        if (i) out << ";";
        out << e.edges[i].first << "-" << e.edges[i].second;
    }
    return out.str();
}

}  // namespace fes_detail

// Enumerates all doubly-rooted trees up to max_n vertices and keeps the first
// (smallest, then canonical order) representative of every realized class.
inline GadgetLibrary discover_gadgets(int max_n, int threads = 1) {
    if (max_n < 2) throw std::invalid_argument("discover_gadgets needs max_n >= 2");
    GadgetLibrary lib;
    lib.max_n = max_n;
    for (int n = 2; n <= max_n; ++n) {
        auto trees = all_free_trees(n);
        std::vector<std::vector<GadgetEntry>> found(trees.size());
        parallel_for((long long)trees.size(), threads, [&](long long ti) {
            const Graph& t = trees[ti];
            for (int v1 = 0; v1 < n; ++v1)
                for (int v2 = 0; v2 < n; ++v2) {
                    if (v1 == v2) continue;
                    DoublyClass c = classify_doubly(t, v1, v2);
                    GadgetEntry e;
                    e.signature = c.signature();
                    e.k_g = c.k;
                    e.vx = v1;
                    e.vy = v2;
                    e.edges = t.edges();
                    e.n = n;
                    found[ti].push_back(std::move(e));
                }
        });
        for (auto& per_tree : found)
            for (auto& e : per_tree) lib.entries.try_emplace(e.signature, e);
    }
    return lib;
}

inline void save_gadget_library(const GadgetLibrary& lib, std::ostream& out) {
    uint64_t h = 1469598103934665603ull;
    std::vector<std::string> lines;
    for (const auto& [sig, e] : lib.entries) {
        lines.push_back(fes_detail::entry_line(e));
        h = fes_detail::fnv1a(lines.back(), h);
    }
    std::ostringstream hex;
    hex << std::hex << h;
    out << "gadgetlib v1 max_n=" << lib.max_n << " count=" << lib.entries.size()
        << " checksum=" << hex.str() << "\n";
    for (const auto& l : lines) out << l << "\n";
}

inline GadgetLibrary load_gadget_library(std::istream& in, bool reclassify = true) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty gadget library");
    GadgetLibrary lib;
    size_t count = 0;
    std::string checksum;
    {
        std::istringstream hs(line);
        std::string tag, fields;
        hs >> tag >> fields;
        if (tag != "gadgetlib" || fields != "v1") throw ParseError(1, "bad gadget library header");
        std::string kv;
        while (hs >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw ParseError(1, "malformed header field");
            std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "max_n") lib.max_n = std::stoi(val);
            else if (key == "count") count = std::stoul(val);
            else if (key == "checksum") checksum = val;
        }
    }
    uint64_t h = 1469598103934665603ull;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        h = fes_detail::fnv1a(line, h);
        std::istringstream ls(line);
        std::string tag;
        GadgetEntry e;
        ls >> tag;
        if (tag != "g") throw ParseError(lineno, "expected gadget entry");
        std::string kglob, roots, edges;
        ls >> e.signature >> kglob >> roots >> edges;
        if (e.signature.size() != 25 || kglob.rfind("k=", 0) != 0 ||
            roots.rfind("roots=", 0) != 0 || edges.rfind("edges=", 0) != 0)
            throw ParseError(lineno, "malformed gadget entry");
        e.k_g = std::stoi(kglob.substr(2));
        auto comma = roots.find(',');
        e.vx = std::stoi(roots.substr(6, comma - 6));
        e.vy = std::stoi(roots.substr(comma + 1));
        int maxv = std::max(e.vx, e.vy);
        std::string es = edges.substr(6);
        std::istringstream estream(es);
        std::string pair;
        while (std::getline(estream, pair, ';')) {
            if (pair.empty()) continue;
            auto dash = pair.find('-');
            int u = std::stoi(pair.substr(0, dash));
            int v = std::stoi(pair.substr(dash + 1));
            maxv = std::max({maxv, u, v});
            e.edges.emplace_back(u, v);
        }
        e.n = maxv + 1;
        lib.entries[e.signature] = e;
    }
    if (lib.entries.size() != count) throw ParseError(lineno, "gadget count mismatch");
    std::ostringstream hex;
    hex << std::hex << h;
    if (hex.str() != checksum) throw ParseError(lineno, "gadget library checksum mismatch");
    if (reclassify)
        for (const auto& [sig, e] : lib.entries) {
            DoublyClass c = classify_doubly(e.tree(), e.vx, e.vy);
            if (c.signature() != sig || c.k != e.k_g)
                throw ParseError(0, "gadget entry fails re-classification");
        }
    return lib;
}

// ---- reduction rules and kernelization -------------------------------------

namespace fes_detail {

struct Graft {
    std::vector<int> drop;                        // host vertices to delete
    Graph gadget;                                 // replacement tree
    std::vector<std::pair<int, int>> identify;    // (gadget vertex, host vertex)
};

// Applies several vertex-disjoint grafts in one rebuild. Survivors keep their
// relative order and are renumbered densely; gadget vertices follow. A host
// edge between two identify targets of one graft belongs to the replaced tree
// and is dropped (the gadget decides whether its roots are adjacent).
inline Graph apply_grafts(const Graph& g, const std::vector<Graft>& grafts,
                          std::vector<int>* old_of = nullptr) {
    std::vector<char> dropped(g.n, 0);
    for (const auto& gr : grafts)
        for (int v : gr.drop) dropped[v] = 1;
    std::set<std::pair<int, int>> replaced;
    for (const auto& gr : grafts)
        for (size_t i = 0; i < gr.identify.size(); ++i)
            for (size_t j = i + 1; j < gr.identify.size(); ++j) {
                int a = gr.identify[i].second, b = gr.identify[j].second;
                replaced.emplace(std::min(a, b), std::max(a, b));
            }
    std::vector<int> newid(g.n, -1), survivors;
    for (int v = 0; v < g.n; ++v)
        if (!dropped[v]) {
            newid[v] = (int)survivors.size();
            survivors.push_back(v);
        }
    int total = (int)survivors.size();
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges()) {
        if (dropped[u] || dropped[v]) continue;
        if (replaced.count({std::min(u, v), std::max(u, v)})) continue;
        edges.emplace_back(newid[u], newid[v]);
    }
    for (const auto& gr : grafts) {
        std::vector<int> gid(gr.gadget.n, -1);
        for (auto [gv, hv] : gr.identify) {
            if (dropped[hv]) throw std::logic_error("graft identifies a dropped vertex");
            gid[gv] = newid[hv];
        }
        for (int v = 0; v < gr.gadget.n; ++v)
            if (gid[v] < 0) gid[v] = total++;
        for (auto [u, v] : gr.gadget.edges()) edges.emplace_back(gid[u], gid[v]);
    }
    if (old_of) *old_of = survivors;
    return Graph::from_edges(total, edges);
}

}  // namespace fes_detail

// One application of the hanging-tree rule: replace (T, anchor) by its class
// gadget grafted at the anchor; the budget shifts by k_X - opt_X.
inline std::pair<Graph, int> reduce_hanging_tree(const Graph& g, int k, const HangingTree& t) {
    verify_rooted_gadgets();
    std::vector<int> old_of;
    Graph sub = g.induced(t.vertices, &old_of);
    int root = (int)(std::lower_bound(old_of.begin(), old_of.end(), t.anchor) - old_of.begin());
    RootedClass cls = classify_rooted(sub, root);
    fes_detail::Graft graft;
    for (int v : t.vertices)
        if (v != t.anchor) graft.drop.push_back(v);
    graft.gadget = rooted_gadget(cls.type);
    graft.identify = {{0, t.anchor}};
    Graph out = fes_detail::apply_grafts(g, {graft});
    return {out, k - cls.k + rooted_gadget_value(cls.type)};
}

// One application of the doubly-rooted rule on a tree with attachment
// vertices c1, c2; throws Refused naming the signature when the library
// lacks the class.
inline std::pair<Graph, int> reduce_core_edge(const Graph& g, int k,
                                              const std::vector<int>& tree_vertices, int c1,
                                              int c2, const GadgetLibrary& lib) {
    std::vector<int> old_of;
    Graph sub = g.induced(tree_vertices, &old_of);
    auto local = [&](int v) {
        return (int)(std::lower_bound(old_of.begin(), old_of.end(), v) - old_of.begin());
    };
    DoublyClass cls = classify_doubly(sub, local(c1), local(c2));
    const GadgetEntry* e = lib.find(cls.signature());
    if (!e) throw Refused("gadget gap: no library entry for signature " + cls.signature());
    fes_detail::Graft graft;
    for (int v : tree_vertices)
        if (v != c1 && v != c2) graft.drop.push_back(v);
    graft.gadget = e->tree();
    graft.identify = {{e->vx, c1}, {e->vy, c2}};
    Graph out = fes_detail::apply_grafts(g, {graft});
    return {out, k - cls.k + e->k_g};
}

struct KernelReport {
    int fes = 0;
    int kernel_n = 0, kernel_m = 0;
    int budget_shift = 0;
    double ratio = 0.0;  // kernel_n / max(fes, 1)
    std::vector<std::string> gadget_gaps;
};

struct KernelResult {
    Graph graph;
    int k = 0;
    KernelReport report;
};

// Full kernelization: hanging-tree rule to fixpoint, then the doubly-rooted
// rule on every core path with at least two interior vertices.
inline KernelResult kernelize_fes(const Graph& g_in, int k_in, const GadgetLibrary& lib) {
    verify_rooted_gadgets();
    KernelResult res;
    res.report.fes = feedback_edge_number(g_in);
    Graph g = g_in;
    int k = k_in;

    // hanging trees (whole acyclic components included), skip already-minimal
    for (int pass = 0; pass < g_in.n + 2; ++pass) {
        auto trees = find_hanging_trees(g);
        std::vector<fes_detail::Graft> grafts;
        int shift = 0;
        for (const auto& t : trees) {
            std::vector<int> old_of;
            Graph sub = g.induced(t.vertices, &old_of);
            int root =
                (int)(std::lower_bound(old_of.begin(), old_of.end(), t.anchor) - old_of.begin());
            RootedClass cls = classify_rooted(sub, root);
            const Graph gadget = rooted_gadget(cls.type);
            if (rooted_isomorphic(sub, root, gadget, 0)) continue;
            fes_detail::Graft graft;
            for (int v : t.vertices)
                if (v != t.anchor) graft.drop.push_back(v);
            graft.gadget = gadget;
            graft.identify = {{0, t.anchor}};
            grafts.push_back(std::move(graft));
            shift += rooted_gadget_value(cls.type) - cls.k;
        }
        if (grafts.empty()) break;
        g = fes_detail::apply_grafts(g, grafts);
        k += shift;
    }

    // core paths
    CoreMultigraph core = core_multigraph(g);
    std::vector<fes_detail::Graft> grafts;
    int shift = 0;
    for (const auto& e : core.edges) {
        if ((int)e.interior.size() < 2) continue;
        // the path plus everything hanging off its interior
        std::vector<int> tree = e.interior;
        std::vector<int> stack = e.interior;
        std::vector<char> seen(g.n, 0);
        for (int v : e.interior) seen[v] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : g.adj[u])
                if (!core.in_two_core[w] && !seen[w]) {
                    seen[w] = 1;
                    tree.push_back(w);
                    stack.push_back(w);
                }
        }
        std::sort(tree.begin(), tree.end());
        int c1 = e.interior.front(), c2 = e.interior.back();
        std::vector<int> old_of;
        Graph sub = g.induced(tree, &old_of);
        auto local = [&](int v) {
            return (int)(std::lower_bound(old_of.begin(), old_of.end(), v) - old_of.begin());
        };
        DoublyClass cls = classify_doubly(sub, local(c1), local(c2));
        const GadgetEntry* entry = lib.find(cls.signature());
        if (!entry) {
            res.report.gadget_gaps.push_back(cls.signature());
            continue;
        }
        // replacing a same-shape tree would be the identity
        if (ahu_rooted(sub, local(c1), local(c1), local(c2)) ==
            ahu_rooted(entry->tree(), entry->vx, entry->vx, entry->vy))
            continue;
        fes_detail::Graft graft;
        for (int v : tree)
            if (v != c1 && v != c2) graft.drop.push_back(v);
        graft.gadget = entry->tree();
        graft.identify = {{entry->vx, c1}, {entry->vy, c2}};
        grafts.push_back(std::move(graft));
        shift += entry->k_g - cls.k;
    }
    if (!grafts.empty()) {
        g = fes_detail::apply_grafts(g, grafts);
        k += shift;
    }

    res.graph = std::move(g);
    res.k = k;
    res.report.kernel_n = res.graph.n;
    res.report.kernel_m = res.graph.edge_count();
    res.report.budget_shift = res.k - k_in;
    res.report.ratio = (double)res.report.kernel_n / std::max(res.report.fes, 1);
    return res;
}

}  // namespace idsolve
