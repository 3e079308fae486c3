#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "idsolve/bitset.hpp"

namespace idsolve {

// Input caps exceeded or a gadget gap: the operation refuses rather than guesses.
struct Refused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Simple undirected graph, dense 0-based vertex ids, sorted neighbor lists.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_) {}

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
        Graph g(n);
        for (auto [u, v] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (u == v) throw std::invalid_argument("loop edge not allowed");
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        for (auto& nb : g.adj) {
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                throw std::invalid_argument("parallel edge not allowed");
        }
        return g;
    }

    int degree(int v) const { return (int)adj[v].size(); }

    bool has_edge(int u, int v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }

    int edge_count() const {
        size_t d = 0;
        for (auto& nb : adj) d += nb.size();
        return (int)(d / 2);
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n; ++u)
            for (int v : adj[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    std::vector<Bitset> adjacency_bitsets() const {
        std::vector<Bitset> bits(n, Bitset(n));
        for (int u = 0; u < n; ++u)
            for (int v : adj[u]) bits[u].set(v);
        return bits;
    }

    std::vector<int> component_of() const {
        std::vector<int> comp(n, -1);
        int c = 0;
        std::vector<int> stack;
        for (int s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            comp[s] = c;
            stack.push_back(s);
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v : adj[u])
                    if (comp[v] < 0) {
                        comp[v] = c;
                        stack.push_back(v);
                    }
            }
            ++c;
        }
        return comp;
    }

    int component_count() const {
        auto comp = component_of();
        return comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
    }

    bool is_connected() const { return n <= 1 || component_count() == 1; }

    bool is_tree() const { return edge_count() == n - 1 && is_connected(); }

    // Induced subgraph on `keep` (any order); vertices are renumbered 0..keep.size()-1
    // following the sorted order of `keep`. old_of[new_id] = old id.
    Graph induced(std::vector<int> keep, std::vector<int>* old_of = nullptr) const {
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        std::vector<int> newid(n, -1);
        for (size_t i = 0; i < keep.size(); ++i) newid[keep[i]] = (int)i;
        Graph g((int)keep.size());
        for (int u : keep)
            for (int v : adj[u])
                if (newid[v] >= 0) g.adj[newid[u]].push_back(newid[v]);
        for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
        if (old_of) *old_of = keep;
        return g;
    }
};

inline int feedback_edge_number(const Graph& g) {
    return g.edge_count() - g.n + g.component_count();
}

// Text format: `c` comment lines, `p <n> <m>`, then m lines `e <u> <v>`, 1-based ids.
inline Graph parse_graph(std::istream& in) {
    std::string line;
    int lineno = 0, n = -1, m = -1, seen = 0;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            if (n >= 0) throw ParseError(lineno, "duplicate p line");
            if (!(ls >> n >> m) || n < 0 || m < 0) throw ParseError(lineno, "malformed p line");
        } else if (tag == "e") {
            if (n < 0) throw ParseError(lineno, "e line before p line");
            int u, v;
            if (!(ls >> u >> v)) throw ParseError(lineno, "malformed e line");
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError(lineno, "vertex id out of range");
            edges.emplace_back(u - 1, v - 1);
            ++seen;
        } else {
            throw ParseError(lineno, "unknown line tag '" + tag + "'");
        }
    }
    if (n < 0) throw ParseError(lineno, "missing p line");
    if (seen != m) throw ParseError(lineno, "edge count mismatch with p line");
    try {
        return Graph::from_edges(n, edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
}

inline std::string write_graph(const Graph& g) {
    std::ostringstream out;
    auto es = g.edges();
    out << "p " << g.n << " " << es.size() << "\n";
    for (auto [u, v] : es) out << "e " << u + 1 << " " << v + 1 << "\n";
    return out.str();
}

inline Graph parse_graph_string(const std::string& s) {
    std::istringstream in(s);
    return parse_graph(in);
}

}  // namespace idsolve
