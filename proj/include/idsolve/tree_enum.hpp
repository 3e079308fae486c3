#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "idsolve/graph.hpp"

namespace idsolve {

// Canonical string of a rooted tree: "(" + sorted child encodings + ")".
// Marked vertices get a distinguishing letter, used for doubly-rooted forms.
inline std::string ahu_rooted(const Graph& t, int root, int mark1 = -1, int mark2 = -1) {
    std::vector<int> parent(t.n, -2), order;
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
    std::vector<std::string> enc(t.n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        std::vector<std::string> parts;
        for (int w : t.adj[u])
            if (parent[w] == u) parts.push_back(enc[w]);
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        if (u == mark1) s += 'a';
        if (u == mark2) s += 'b';
        for (auto& p : parts) s += p;
        s += ')';
        enc[u] = std::move(s);
    }
    return enc[root];
}

inline std::vector<int> tree_centroids(const Graph& t) {
    std::vector<int> size(t.n, 1), parent(t.n, -2), order;
    parent[0] = -1;
    std::vector<int> stack{0};
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
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (parent[*it] >= 0) size[parent[*it]] += size[*it];
    std::vector<int> cs;
    for (int u = 0; u < t.n; ++u) {
        int heaviest = t.n - size[u];
        for (int w : t.adj[u])
            if (parent[w] == u) heaviest = std::max(heaviest, size[w]);
        if (heaviest <= t.n / 2) cs.push_back(u);
    }
    return cs;
}

// Canonical free-tree key: minimum AHU string over the centroids.
inline std::string ahu_free(const Graph& t) {
    std::string best;
    for (int c : tree_centroids(t)) {
        std::string s = ahu_rooted(t, c);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

// Parse a canonical AHU string back into a tree with DFS vertex labels.
inline Graph tree_from_ahu(const std::string& s) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> stack;
    int next = 0;
    for (char ch : s) {
        if (ch == '(') {
            if (!stack.empty()) edges.emplace_back(stack.back(), next);
            stack.push_back(next++);
        } else if (ch == ')') {
            stack.pop_back();
        }
    }
    return Graph::from_edges(next, edges);
}

namespace tree_enum_detail {

// Beyer–Hedetniemi successor over rooted-tree level sequences (levels from 1).
inline bool next_level_sequence(std::vector<int>& L) {
    int n = (int)L.size();
    int p = -1;
    for (int i = n - 1; i >= 0; --i)
        if (L[i] > 2) {
            p = i;
            break;
        }
    if (p < 0) return false;
    int q = -1;
    for (int i = p - 1; i >= 0; --i)
        if (L[i] == L[p] - 1) {
            q = i;
            break;
        }
    for (int i = p; i < n; ++i) L[i] = L[i - (p - q)];
    return true;
}

inline Graph tree_of_levels(const std::vector<int>& L) {
    int n = (int)L.size();
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) {
        for (int j = i - 1; j >= 0; --j)
            if (L[j] == L[i] - 1) {
                edges.emplace_back(j, i);
                break;
            }
    }
    return Graph::from_edges(n, edges);
}

}  // namespace tree_enum_detail

// All non-isomorphic free trees on exactly n vertices, ordered by canonical
// form; vertex labels follow the canonical string's DFS order.
inline std::vector<Graph> all_free_trees(int n) {
    if (n <= 0) return {};
    if (n == 1) return {Graph(1)};
    std::vector<int> L(n);
    for (int i = 0; i < n; ++i) L[i] = i + 1;
    std::map<std::string, Graph> seen;
    while (true) {
        Graph t = tree_enum_detail::tree_of_levels(L);
        std::string key = ahu_free(t);
        if (!seen.count(key)) seen.emplace(key, tree_from_ahu(key));
        if (!tree_enum_detail::next_level_sequence(L)) break;
    }
    std::vector<Graph> out;
    out.reserve(seen.size());
    for (auto& [key, g] : seen) out.push_back(g);
    return out;
}

// Rooted-tree isomorphism through the canonical encodings.
inline bool rooted_isomorphic(const Graph& a, int ra, const Graph& b, int rb) {
    return ahu_rooted(a, ra) == ahu_rooted(b, rb);
}

}  // namespace idsolve
