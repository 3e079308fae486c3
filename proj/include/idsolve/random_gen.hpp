#pragma once

#include <random>
#include <vector>

#include "idsolve/graph.hpp"

namespace idsolve {

inline Graph random_graph(std::mt19937& rng, int n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

inline Graph random_tree(std::mt19937& rng, int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.emplace_back(pick(rng), v);
    }
    return Graph::from_edges(n, edges);
}

// Random connected-ish graph with feedback edge number exactly `fes`
// (random spanning tree plus fes distinct extra edges; requires enough room).
inline Graph random_graph_with_fes(std::mt19937& rng, int n, int fes) {
    Graph t = random_tree(rng, n);
    auto edges = t.edges();
    std::vector<std::pair<int, int>> candidates;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!t.has_edge(u, v)) candidates.emplace_back(u, v);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (int i = 0; i < fes && i < (int)candidates.size(); ++i) edges.push_back(candidates[i]);
    return Graph::from_edges(n, edges);
}

// Graph whose vertex cover number is at most `vc`: vertices [0, vc) form the
// cover side, the rest is independent; every other vertex gets 1..max_deg
// random neighbors in the cover side.
inline Graph random_graph_with_vc(std::mt19937& rng, int n, int vc, int max_deg,
                                  double cover_edge_p = 0.3) {
    std::vector<std::pair<int, int>> edges;
    std::bernoulli_distribution coin(cover_edge_p);
    for (int u = 0; u < vc; ++u)
        for (int v = u + 1; v < vc; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    std::uniform_int_distribution<int> degd(1, max_deg);
    for (int v = vc; v < n; ++v) {
        int d = degd(rng);
        std::vector<int> picks(vc);
        std::iota(picks.begin(), picks.end(), 0);
        std::shuffle(picks.begin(), picks.end(), rng);
        for (int i = 0; i < d && i < vc; ++i) edges.emplace_back(picks[i], v);
    }
    return Graph::from_edges(n, edges);
}

inline Graph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(int n) {
    auto edges = path_graph(n).edges();
    edges.emplace_back(0, n - 1);
    return Graph::from_edges(n, edges);
}

inline Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

inline Graph star_graph(int leaves) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, edges);
}

inline Graph complement_graph(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (!g.has_edge(u, v)) edges.emplace_back(u, v);
    return Graph::from_edges(g.n, edges);
}

}  // namespace idsolve
