#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

#include "idsolve/graph.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/partition.hpp"
#include "idsolve/random_gen.hpp"

using namespace idsolve;

namespace {

Partition random_partition(std::mt19937& rng, const std::vector<int>& ground) {
    std::uniform_int_distribution<int> nb(1, std::max<size_t>(1, ground.size()));
    int blocks = nb(rng);
    std::vector<std::vector<int>> bs(blocks);
    std::uniform_int_distribution<int> pick(0, blocks - 1);
    for (int v : ground) bs[pick(rng)].push_back(v);
    bs.erase(std::remove_if(bs.begin(), bs.end(), [](auto& b) { return b.empty(); }), bs.end());
    return Partition::of_blocks(std::move(bs));
}

Bitset random_subset(std::mt19937& rng, int n, double p = 0.5) {
    Bitset s(n);
    std::bernoulli_distribution coin(p);
    for (int v = 0; v < n; ++v)
        if (coin(rng)) s.set(v);
    return s;
}

}  // namespace

TEST_CASE("is_locating_dominating basics") {
    Graph p3 = Graph::from_edges(3, {{0, 2}, {1, 2}});  // a-c-b with c=2
    CHECK_FALSE(is_locating_dominating(p3, std::vector<int>{2}));
    CHECK(is_locating_dominating(p3, std::vector<int>{0, 1, 2}));

    Graph star = star_graph(3);  // center 0, leaves 1..3
    CHECK(is_locating_dominating(star, std::vector<int>{0, 1, 2}));
    CHECK(brute_force_lds(star).size() == 3);

    std::mt19937 rng(12345);
    for (int it = 0; it < 20; ++it) {
        Graph g = random_graph(rng, 8, 0.4);
        std::vector<int> all(8);
        std::iota(all.begin(), all.end(), 0);
        CHECK(is_locating_dominating(g, all));
    }
    CHECK_THROWS_AS(is_locating_dominating(p3, std::vector<int>{5}), std::invalid_argument);
}

TEST_CASE("twin classes") {
    Graph star = star_graph(3);
    Partition t = twin_classes(star);
    CHECK(t.blocks == std::vector<std::vector<int>>{{0}, {1, 2, 3}});

    Graph p4 = path_graph(4);
    CHECK(twin_classes(p4).is_identity());

    Graph k3 = complete_graph(3);
    CHECK(twin_classes(k3).blocks == std::vector<std::vector<int>>{{0, 1, 2}});
}

TEST_CASE("twin reduction rule") {
    Graph star = star_graph(3);
    auto red = apply_twin_rule(star, 3);
    CHECK(red.graph.n == 3);
    CHECK(red.k == 2);
    CHECK(red.removed.size() == 1);
    CHECK(red.graph.edge_count() == 2);  // K_{1,2} = P3

    // opt agreement pinned by enumeration on both sides
    CHECK(brute_force_lds(star).size() == 3);
    CHECK(brute_force_lds(red.graph).size() == 2);

    Graph p4 = path_graph(4);
    auto none = apply_twin_rule(p4, 2);
    CHECK(none.removed.empty());
    CHECK(none.k == 2);
    CHECK(none.graph.n == 4);

    SECTION("decisions preserved on random graphs for every k") {
        std::mt19937 rng(777);
        for (int it = 0; it < 60; ++it) {
            Graph g = random_graph(rng, 4 + (int)(rng() % 7), it % 2 ? 0.3 : 0.6);
            auto r = apply_twin_rule(g, 0);  // track only the deletion count
            int removed = (int)r.removed.size();
            int opt = brute_force_lds(g).size();
            int opt_red = r.graph.n ? brute_force_lds(r.graph).size() : 0;
            for (int k = 1; k <= g.n; ++k)
                CHECK((opt <= k) == (opt_red <= k - removed));
        }
    }
}

TEST_CASE("induced partition and meet") {
    Graph p3 = Graph::from_edges(3, {{0, 2}, {1, 2}});
    std::vector<int> ground{0, 1};
    CHECK(induced_partition(ground, std::vector<int>{}, p3).blocks ==
          std::vector<std::vector<int>>{{0, 1}});
    CHECK(induced_partition(std::vector<int>{0, 1}, std::vector<int>{0, 1}, p3).is_identity());
    CHECK(induced_partition(ground, std::vector<int>{2}, p3).blocks ==
          std::vector<std::vector<int>>{{0, 1}});

    std::mt19937 rng(99);
    std::vector<int> g12(12);
    std::iota(g12.begin(), g12.end(), 0);
    for (int it = 0; it < 100; ++it) {
        Partition p = random_partition(rng, g12);
        Partition q = random_partition(rng, g12);
        Partition r = random_partition(rng, g12);
        CHECK(meet(p, Partition::identity(g12)).is_identity());
        CHECK(meet(p, Partition::single_block(g12)) == p);
        CHECK(meet(p, q) == meet(q, p));
        CHECK(meet(meet(p, q), r) == meet(p, meet(q, r)));
        CHECK(meet(p, p) == p);
    }
    CHECK_THROWS_AS(meet(Partition::identity({0, 1}), Partition::identity({0, 2})),
                    std::invalid_argument);
}

TEST_CASE("induced partition splits under union") {
    std::mt19937 rng(4242);
    for (int it = 0; it < 100; ++it) {
        int n = 4 + (int)(rng() % 7);
        Graph g = random_graph(rng, n, 0.4);
        Bitset c1 = random_subset(rng, n, 0.3);
        Bitset c2 = random_subset(rng, n, 0.3);
        std::vector<int> ground(n);
        std::iota(ground.begin(), ground.end(), 0);
        Bitset u = c1;
        u |= c2;
        CHECK(induced_partition(ground, u, g) ==
              meet(induced_partition(ground, c1, g), induced_partition(ground, c2, g)));
    }
}

TEST_CASE("identity partition characterizes the locating condition") {
    std::mt19937 rng(31337);
    for (int it = 0; it < 80; ++it) {
        int n = 3 + (int)(rng() % 8);
        Graph g = random_graph(rng, n, 0.45);
        Bitset c = random_subset(rng, n, 0.4);
        std::vector<int> ground(n);
        std::iota(ground.begin(), ground.end(), 0);
        bool identity = induced_partition(ground, c, g).is_identity();
        bool located = true;
        for (int u = 0; u < n && located; ++u) {
            if (c.test(u)) continue;
            for (int v = u + 1; v < n && located; ++v) {
                if (c.test(v)) continue;
                std::set<int> cu, cv;
                for (int w : g.adj[u])
                    if (c.test(w)) cu.insert(w);
                for (int w : g.adj[v])
                    if (c.test(w)) cv.insert(w);
                if (cu == cv) located = false;
            }
        }
        CHECK(identity == located);
    }
}

TEST_CASE("brute force lds") {
    Graph k1(1);
    CHECK(brute_force_lds(k1).vertices == std::vector<int>{0});
    CHECK(brute_force_lds(path_graph(3)).size() == 2);
    CHECK(brute_force_lds(cycle_graph(4)).size() == 2);
    CHECK_THROWS_AS(brute_force_lds(path_graph(25), 20), Refused);

    // witnesses verify and are stable under reruns
    std::mt19937 rng(5);
    Graph g = random_graph(rng, 9, 0.35);
    auto s = brute_force_lds(g);
    CHECK(is_locating_dominating(g, s.vertices));
    CHECK(brute_force_lds(g).vertices == s.vertices);
}

TEST_CASE("feedback edge number") {
    std::mt19937 rng(7);
    CHECK(feedback_edge_number(random_tree(rng, 9)) == 0);
    CHECK(feedback_edge_number(complete_graph(4)) == 3);
    CHECK(feedback_edge_number(cycle_graph(6)) == 1);
}

TEST_CASE("graph text format round trip") {
    std::mt19937 rng(11);
    for (int it = 0; it < 20; ++it) {
        Graph g = random_graph(rng, 3 + (int)(rng() % 10), 0.4);
        std::string s = write_graph(g);
        Graph h = parse_graph_string(s);
        CHECK(write_graph(h) == s);
    }
    CHECK_THROWS_AS(parse_graph_string("p 2 1\ne 1 3\n"), ParseError);
    CHECK_THROWS_AS(parse_graph_string("e 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_graph_string("p 2 2\ne 1 2\n"), ParseError);
    try {
        parse_graph_string("p 3 1\nq 1 2\n");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}
