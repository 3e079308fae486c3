#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <fstream>
#include <sstream>

#include "idsolve/fes_kernel.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/random_gen.hpp"

using namespace idsolve;

namespace {

GadgetLibrary& shared_lib() {
    static GadgetLibrary lib = discover_gadgets(10, 4);
    return lib;
}

// decisions agree at every k iff the optima line up with the budget shift
void check_equisatisfiable(const Graph& g, const KernelResult& kr) {
    int opt_in = brute_force_lds(g, 22).size();
    REQUIRE(kr.graph.n <= 24);
    int opt_ker = kr.graph.n ? brute_force_lds(kr.graph, 24).size() : 0;
    CHECK(opt_ker == opt_in + kr.report.budget_shift);
}

}  // namespace

TEST_CASE("hanging trees") {
    // odd path: everything hangs at the marking survivor (the middle)
    Graph p5 = path_graph(5);
    auto t5 = find_hanging_trees(p5);
    REQUIRE(t5.size() == 1);
    CHECK(t5[0].vertices == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(t5[0].anchor == 2);

    // C4 with a pendant path of length 2
    Graph c4p = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {4, 5}});
    auto tc = find_hanging_trees(c4p);
    REQUIRE(tc.size() == 1);
    CHECK(tc[0].anchor == 0);
    CHECK(tc[0].vertices == std::vector<int>{0, 4, 5});

    // lollipop: K4 plus a path; the tree excludes all clique vertices but the anchor
    Graph lolli = Graph::from_edges(
        7, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
    auto tl = find_hanging_trees(lolli);
    REQUIRE(tl.size() == 1);
    CHECK(tl[0].anchor == 3);
    CHECK(tl[0].vertices == std::vector<int>{3, 4, 5, 6});

    // pure cycle: no hanging trees
    CHECK(find_hanging_trees(cycle_graph(5)).empty());
}

TEST_CASE("core multigraph") {
    // a tree strips away entirely
    std::mt19937 rng(3);
    CoreMultigraph ct = core_multigraph(random_tree(rng, 9));
    CHECK(ct.vertices.empty());
    CHECK(ct.edges.empty());

    // C6: promoted vertex + split midpoint, two parallel path edges
    CoreMultigraph c6 = core_multigraph(cycle_graph(6));
    CHECK(c6.vertices.size() == 2);
    REQUIRE(c6.edges.size() == 2);
    CHECK(c6.edges[0].v1 != c6.edges[0].v2);
    CHECK(c6.edges[0].interior.size() + c6.edges[1].interior.size() == 4);

    // theta graph: two degree-3 vertices joined by three paths of length 3
    Graph theta = Graph::from_edges(
        8, {{0, 2}, {2, 3}, {3, 1}, {0, 4}, {4, 5}, {5, 1}, {0, 6}, {6, 7}, {7, 1}});
    CHECK(feedback_edge_number(theta) == 2);
    CoreMultigraph th = core_multigraph(theta);
    CHECK(th.vertices == std::vector<int>{0, 1});
    CHECK(th.edges.size() == 3);
}

TEST_CASE("reduce a hanging tree") {
    Graph host = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 5}});
    auto trees = find_hanging_trees(host);
    REQUIRE(trees.size() == 1);
    auto [reduced, k2] = reduce_hanging_tree(host, 5, trees[0]);
    std::vector<int> old_of;
    Graph sub = host.induced(trees[0].vertices, &old_of);
    int root = (int)(std::lower_bound(old_of.begin(), old_of.end(), trees[0].anchor) -
                     old_of.begin());
    RootedClass cls = classify_rooted(sub, root);
    CHECK(reduced.n == 3 + rooted_gadget(cls.type).n - 1);
    CHECK(k2 == 5 - cls.k + rooted_gadget_value(cls.type));

    // decisions preserved on random small-fes graphs, one application at a time
    std::mt19937 rng(404);
    int applied = 0;
    for (int it = 0; it < 30; ++it) {
        Graph g = random_graph_with_fes(rng, 8 + (int)(rng() % 5), 1 + (int)(rng() % 2));
        auto ts = find_hanging_trees(g);
        if (ts.empty()) continue;
        auto [g2, kk] = reduce_hanging_tree(g, 0, ts[0]);
        if (g2.n > 24) continue;
        int opt_in = brute_force_lds(g, 22).size();
        int opt_out = brute_force_lds(g2, 24).size();
        CHECK(opt_out == opt_in + kk);
        ++applied;
    }
    CHECK(applied > 5);
}

TEST_CASE("gadget discovery") {
    const GadgetLibrary& lib = shared_lib();
    CHECK(lib.entries.size() == 175);

    // every stored entry re-classifies to its own key
    for (const auto& [sig, e] : lib.entries) {
        DoublyClass c = classify_doubly(e.tree(), e.vx, e.vy);
        CHECK(c.signature() == sig);
        CHECK(c.k == e.k_g);
    }

    // realized signature count grows with max_n
    int prev = 0;
    for (int mn : {2, 4, 6, 8, 10}) {
        int cur = (int)discover_gadgets(mn).entries.size();
        CHECK(cur >= prev);
        prev = cur;
    }

    // the single edge realizes its signature with the smallest possible tree
    Graph e2 = Graph::from_edges(2, {{0, 1}});
    auto sig = classify_doubly(e2, 0, 1).signature();
    const GadgetEntry* entry = lib.find(sig);
    REQUIRE(entry != nullptr);
    CHECK(entry->n == 2);
}

TEST_CASE("gadget library file") {
    GadgetLibrary lib = discover_gadgets(6);
    std::ostringstream out;
    save_gadget_library(lib, out);
    std::istringstream in(out.str());
    GadgetLibrary lib2 = load_gadget_library(in);
    CHECK(lib2.entries.size() == lib.entries.size());
    CHECK(lib2.max_n == 6);

    // tampering breaks the checksum
    std::string text = out.str();
    auto pos = text.find("k=", text.find('\n'));
    REQUIRE(pos != std::string::npos);
    text[pos + 2] = '9';
    std::istringstream bad(text);
    CHECK_THROWS_AS(load_gadget_library(bad), ParseError);
}

TEST_CASE("the shipped library regenerates byte-exactly") {
    std::ostringstream out;
    save_gadget_library(shared_lib(), out);
    std::ifstream shipped(std::string(IDSOLVE_DATA_DIR) + "/gadgets_n10.lib");
    REQUIRE(shipped.good());
    std::ostringstream disk;
    disk << shipped.rdbuf();
    CHECK(out.str() == disk.str());
}

TEST_CASE("reduce a core path") {
    // C4 with an eleven-vertex path between two of its vertices
    std::vector<std::pair<int, int>> e = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (int i = 4; i < 15; ++i) e.emplace_back(i == 4 ? 0 : i - 1, i);
    e.emplace_back(14, 2);
    Graph host = Graph::from_edges(15, e);
    CoreMultigraph core = core_multigraph(host);
    const CoreEdge* longest = nullptr;
    for (auto& ce : core.edges)
        if (!longest || ce.interior.size() > longest->interior.size()) longest = &ce;
    REQUIRE(longest != nullptr);
    REQUIRE(longest->interior.size() >= 2);
    auto [g2, k2] = reduce_core_edge(host, 0, longest->interior, longest->interior.front(),
                                     longest->interior.back(), shared_lib());
    CHECK(g2.n < host.n);
    int opt_in = brute_force_lds(host).size();
    int opt_out = brute_force_lds(g2).size();
    CHECK(opt_out == opt_in + k2);
}

TEST_CASE("kernelize a tree input") {
    std::mt19937 rng(11);
    Graph t = random_tree(rng, 13);
    auto kr = kernelize_fes(t, 6, shared_lib());
    CHECK(kr.report.fes == 0);
    CHECK(kr.graph.n <= 6);  // one rooted gadget
    CHECK(kr.report.gadget_gaps.empty());
    check_equisatisfiable(t, kr);
}

TEST_CASE("kernelize cycles") {
    for (int n = 10; n <= 14; ++n) {
        Graph c = cycle_graph(n);
        auto kr = kernelize_fes(c, 5, shared_lib());
        CHECK(kr.report.gadget_gaps.empty());
        check_equisatisfiable(c, kr);
    }
    // a long cycle collapses to constant size
    auto kr100 = kernelize_fes(cycle_graph(100), 40, shared_lib());
    CHECK(kr100.report.gadget_gaps.empty());
    CHECK(kr100.graph.n <= 20);
}

TEST_CASE("gadget gaps are reported, never guessed") {
    // a stunted library cannot cover long paths: the kernelizer must leave
    // them alone and name the missing signatures
    GadgetLibrary tiny = discover_gadgets(2);
    Graph c20 = cycle_graph(20);
    auto kr = kernelize_fes(c20, 10, tiny);
    CHECK_FALSE(kr.report.gadget_gaps.empty());
    CHECK(kr.graph.n == 20);  // unreduced
    CHECK(kr.k == 10);
    for (const auto& sig : kr.report.gadget_gaps) CHECK(sig.size() == 25);

    // the single-application rule refuses instead
    CoreMultigraph core = core_multigraph(c20);
    REQUIRE_FALSE(core.edges.empty());
    const CoreEdge* e = nullptr;
    for (auto& ce : core.edges)
        if (ce.interior.size() >= 2) e = &ce;
    REQUIRE(e != nullptr);
    CHECK_THROWS_AS(reduce_core_edge(c20, 10, e->interior, e->interior.front(),
                                     e->interior.back(), tiny),
                    Refused);

    // with the full library the same instance reduces cleanly
    auto full = kernelize_fes(c20, 10, shared_lib());
    CHECK(full.report.gadget_gaps.empty());
    CHECK(full.graph.n < 20);
}

TEST_CASE("kernelize random corpus preserves decisions") {
    std::mt19937 rng(909);
    int done = 0;
    for (int it = 0; it < 40; ++it) {
        int n = 8 + (int)(rng() % 7);
        int fes = 1 + (int)(rng() % 3);
        Graph g = random_graph_with_fes(rng, n, fes);
        auto kr = kernelize_fes(g, 0, shared_lib());
        if (!kr.report.gadget_gaps.empty()) continue;
        check_equisatisfiable(g, kr);
        ++done;
    }
    CHECK(done > 25);
}
