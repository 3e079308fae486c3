#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "idsolve/test_cover.hpp"

using namespace idsolve;

namespace {

SetSystem make_sys(int u, std::vector<std::vector<int>> tests) {
    SetSystem s;
    s.universe = u;
    s.tests = std::move(tests);
    s.normalize();
    return s;
}

SetSystem random_sys(std::mt19937& rng, int u, int f) {
    std::bernoulli_distribution coin(0.4);
    SetSystem s;
    s.universe = u;
    for (int t = 0; t < f; ++t) {
        std::vector<int> items;
        for (int i = 0; i < u; ++i)
            if (coin(rng)) items.push_back(i);
        s.tests.push_back(items);
    }
    s.normalize();
    return s;
}

}  // namespace

TEST_CASE("aux graph") {
    auto s1 = make_sys(2, {{0}});
    auto a1 = aux_graph(s1);
    CHECK(a1.g.n == 3);
    CHECK(a1.g.edges() == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(a1.g.degree(a1.item_vertex[1]) == 0);

    auto s2 = make_sys(4, {});
    auto a2 = aux_graph(s2);
    CHECK(a2.g.n == 4);
    CHECK(a2.g.edge_count() == 0);

    auto s3 = make_sys(3, {{0}, {1}, {0, 1, 2}});
    auto a3 = aux_graph(s3);
    CHECK(a3.g.degree(0) == 1);
    CHECK(a3.g.degree(1) == 1);
    CHECK(a3.g.degree(2) == 3);
}

TEST_CASE("is_test_cover") {
    CHECK(is_test_cover(make_sys(1, {}), {}));
    CHECK(is_test_cover(make_sys(2, {{0}}), {0}));
    auto s = make_sys(3, {{0}, {1}, {0, 1, 2}});
    CHECK_FALSE(is_test_cover(s, {2}));
    CHECK(is_test_cover(s, {0, 1}));
    CHECK_THROWS_AS(is_test_cover(s, {7}), std::invalid_argument);
}

TEST_CASE("brute force tc") {
    auto s = make_sys(3, {{0}, {1}, {0, 1, 2}});
    auto r = brute_force_tc(s);
    REQUIRE(r.has_value());
    CHECK(r->size() == 2);

    // family that cannot separate two items
    CHECK_FALSE(brute_force_tc(make_sys(3, {{0, 1}, {0, 1, 2}})).has_value());

    // all singletons over 4 items: three tests needed
    auto sing = make_sys(4, {{0}, {1}, {2}, {3}});
    CHECK(brute_force_tc(sing)->size() == 3);

    SetSystem big;
    big.universe = 2;
    for (int i = 0; i < 25; ++i) big.tests.push_back({0});
    big.tests.push_back({1});
    big.normalize();
    // duplicates collapse below the cap
    CHECK(brute_force_tc(big, 20).has_value());
}

TEST_CASE("solve_tc basics") {
    auto s1 = make_sys(2, {{0}});
    auto r1 = solve_tc(s1, 1);
    REQUIRE(r1.has_value());
    CHECK(r1->vertices == std::vector<int>{0});

    auto s2 = make_sys(3, {{0}, {1}, {0, 1, 2}});
    CHECK_FALSE(solve_tc(s2, 1).has_value());
    auto r2 = solve_tc(s2, 2);
    REQUIRE(r2.has_value());
    CHECK(r2->size() == 2);
    CHECK(is_test_cover(s2, r2->vertices));

    // two items missing from every test
    CHECK_FALSE(solve_tc(make_sys(4, {{0}, {1}}), 4).has_value());

    // duplicate tests: the reported witness uses the lowest original index
    auto dup = make_sys(2, {{1}, {0}, {0}});
    auto rd = solve_tc(dup, 1);
    REQUIRE(rd.has_value());
    CHECK(rd->vertices == std::vector<int>{0});
}

TEST_CASE("oracle sweep and Bondy bound") {
    std::mt19937 rng(6060);
    int separable = 0;
    for (int it = 0; it < 60; ++it) {
        int u = 2 + (int)(rng() % 6);
        int f = 1 + (int)(rng() % 14);
        SetSystem s = random_sys(rng, u, f);
        auto exact = brute_force_tc(s);
        auto got = tc_optimum(s);
        REQUIRE(got.has_value() == exact.has_value());
        if (exact) {
            CHECK(got->size() == exact->size());
            CHECK(is_test_cover(s, got->vertices));
            CHECK(exact->size() <= u - 1);  // Bondy bound
            ++separable;
            // decisions at every k via the optimum step function
            for (int k = 0; k <= u; ++k) {
                auto dec = solve_tc(s, k);
                CHECK(dec.has_value() == (exact->size() <= k));
                if (dec) CHECK(dec->size() <= k);
            }
        } else {
            CHECK_FALSE(solve_tc(s, u).has_value());
        }
    }
    CHECK(separable > 15);
}

TEST_CASE("separation equals identity of the induced partition on items") {
    std::mt19937 rng(7171);
    for (int it = 0; it < 60; ++it) {
        int u = 2 + (int)(rng() % 5);
        SetSystem s = random_sys(rng, u, 1 + (int)(rng() % 8));
        AuxGraph aux = aux_graph(s);
        std::vector<int> chosen;
        for (int t = 0; t < (int)s.tests.size(); ++t)
            if (rng() % 2) chosen.push_back(t);
        Bitset cv(aux.g.n);
        for (int t : chosen) cv.set(t);
        CHECK(is_test_cover(s, chosen) ==
              induced_partition(aux.item_vertex, cv, aux.g).is_identity());
    }
}

TEST_CASE("set system text round trip") {
    std::mt19937 rng(42);
    for (int it = 0; it < 10; ++it) {
        SetSystem s = random_sys(rng, 5, 6);
        CHECK(write_set_system(parse_set_system_string(write_set_system(s))) ==
              write_set_system(s));
    }
    CHECK_THROWS_AS(parse_set_system_string("u 2 1\nt 3\n"), ParseError);
    CHECK_THROWS_AS(parse_set_system_string("t 1\n"), ParseError);
}
