#include <set>

#include "diagpack/symmetrize.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace diagpack;
using namespace diagpack::testing;

namespace {

void check_simple_undirected(const SymmetrizedGraph& g) {
    for (int v = 0; v < g.m; ++v) {
        for (int w : g.adj[v]) {
            CHECK(v != w);
            CHECK(std::binary_search(g.adj[w].begin(), g.adj[w].end(), v));
        }
        CHECK(std::adjacent_find(g.adj[v].begin(), g.adj[v].end()) == g.adj[v].end());
    }
}

}  // namespace

TEST_CASE("pattern-sum graph of a symmetric matrix keeps its off-diagonal pairs") {
    PatternMatrix A = PatternMatrix::from_coords(
        4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}, {1, 1, 1.0}});
    SymmetrizedGraph g = symmetrize(A, SymMode::PatternSum);
    CHECK(g.m == 4);
    CHECK(g.adj[0] == std::vector<int>{1});
    CHECK(g.adj[1] == std::vector<int>{0});  // the self-loop at (1,1) is dropped
    CHECK(g.adj[2] == std::vector<int>{3});
    check_simple_undirected(g);
}

TEST_CASE("bipartite graph of the toy pattern has 14 vertices and 11 edges") {
    SymmetrizedGraph g = symmetrize(toy7x7(), SymMode::Bipartite);
    CHECK(g.m == 14);
    long edges = 0;
    for (int v = 0; v < g.m; ++v) edges += g.degree(v);
    CHECK(edges / 2 == 11);
    for (int v = 0; v < 7; ++v)
        for (int w : g.adj[v]) CHECK(w >= 7);
    check_simple_undirected(g);
}

TEST_CASE("pattern-sum equals the union oracle on random matrices") {
    Rng rng(21);
    for (int t = 0; t < 25; ++t) {
        PatternMatrix A = random_pattern(rng, 8, 0.3);
        SymmetrizedGraph g = symmetrize(A, SymMode::PatternSum);
        std::set<std::pair<int, int>> expected;
        for (const Coord& c : A.coords()) {
            if (c.row == c.col) continue;
            expected.insert({std::min(c.row, c.col), std::max(c.row, c.col)});
        }
        std::set<std::pair<int, int>> got;
        for (int v = 0; v < g.m; ++v)
            for (int w : g.adj[v])
                if (v < w) got.insert({v, w});
        CHECK(expected == got);
        check_simple_undirected(g);
    }
}

TEST_CASE("pattern-sum graph is transpose-invariant") {
    Rng rng(23);
    PatternMatrix A = random_pattern(rng, 7, 0.3);
    std::vector<Coord> t;
    for (const Coord& c : A.coords()) t.push_back({c.col, c.row, c.val});
    PatternMatrix At = PatternMatrix::from_coords(7, t);
    CHECK(symmetrize(A, SymMode::PatternSum).adj == symmetrize(At, SymMode::PatternSum).adj);
}

TEST_CASE("split_bipartite_order") {
    SUBCASE("identity order gives identity permutations") {
        std::vector<int> order(10);
        for (int i = 0; i < 10; ++i) order[i] = i;
        auto [pr, pc] = split_bipartite_order(order, 5);
        CHECK(pr == Permutation::identity(5));
        CHECK(pc == Permutation::identity(5));
    }
    SUBCASE("interleaving preserves relative order") {
        std::vector<int> order;
        for (int i = 0; i < 5; ++i) {
            order.push_back(i);
            order.push_back(5 + i);
        }
        auto [pr, pc] = split_bipartite_order(order, 5);
        CHECK(pr == Permutation::identity(5));
        CHECK(pc == Permutation::identity(5));
    }
    SUBCASE("matches the filter-and-rank oracle on random orders") {
        Rng rng(29);
        for (int t = 0; t < 20; ++t) {
            Permutation shuffled = Permutation::random(10, rng);
            std::vector<int> order = shuffled.inverse;  // a random sequence of the 10 vertices
            auto [pr, pc] = split_bipartite_order(order, 5);
            int next_r = 0, next_c = 0;
            for (int v : order) {
                if (v < 5) CHECK(pr.forward[v] == next_r++);
                else CHECK(pc.forward[v - 5] == next_c++);
            }
        }
    }
    SUBCASE("rejects non-bijections") {
        CHECK_THROWS_AS(split_bipartite_order({0, 0, 1, 2}, 2), std::invalid_argument);
        CHECK_THROWS_AS(split_bipartite_order({0, 1, 2}, 2), std::invalid_argument);
    }
}

TEST_CASE("components are ordered by decreasing size") {
    // two components: a triangle {0,1,2} and an edge {3,4}
    PatternMatrix A = PatternMatrix::from_coords(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {3, 4, 1.0}});
    SymmetrizedGraph g = symmetrize(A, SymMode::PatternSum);
    auto comps = components_by_size(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<int>{0, 1, 2});
    CHECK(comps[1] == std::vector<int>{3, 4});
}
