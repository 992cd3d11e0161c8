#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "digrid/digraph.hpp"
#include "oracles.hpp"

using namespace digrid;

TEST_CASE("strong components: basics") {
    SUBCASE("single vertex") {
        Digraph d = Digraph::from_edges(1, {});
        auto cs = strong_components(d);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0] == std::vector<VertexId>{0});
    }
    SUBCASE("3-cycle is one component") {
        Digraph d = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
        auto cs = strong_components(d);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0] == std::vector<VertexId>{0, 1, 2});
    }
    SUBCASE("path gives singletons") {
        Digraph d = Digraph::from_edges(3, {{0, 1}, {1, 2}});
        auto cs = strong_components(d);
        CHECK(cs.size() == 3);
    }
    SUBCASE("empty digraph") {
        Digraph d;
        CHECK(strong_components(d).empty());
    }
}

TEST_CASE("strong components agree with mutual-reachability oracle") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        Digraph d = oracle::random_digraph(rng, n, 0.3);
        CHECK(strong_components(d) == oracle::scc(d));
    }
}

TEST_CASE("boundary edges") {
    SUBCASE("whole vertex set has empty boundary") {
        Digraph d = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
        auto b = boundary_edges(d, {0, 1, 2});
        CHECK(b.into.empty());
        CHECK(b.outof.empty());
    }
    SUBCASE("single edge into X") {
        Digraph d = Digraph::from_edges(2, {{0, 1}});
        auto b = boundary_edges(d, {1});
        CHECK(b.into == std::vector<EdgeId>{0});
        CHECK(b.outof.empty());
    }
    SUBCASE("one vertex of a 3-cycle") {
        Digraph d = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
        auto b = boundary_edges(d, {1});
        CHECK(b.into.size() == 1);
        CHECK(b.outof.size() == 1);
    }
}

TEST_CASE("menger: two already-disjoint paths") {
    Digraph d = Digraph::from_edges(4, {{0, 2}, {1, 3}});
    auto r = menger_paths(d, {0, 1}, {2, 3}, 2);
    REQUIRE(r.linked);
    REQUIRE(r.paths.size() == 2);
    std::set<VertexId> seen;
    for (auto& p : r.paths) {
        CHECK(is_valid_path(d, p));
        for (VertexId v : p.verts) CHECK(seen.insert(v).second);
    }
}

TEST_CASE("menger: bottleneck vertex yields separator") {
    // a1->m->b1 and a2->m->b2
    Digraph d = Digraph::from_edges(5, {{0, 2}, {2, 3}, {1, 2}, {2, 4}});
    auto r = menger_paths(d, {0, 1}, {3, 4}, 2);
    REQUIRE(!r.linked);
    CHECK(r.separator == std::vector<VertexId>{2});
    CHECK(oracle::is_separator(d, {0, 1}, {3, 4}, r.separator));
}

TEST_CASE("menger: bidirected K4 links any two disjoint pairs") {
    Digraph d = oracle::bidirected_clique(4);
    auto r = menger_paths(d, {0, 1}, {2, 3}, 2);
    REQUIRE(r.linked);
    CHECK(oracle::disjoint_paths_exist(d, {0, 1}, {2, 3}, 2));
}

TEST_CASE("menger: shared terminals count as zero-length paths") {
    Digraph d = Digraph::from_edges(3, {{0, 1}});
    auto r = menger_paths(d, {0, 2}, {2, 1}, 2);
    REQUIRE(r.linked);
    bool zero_at_2 = false;
    for (auto& p : r.paths)
        if (p.verts == std::vector<VertexId>{2}) zero_at_2 = true;
    CHECK(zero_at_2);
}

TEST_CASE("menger: k = 0 rejected") {
    Digraph d = Digraph::from_edges(1, {});
    CHECK_THROWS_AS(menger_paths(d, {0}, {0}, 0), std::invalid_argument);
}

TEST_CASE("menger branch agrees with exhaustive enumeration on random digraphs") {
    std::mt19937_64 rng(777);
    int checked = 0;
    while (checked < 200) {
        int n = 2 + static_cast<int>(rng() % 9);
        Digraph d = oracle::random_digraph(rng, n, 0.25);
        int k = 1 + static_cast<int>(rng() % 3);
        std::vector<VertexId> a, b;
        for (VertexId v : d.vertices()) {
            if (rng() % 3 == 0) a.push_back(v);
            if (rng() % 3 == 0) b.push_back(v);
        }
        if (a.empty() || b.empty()) continue;
        ++checked;
        auto r = menger_paths(d, a, b, k);
        bool oracle_says = oracle::disjoint_paths_exist(d, a, b, k);
        CHECK(r.linked == oracle_says);
        if (r.linked) {
            std::set<VertexId> seen;
            REQUIRE(r.paths.size() == static_cast<std::size_t>(k));
            for (auto& p : r.paths) {
                CHECK(is_valid_path(d, p));
                CHECK(std::count(a.begin(), a.end(), p.start()) == 1);
                CHECK(std::count(b.begin(), b.end(), p.finish()) == 1);
                for (VertexId v : p.verts) CHECK(seen.insert(v).second);
            }
        } else {
            CHECK(static_cast<int>(r.separator.size()) < k);
            CHECK(oracle::is_separator(d, a, b, r.separator));
        }
    }
}

TEST_CASE("eulerianize: directed 2-cycle at bound 2") {
    Digraph d = Digraph::from_edges(2, {{0, 1}, {1, 0}});
    auto em = eulerianize(d, 2);
    REQUIRE(em.has_value());
    CHECK(em->multiplicity.at(0) == 1);
    CHECK(em->multiplicity.at(1) == 1);
    CHECK(check_euler_multiplicity(d, *em));
}

TEST_CASE("eulerianize: out-degree 3 vertex fails bound 2") {
    Digraph d = Digraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 0}, {2, 0}, {3, 0}});
    CHECK(!eulerianize(d, 2).has_value());
    CHECK(!oracle::euler_multiplicity_exists(d, 2));
}

TEST_CASE("eulerianize: parallel digon balances with multiplicity 2") {
    // two parallel edges 0->1 plus one edge 1->0
    Digraph d(std::vector<VertexId>{0, 1},
              {Edge{0, 0, 1}, Edge{1, 0, 1}, Edge{2, 1, 0}});
    auto em = eulerianize(d, 2);
    REQUIRE(em.has_value());
    CHECK(em->multiplicity.at(0) == 1);
    CHECK(em->multiplicity.at(1) == 1);
    CHECK(em->multiplicity.at(2) == 2);
    CHECK(check_euler_multiplicity(d, *em));
    CHECK(oracle::euler_multiplicity_exists(d, 2));
}

TEST_CASE("eulerianize succeeds on every directed cycle") {
    for (int n = 2; n <= 8; ++n) {
        Digraph d = oracle::directed_cycle(n);
        auto em = eulerianize(d, 2);
        REQUIRE(em.has_value());
        CHECK(check_euler_multiplicity(d, *em));
    }
}

TEST_CASE("eulerianize: bad bound and connectivity preconditions") {
    Digraph d = Digraph::from_edges(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(eulerianize(d, 3), std::invalid_argument);
    Digraph two = Digraph::from_edges(2, {});
    CHECK_THROWS_AS(eulerianize(two, 4), std::invalid_argument);
    Digraph path = Digraph::from_edges(2, {{0, 1}});
    CHECK_THROWS_AS(eulerianize(path, 2), std::invalid_argument);
}

TEST_CASE("eulerianize agrees with exhaustive search on tiny graphs") {
    std::mt19937_64 rng(4242);
    int done = 0;
    while (done < 60) {
        int n = 2 + static_cast<int>(rng() % 3);
        Digraph d = oracle::random_digraph(rng, n, 0.5);
        if (d.edge_count() > 7 || !d.weakly_connected()) continue;
        ++done;
        for (int bound : {4, 6}) {
            auto em = eulerianize(d, bound);
            CHECK(em.has_value() == oracle::euler_multiplicity_exists(d, bound));
            if (em) CHECK(check_euler_multiplicity(d, *em));
        }
    }
}

TEST_CASE("path validation") {
    Digraph d = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    DirectedPath p{{0, 1, 2}, {0, 1}, false};
    CHECK(is_valid_path(d, p));
    DirectedPath c{{0, 1, 2, 0}, {0, 1, 2}, true};
    CHECK(is_valid_path(d, c));
    DirectedPath bad{{0, 2}, {0}, false};
    CHECK(!is_valid_path(d, bad));
    DirectedPath zero{{1}, {}, false};
    CHECK(is_valid_path(d, zero));
}
