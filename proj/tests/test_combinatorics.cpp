#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "digrid/combinatorics.hpp"
#include "oracles.hpp"

using namespace digrid;

namespace {

bool is_monotone(const std::vector<int>& s) {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] <= s[i - 1]) inc = false;
        if (s[i] >= s[i - 1]) dec = false;
    }
    return s.size() <= 1 || inc || dec;
}

// longest monotone subsequence length by trying all subsequences
std::size_t lms_exhaustive(const std::vector<int>& seq) {
    std::size_t best = 0;
    const std::size_t n = seq.size();
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(seq[i]);
        if (is_monotone(s)) best = std::max(best, s.size());
    }
    return best;
}

}  // namespace

TEST_CASE("longest monotone subsequence basics") {
    CHECK(longest_monotone_subsequence({3, 1, 2}) == std::vector<int>{1, 2});
    std::vector<int> sorted{1, 2, 3, 4, 5};
    CHECK(longest_monotone_subsequence(sorted) == sorted);
    CHECK(longest_monotone_subsequence({}).empty());
    CHECK(longest_monotone_subsequence({7}) == std::vector<int>{7});
}

TEST_CASE("every length-5 permutation has a monotone subsequence of length >= 3") {
    std::vector<int> perm{0, 1, 2, 3, 4};
    do {
        auto s = longest_monotone_subsequence(perm);
        CHECK(is_monotone(s));
        CHECK(s.size() >= 3);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("monotone subsequence length matches exhaustive search up to 10") {
    std::mt19937_64 rng(777);
    for (int t = 0; t < 60; ++t) {
        int n = 1 + static_cast<int>(rng() % 10);
        std::vector<int> seq(n);
        std::iota(seq.begin(), seq.end(), 0);
        std::shuffle(seq.begin(), seq.end(), rng);
        auto s = longest_monotone_subsequence(seq);
        CHECK(is_monotone(s));
        CHECK(s.size() == lms_exhaustive(seq));
        CHECK(s.size() * s.size() >= seq.size());  // at least ceil(sqrt(n))
    }
}

namespace {

Digraph tournament_from_bits(int n, unsigned bits) {
    std::vector<std::pair<VertexId, VertexId>> arcs;
    int b = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++b)
            arcs.push_back((bits >> b) & 1 ? std::pair{i, j} : std::pair{j, i});
    return Digraph::from_edges(n, arcs);
}

Digraph transitive_tournament(int n) {
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) arcs.push_back({i, j});
    return Digraph::from_edges(n, arcs);
}

}  // namespace

TEST_CASE("transitive subtournament basics") {
    SUBCASE("already transitive") {
        auto r = transitive_subtournament(transitive_tournament(4), 4);
        REQUIRE(r.has_value());
        CHECK(r->size() == 4);
    }
    SUBCASE("3-cycle has no transitive 3 but any arc works for 2") {
        Digraph c3 = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
        CHECK(!transitive_subtournament(c3, 3).has_value());
        auto r = transitive_subtournament(c3, 2);
        REQUIRE(r.has_value());
        CHECK(r->size() == 2);
    }
    SUBCASE("non-tournament rejected") {
        Digraph missing = Digraph::from_edges(3, {{0, 1}});
        CHECK_THROWS_AS(transitive_subtournament(missing, 2), std::invalid_argument);
        Digraph doubled = Digraph::from_edges(2, {{0, 1}, {1, 0}});
        CHECK_THROWS_AS(transitive_subtournament(doubled, 2), std::invalid_argument);
    }
}

TEST_CASE("every tournament on 4 or 5 vertices contains a transitive 3") {
    for (int n : {4, 5}) {
        int pairs = n * (n - 1) / 2;
        for (unsigned bits = 0; bits < (1u << pairs); ++bits) {
            auto r = transitive_subtournament(tournament_from_bits(n, bits), 3);
            REQUIRE(r.has_value());
        }
    }
}

TEST_CASE("sampled 8-vertex tournaments contain a transitive 3 that verifies") {
    std::mt19937_64 rng(4711);
    for (int t = 0; t < 200; ++t) {
        unsigned bits = static_cast<unsigned>(rng());
        Digraph tr = tournament_from_bits(8, bits);
        auto r = transitive_subtournament(tr, 3);
        REQUIRE(r.has_value());
        Digraph sub = tr.induced(*r);
        for (const auto& comp : strong_components(sub)) CHECK(comp.size() == 1);
    }
}

TEST_CASE("clean clique or cover") {
    SUBCASE("empty labels give a clean clique") {
        LabeledClique lc;
        lc.n = 5;
        auto out = clean_clique_or_cover(lc, 3, 1, 1);
        REQUIRE(std::holds_alternative<CleanClique>(out));
        CHECK(std::get<CleanClique>(out).verts == std::vector<int>{0, 1, 2});
    }
    SUBCASE("K3 with opposite-vertex labels") {
        LabeledClique lc;
        lc.n = 3;
        lc.labels[{0, 1}] = {2};
        lc.labels[{0, 2}] = {1};
        lc.labels[{1, 2}] = {0};
        auto none = clean_clique_or_cover(lc, 3, 4, 2);
        CHECK(!std::holds_alternative<CleanClique>(none));
        auto pair = clean_clique_or_cover(lc, 2, 4, 2);
        REQUIRE(std::holds_alternative<CleanClique>(pair));
        auto got = std::get<CleanClique>(pair).verts;
        CHECK(got.size() == 2);
        CHECK(lc.label(got[0], got[1]).count(got[0]) == 0);
        CHECK(lc.label(got[0], got[1]).count(got[1]) == 0);
    }
    SUBCASE("one vertex labels all edges: cover branch") {
        LabeledClique lc;
        lc.n = 4;
        int m1 = 0;
        for (int i = 1; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                lc.labels[{i, j}] = {0};
                ++m1;
            }
        auto out = clean_clique_or_cover(lc, 4, m1, 1);
        REQUIRE(std::holds_alternative<LabelCover>(out));
        auto cover = std::get<LabelCover>(out);
        CHECK(cover.verts == std::vector<int>{0});
        CHECK(static_cast<int>(cover.edges.size()) == m1);
        for (auto [i, j] : cover.edges) CHECK(lc.label(i, j).count(0) == 1);
    }
    SUBCASE("invariant violation reported") {
        LabeledClique lc;
        lc.n = 3;
        lc.labels[{0, 1}] = {0};
        CHECK_THROWS_AS(clean_clique_or_cover(lc, 2, 1, 1), std::invalid_argument);
    }
    SUBCASE("zero budget exhausts") {
        LabeledClique lc;
        lc.n = 4;
        auto out = clean_clique_or_cover(lc, 3, 1, 1, 0);
        CHECK(std::holds_alternative<SearchExhausted>(out));
    }
    SUBCASE("clean outputs re-verify by direct inspection") {
        std::mt19937_64 rng(808);
        for (int t = 0; t < 40; ++t) {
            LabeledClique lc;
            lc.n = 5;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) {
                    std::set<int> ls;
                    for (int l = 0; l < 5; ++l)
                        if (l != i && l != j && rng() % 3 == 0) ls.insert(l);
                    if (!ls.empty()) lc.labels[{i, j}] = ls;
                }
            auto out = clean_clique_or_cover(lc, 3, 2, 2);
            if (std::holds_alternative<CleanClique>(out)) {
                auto& cc = std::get<CleanClique>(out).verts;
                for (std::size_t a = 0; a < cc.size(); ++a)
                    for (std::size_t b = a + 1; b < cc.size(); ++b)
                        for (int w : cc)
                            CHECK(lc.label(cc[a], cc[b]).count(w) == 0);
            } else if (std::holds_alternative<LabelCover>(out)) {
                auto& cover = std::get<LabelCover>(out);
                for (auto [i, j] : cover.edges)
                    for (int v : cover.verts) CHECK(lc.label(i, j).count(v) == 1);
            }
        }
    }
}
