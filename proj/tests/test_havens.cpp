#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "digrid/havens.hpp"
#include "haven_oracle.hpp"
#include "oracles.hpp"

using namespace digrid;

TEST_CASE("check_haven accepts hand-built certificates") {
    SUBCASE("3-cycle, order 2") {
        Digraph d = oracle::directed_cycle(3);
        HavenCertificate c;
        c.order = 2;
        c.table[{}] = 0;
        c.table[{0}] = 1;
        c.table[{1}] = 2;
        c.table[{2}] = 0;
        CHECK(check_haven(d, c).ok);
    }
    SUBCASE("bidirected K3, order 3") {
        Digraph d = oracle::bidirected_clique(3);
        HavenCertificate c;
        c.order = 3;
        c.table[{}] = 0;
        c.table[{0}] = 1;
        c.table[{1}] = 0;
        c.table[{2}] = 0;
        c.table[{0, 1}] = 2;
        c.table[{0, 2}] = 1;
        c.table[{1, 2}] = 0;
        CHECK(check_haven(d, c).ok);
    }
    SUBCASE("missing entry rejected") {
        Digraph d = oracle::directed_cycle(3);
        HavenCertificate c;
        c.order = 2;
        c.table[{}] = 0;
        c.table[{0}] = 1;
        c.table[{1}] = 2;
        auto rep = check_haven(d, c);
        REQUIRE(!rep.ok);
        CHECK(rep.violations[0].find("domain") != std::string::npos);
    }
    SUBCASE("axiom violation rejected") {
        Digraph d = Digraph::from_edges(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
        HavenCertificate c;
        c.order = 2;
        c.table[{}] = 0;
        c.table[{0}] = 2;  // jumps to the other digon: breaks the axiom
        c.table[{1}] = 0;
        c.table[{2}] = 0;
        c.table[{3}] = 0;
        auto rep = check_haven(d, c);
        REQUIRE(!rep.ok);
        bool axiom = false;
        for (auto& v : rep.violations)
            if (v.find("axiom") != std::string::npos) axiom = true;
        CHECK(axiom);
    }
}

TEST_CASE("no haven of order 3 in a 3-cycle (exhaustive both ways)") {
    Digraph d = oracle::directed_cycle(3);
    CHECK(!oracle::haven_exists(d, 3));
    auto res = haven_order(d, 3);
    CHECK(res.exact);
    CHECK(res.order == 2);
    CHECK(check_haven(d, res.certificate).ok);
}

TEST_CASE("haven_order on canonical families") {
    SUBCASE("DAGs have order 1") {
        std::mt19937_64 rng(2024);
        for (int t = 0; t < 12; ++t) {
            Digraph d = oracle::random_dag(rng, 3 + static_cast<int>(rng() % 6), 0.4);
            auto res = haven_order(d, 4);
            CHECK(res.order == 1);
            CHECK(res.exact);
            CHECK(check_haven(d, res.certificate).ok);
        }
    }
    SUBCASE("directed cycles have order 2") {
        for (int n = 3; n <= 7; ++n) {
            auto res = haven_order(oracle::directed_cycle(n), 4);
            CHECK(res.order == 2);
            CHECK(check_haven(oracle::directed_cycle(n), res.certificate).ok);
        }
    }
    SUBCASE("bidirected cliques have order k") {
        for (int k = 2; k <= 5; ++k) {
            auto res = haven_order(oracle::bidirected_clique(k), k + 1);
            CHECK(res.order == k);
            CHECK(check_haven(oracle::bidirected_clique(k), res.certificate).ok);
        }
    }
    SUBCASE("empty digraph has order 0") {
        CHECK(haven_order(Digraph{}, 3).order == 0);
    }
}

TEST_CASE("haven_order agrees with the exhaustive table oracle") {
    std::mt19937_64 rng(888);
    for (int t = 0; t < 25; ++t) {
        Digraph d = oracle::random_digraph(rng, 3 + static_cast<int>(rng() % 4), 0.35);
        auto res = haven_order(d, 4);
        REQUIRE(res.exact);
        CHECK(oracle::haven_exists(d, res.order));
        if (res.order < static_cast<int>(d.vertex_count()))
            CHECK(!oracle::haven_exists(d, res.order + 1));
    }
}

TEST_CASE("cover-pair checking equals all-pair checking") {
    std::mt19937_64 rng(55);
    int done = 0;
    while (done < 30) {
        Digraph d = oracle::random_digraph(rng, 3 + static_cast<int>(rng() % 3), 0.4);
        auto res = haven_order(d, 3);
        if (res.order < 2) continue;
        ++done;
        CHECK(check_haven(d, res.certificate).ok);
        CHECK(oracle::haven_valid_all_pairs(d, res.certificate.table, res.certificate.order));
        // mutate one entry; both checkers must agree on the verdict
        HavenCertificate bad = res.certificate;
        for (auto& [z, rep] : bad.table) {
            if (z.empty()) continue;
            auto comps = strong_components(d.without_vertices(z));
            if (comps.size() < 2) continue;
            for (const auto& c : comps)
                if (c.front() != rep) {
                    rep = c.front();
                    break;
                }
            break;
        }
        bool lib = check_haven(d, bad).ok;
        bool orc = oracle::haven_valid_all_pairs(d, bad.table, bad.order);
        CHECK(lib == orc);
    }
}

TEST_CASE("monotonicity: subgraph havens lift") {
    std::mt19937_64 rng(10101);
    for (int t = 0; t < 15; ++t) {
        Digraph d = oracle::random_digraph(rng, 4 + static_cast<int>(rng() % 4), 0.45);
        std::vector<VertexId> keep;
        for (VertexId v : d.vertices())
            if (rng() % 3 != 0) keep.push_back(v);
        if (keep.size() < 2) continue;
        Digraph sub = d.induced(keep);
        auto rs = haven_order(sub, 4);
        auto rd = haven_order(d, 4);
        REQUIRE(rd.exact);
        CHECK(rd.order >= rs.order);
        if (rs.order < 1) continue;
        // lift: enclosing strong component of the sub-certificate's choice
        HavenCertificate lifted;
        lifted.order = rs.order;
        bool liftable = true;
        for (auto zm : oracle::all_subsets(d.vertices(), rs.order)) {
            std::vector<VertexId> zsub;
            for (VertexId v : zm)
                if (sub.has_vertex(v)) zsub.push_back(v);
            auto it = rs.certificate.table.find(zsub);
            if (it == rs.certificate.table.end()) {
                liftable = false;
                break;
            }
            auto comp = strong_component_of(d, it->second, zm);
            if (comp.empty()) {
                liftable = false;
                break;
            }
            lifted.table[zm] = comp.front();
        }
        REQUIRE(liftable);
        CHECK(check_haven(d, lifted).ok);
    }
}

namespace {

// Three disjoint directed triangles as vertex members, three connecting
// triangles as edge members: a faithful representation of K3.
Representation k3_fixture() {
    std::vector<VertexId> vs;
    std::vector<Edge> es;
    EdgeId next = 0;
    auto triangle = [&](VertexId a, VertexId b, VertexId c) {
        Subdigraph s;
        s.verts = {a, b, c};
        for (auto [x, y] : {std::pair{a, b}, {b, c}, {c, a}}) {
            es.push_back({next, x, y});
            s.edges.push_back(next);
            ++next;
        }
        return s;
    };
    for (VertexId v : {0, 1, 2, 10, 11, 12, 20, 21, 22, 100, 101, 102}) vs.push_back(v);
    Representation rep;
    rep.vmembers = {triangle(0, 1, 2), triangle(10, 11, 12), triangle(20, 21, 22)};
    rep.emembers = {triangle(1, 11, 100), triangle(2, 22, 101), triangle(12, 21, 102)};
    rep.host = Digraph(vs, es);
    rep.pattern = oracle::bidirected_clique(3);
    rep.vmap = {0, 1, 2};
    rep.emap = {{0, 1}, {0, 2}, {1, 2}};
    rep.faithful = true;
    return rep;
}

}  // namespace

TEST_CASE("representation validation") {
    auto rep = k3_fixture();
    auto r = validate_representation(rep);
    INFO((r.violations.empty() ? "" : r.violations[0]));
    CHECK(r.ok);
    SUBCASE("unfaithful when an edge member meets a third vertex member") {
        auto bad = rep;
        bad.emembers[0].verts.push_back(20);  // now touches the third triangle
        bad.emembers[0].edges.push_back(
            [&] {  // add an arc 100 -> 20 and back to keep it strongly connected
                return -1;
            }());
        // simpler: direct check of the faithful clause via validate
        bad.emembers[0].edges.pop_back();
        auto v = validate_representation(bad);
        CHECK(!v.ok);
    }
}

TEST_CASE("haven transfer through a faithful K3 representation") {
    auto rep = k3_fixture();
    auto k3res = haven_order(rep.pattern, 3);
    REQUIRE(k3res.order == 3);
    auto cert = haven_from_representation(rep, k3res.certificate, 2);
    CHECK(cert.order == 2);
    auto chk = check_haven(rep.host, cert);
    INFO((chk.violations.empty() ? "" : chk.violations[0]));
    CHECK(chk.ok);
    CHECK(cert.table.count({}) == 1);

    SUBCASE("odd h rejected") {
        CHECK_THROWS_AS(haven_from_representation(rep, k3res.certificate, 1),
                        std::invalid_argument);
    }
    SUBCASE("unfaithful rejected") {
        auto bad = rep;
        bad.faithful = false;
        CHECK_THROWS_AS(haven_from_representation(bad, k3res.certificate, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("haven from pairwise-intersecting family") {
    // triangles (0,1,2), (0,3,4), (1,3,5): pairwise sharing, max cover 2
    std::vector<Edge> es;
    EdgeId next = 0;
    auto tri = [&](VertexId a, VertexId b, VertexId c) {
        Subdigraph s;
        s.verts = {a, b, c};
        for (auto [x, y] : {std::pair{a, b}, {b, c}, {c, a}}) {
            es.push_back({next, x, y});
            s.edges.push_back(next);
            ++next;
        }
        return s;
    };
    auto t1 = tri(0, 1, 2), t2 = tri(0, 3, 4), t3 = tri(1, 3, 5);
    Digraph d(std::vector<VertexId>{0, 1, 2, 3, 4, 5}, es);
    auto res = haven_from_intersecting_family(d, {t1, t2, t3}, 1);
    CHECK(res.certificate.order == 2);
    auto chk = check_haven(res.union_graph, res.certificate);
    INFO((chk.violations.empty() ? "" : chk.violations[0]));
    CHECK(chk.ok);

    SUBCASE("disjoint pair rejected") {
        auto t4 = tri(6, 7, 8);
        Digraph d2(std::vector<VertexId>{0, 1, 2, 3, 4, 5, 6, 7, 8}, es);
        CHECK_THROWS_WITH_AS(haven_from_intersecting_family(d2, {t1, t2, t4}, 1),
                             doctest::Contains("disjoint pair"), std::invalid_argument);
    }
    SUBCASE("3-covered vertex rejected") {
        auto t5 = tri(0, 1, 9);
        Digraph d3(std::vector<VertexId>{0, 1, 2, 3, 4, 5, 9}, es);
        CHECK_THROWS_WITH_AS(haven_from_intersecting_family(d3, {t1, t2, t5}, 1),
                             doctest::Contains("3-covered"), std::invalid_argument);
    }
    SUBCASE("too few members rejected") {
        CHECK_THROWS_WITH_AS(haven_from_intersecting_family(d, {t1, t2}, 1),
                             doctest::Contains("count"), std::invalid_argument);
    }
}

TEST_CASE("wall pattern carries the cross-rule haven") {
    for (int k : {2, 3}) {
        Digraph w = wall_pattern(k);
        auto cert = wall_haven_certificate(k);
        CHECK(cert.order == k);
        auto chk = check_haven(w, cert);
        INFO("k=" << k << " " << (chk.violations.empty() ? "" : chk.violations[0]));
        CHECK(chk.ok);
    }
}

TEST_CASE("certificate serialization round-trips") {
    Digraph d = oracle::bidirected_clique(3);
    auto res = haven_order(d, 3);
    auto cb = res.certificate.to_cert_block();
    auto back = HavenCertificate::from_cert_block(cb);
    CHECK(back.order == res.certificate.order);
    CHECK(back.table == res.certificate.table);
}

TEST_CASE("sampled checking accepts valid large-ish certificates") {
    Digraph w = wall_pattern(3);
    auto cert = wall_haven_certificate(3);
    HavenCheckOptions opts;
    opts.sample_pairs = 200;
    CHECK(check_haven(w, cert, opts).ok);
}
