// Brute-force reference implementations used to cross-check the library.
// Deliberately simple and independent of the implementations they verify.
#ifndef DIGRID_TEST_ORACLES_HPP
#define DIGRID_TEST_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "digrid/digraph.hpp"

namespace oracle {

using digrid::Digraph;
using digrid::DirectedPath;
using digrid::Edge;
using digrid::EdgeId;
using digrid::VertexId;

// Mutual-reachability partition via transitive closure.
inline std::vector<std::vector<VertexId>> scc(const Digraph& d) {
    const int n = static_cast<int>(d.vertex_count());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) reach[i][i] = 1;
    for (const Edge& e : d.edges()) reach[d.dense_index(e.tail)][d.dense_index(e.head)] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    std::vector<int> comp(n, -1);
    std::vector<std::vector<VertexId>> out;
    for (int i = 0; i < n; ++i) {
        if (comp[i] != -1) continue;
        std::vector<VertexId> c;
        for (int j = i; j < n; ++j)
            if (comp[j] == -1 && reach[i][j] && reach[j][i]) {
                comp[j] = static_cast<int>(out.size());
                c.push_back(d.vertices()[j]);
            }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

// All simple directed paths from s to some vertex of B avoiding `blocked`.
inline void simple_paths_from(const Digraph& d, VertexId s, const std::set<VertexId>& targets,
                              std::set<VertexId>& blocked, std::vector<VertexId>& cur,
                              const std::function<bool(const std::vector<VertexId>&)>& emit) {
    cur.push_back(s);
    blocked.insert(s);
    if (targets.count(s)) {
        if (!emit(cur)) {
            blocked.erase(s);
            cur.pop_back();
            return;
        }
    } else {
        for (EdgeId e : d.out_edges(s)) {
            VertexId h = d.edge(e).head;
            if (!blocked.count(h)) simple_paths_from(d, h, targets, blocked, cur, emit);
        }
    }
    blocked.erase(s);
    cur.pop_back();
}

// Does a system of k pairwise vertex-disjoint A->B paths exist?  Exhaustive
// over subsets of sources and simple path choices.
inline bool disjoint_paths_exist(const Digraph& d, std::vector<VertexId> a,
                                 std::vector<VertexId> b, int k) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::function<bool(std::size_t, int, const std::set<VertexId>&)> rec =
        [&](std::size_t idx, int need, const std::set<VertexId>& used) -> bool {
        if (need == 0) return true;
        if (idx >= a.size() || static_cast<int>(a.size() - idx) < need) return false;
        if (rec(idx + 1, need, used)) return true;  // a[idx] unused
        VertexId s = a[idx];
        if (used.count(s)) return false;
        std::set<VertexId> targets;
        for (VertexId t : b)
            if (!used.count(t)) targets.insert(t);
        bool found = false;
        std::set<VertexId> blocked(used);
        std::vector<VertexId> cur;
        simple_paths_from(d, s, targets, blocked, cur,
                          [&](const std::vector<VertexId>& path) {
                              std::set<VertexId> used2(used);
                              used2.insert(path.begin(), path.end());
                              if (rec(idx + 1, need - 1, used2)) {
                                  found = true;
                                  return false;  // stop enumeration
                              }
                              return true;
                          });
        return found;
    };
    return rec(0, k, {});
}

// Every directed A->B path meets C (including zero-length ones).
inline bool is_separator(const Digraph& d, const std::vector<VertexId>& a,
                         const std::vector<VertexId>& b, const std::vector<VertexId>& c) {
    std::set<VertexId> cs(c.begin(), c.end());
    for (VertexId v : a)
        for (VertexId w : b)
            if (v == w && !cs.count(v)) return false;
    Digraph rest = d.without_vertices(c);
    // BFS from surviving sources.
    std::set<VertexId> seen;
    std::vector<VertexId> stack;
    for (VertexId v : a)
        if (rest.has_vertex(v) && seen.insert(v).second) stack.push_back(v);
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : rest.out_edges(v)) {
            VertexId h = rest.edge(e).head;
            if (seen.insert(h).second) stack.push_back(h);
        }
    }
    for (VertexId w : b)
        if (rest.has_vertex(w) && seen.count(w)) return false;
    return true;
}

// Exhaustive eulerian-multiplicity search for tiny graphs.
inline bool euler_multiplicity_exists(const Digraph& d, int bound) {
    const auto& es = d.edges();
    std::vector<int> m(es.size(), 1);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == es.size()) {
            for (VertexId v : d.vertices()) {
                long in = 0, out = 0;
                for (std::size_t j = 0; j < es.size(); ++j) {
                    if (es[j].head == v) in += m[j];
                    if (es[j].tail == v) out += m[j];
                }
                if (in != out || in > bound) return false;
            }
            return true;
        }
        for (m[i] = 1; m[i] <= bound; ++m[i])
            if (rec(i + 1)) return true;
        m[i] = 1;
        return false;
    };
    return rec(0);
}

// Deterministic random digraph: n vertices, each ordered pair an arc with
// probability p (no loops).
inline Digraph random_digraph(std::mt19937_64& rng, int n, double p) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && u(rng) < p) arcs.push_back({i, j});
    return Digraph::from_edges(n, arcs);
}

// Deterministic random DAG: arcs only from lower to higher index.
inline Digraph random_dag(std::mt19937_64& rng, int n, double p) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < p) arcs.push_back({i, j});
    return Digraph::from_edges(n, arcs);
}

inline Digraph bidirected_clique(int n) {
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) arcs.push_back({i, j});
    return Digraph::from_edges(n, arcs);
}

inline Digraph directed_cycle(int n) {
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
    return Digraph::from_edges(n, arcs);
}

inline bool is_dag(const Digraph& d) {
    for (const auto& c : scc(d))
        if (c.size() > 1) return false;
    for (const Edge& e : d.edges())
        if (e.tail == e.head) return false;
    return true;
}

}  // namespace oracle

#endif
