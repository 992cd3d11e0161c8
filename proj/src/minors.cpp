#include "digrid/minors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>

namespace digrid {

bool is_butterfly_contractible(const Digraph& d, EdgeId e) {
    const Edge& ed = d.edge(e);
    if (ed.tail == ed.head) return false;
    return d.out_degree(ed.tail) == 1 || d.in_degree(ed.head) == 1;
}

Digraph butterfly_contract(const Digraph& d, EdgeId e) {
    const Edge& ed = d.edge(e);
    if (ed.tail == ed.head) throw LoopEdge("edge " + std::to_string(e) + " is a loop");
    if (!is_butterfly_contractible(d, e))
        throw NotContractible("edge " + std::to_string(e) + " is not butterfly contractible");
    return contract_edge_merge(d, e);
}

Digraph replay(const Digraph& host, const MinorModel& model) {
    Digraph g = host;
    for (const ScriptStep& st : model.steps) {
        switch (st.kind) {
            case StepKind::DeleteVertex:
                if (!g.has_vertex(st.id))
                    throw std::invalid_argument("replay: missing vertex " + std::to_string(st.id));
                g = g.without_vertices({st.id});
                break;
            case StepKind::DeleteEdge:
                g = g.without_edge(st.id);
                break;
            case StepKind::Contract:
                g = butterfly_contract(g, st.id);
                break;
        }
    }
    return g;
}

bool check_minor_model(const Digraph& host, const Digraph& pattern, const MinorModel& model,
                       std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    Digraph g;
    try {
        g = replay(host, model);
    } catch (const std::exception& e) {
        return fail(std::string("replay failed: ") + e.what());
    }
    if (g.vertex_count() != pattern.vertex_count()) return fail("vertex count mismatch");
    if (g.edge_count() != pattern.edge_count()) return fail("edge count mismatch");
    if (model.final_map.size() != g.vertex_count()) return fail("final map size mismatch");
    std::set<VertexId> image;
    for (VertexId v : g.vertices()) {
        auto it = model.final_map.find(v);
        if (it == model.final_map.end()) return fail("final map misses a surviving vertex");
        if (!pattern.has_vertex(it->second)) return fail("final map leaves the pattern");
        if (!image.insert(it->second).second) return fail("final map is not injective");
    }
    std::map<std::pair<VertexId, VertexId>, int> want, got;
    for (const Edge& e : pattern.edges()) want[{e.tail, e.head}]++;
    for (const Edge& e : g.edges())
        got[{model.final_map.at(e.tail), model.final_map.at(e.head)}]++;
    if (want != got) return fail("edge multiset mismatch under final map");
    return true;
}

namespace {

std::vector<int> state_key(const Digraph& g) {
    std::vector<int> key;
    key.reserve(1 + g.vertex_count() + 3 * g.edge_count());
    key.push_back(static_cast<int>(g.vertex_count()));
    for (VertexId v : g.vertices()) key.push_back(v);
    for (const Edge& e : g.edges()) {
        key.push_back(e.id);
        key.push_back(e.tail);
        key.push_back(e.head);
    }
    return key;
}

struct KeyHash {
    std::size_t operator()(const std::vector<int>& k) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : k) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Bijection g -> pattern matching edge multisets, smallest-id-first.
std::optional<std::map<VertexId, VertexId>> find_isomorphism(const Digraph& g,
                                                             const Digraph& pattern) {
    if (g.vertex_count() != pattern.vertex_count() || g.edge_count() != pattern.edge_count())
        return std::nullopt;
    const auto& gv = g.vertices();
    const auto& pv = pattern.vertices();
    const int n = static_cast<int>(gv.size());
    std::map<std::pair<VertexId, VertexId>, int> pmult;
    for (const Edge& e : pattern.edges()) pmult[{e.tail, e.head}]++;
    std::vector<int> assign(n, -1);
    std::vector<char> used(n, 0);

    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return true;
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            if (g.out_degree(gv[i]) != pattern.out_degree(pv[j]) ||
                g.in_degree(gv[i]) != pattern.in_degree(pv[j]))
                continue;
            // check edges among assigned vertices
            bool ok = true;
            for (int a = 0; a <= i && ok; ++a) {
                int pa = a == i ? j : assign[a];
                if (pa < 0) continue;
                int m1 = 0, m2 = 0, w1 = 0, w2 = 0;
                for (const Edge& e : g.edges()) {
                    if (e.tail == gv[i] && e.head == gv[a]) ++m1;
                    if (e.tail == gv[a] && e.head == gv[i]) ++m2;
                }
                auto it1 = pmult.find({pv[j], pv[pa]});
                auto it2 = pmult.find({pv[pa], pv[j]});
                w1 = it1 == pmult.end() ? 0 : it1->second;
                w2 = it2 == pmult.end() ? 0 : it2->second;
                if (a == i) {
                    if (m1 != w1) ok = false;  // loops
                } else if (m1 != w1 || m2 != w2) {
                    ok = false;
                }
            }
            if (!ok) continue;
            assign[i] = j;
            used[j] = 1;
            if (rec(i + 1)) return true;
            assign[i] = -1;
            used[j] = 0;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    std::map<VertexId, VertexId> out;
    for (int i = 0; i < n; ++i) out[gv[i]] = pv[assign[i]];
    return out;
}

}  // namespace

namespace {

struct BudgetHit {};

// Iterative deepening with a per-iteration depth memo and an admissible
// remaining-steps bound (every step removes at most one vertex).
struct MinorSearch {
    const Digraph& pattern;
    long budget;
    long visits = 0;
    bool cutoff = false;
    std::unordered_map<std::vector<int>, int, KeyHash> memo;
    std::vector<ScriptStep> path;
    MinorModel found;
    bool have = false;

    bool dfs(const Digraph& g, int depth, int limit) {
        if (++visits > budget) throw BudgetHit{};
        if (auto iso = find_isomorphism(g, pattern)) {
            found.steps = path;
            found.final_map = *iso;
            have = true;
            return true;
        }
        if (g.vertex_count() < pattern.vertex_count() ||
            g.edge_count() < pattern.edge_count())
            return false;
        int gap = static_cast<int>(g.vertex_count() - pattern.vertex_count());
        if (depth + std::max(gap, 1) > limit) {
            cutoff = true;
            return false;
        }
        auto key = state_key(g);
        auto it = memo.find(key);
        if (it != memo.end() && it->second <= depth) return false;
        memo[key] = depth;

        auto attempt = [&](Digraph&& child, ScriptStep step) {
            path.push_back(step);
            bool ok = dfs(child, depth + 1, limit);
            path.pop_back();
            return ok;
        };
        for (VertexId v : g.vertices())
            if (attempt(g.without_vertices({v}), {StepKind::DeleteVertex, v})) return true;
        for (const Edge& e : g.edges())
            if (attempt(g.without_edge(e.id), {StepKind::DeleteEdge, e.id})) return true;
        for (const Edge& e : g.edges())
            if (is_butterfly_contractible(g, e.id) &&
                attempt(butterfly_contract(g, e.id), {StepKind::Contract, e.id}))
                return true;
        return false;
    }
};

}  // namespace

MinorSearchResult find_butterfly_minor(const Digraph& host, const Digraph& pattern,
                                       long budget) {
    MinorSearchResult res;
    MinorSearch search{pattern, budget};
    const int max_limit =
        static_cast<int>(host.vertex_count() + host.edge_count()) + 1;
    try {
        for (int limit = 0; limit <= max_limit; ++limit) {
            search.cutoff = false;
            search.memo.clear();
            if (search.dfs(host, 0, limit)) {
                res.status = MinorSearchResult::Status::Found;
                res.model = search.found;
                res.states_explored = search.visits;
                return res;
            }
            if (!search.cutoff) break;  // space exhausted below this depth
        }
        res.status = MinorSearchResult::Status::Absent;
    } catch (const BudgetHit&) {
        res.status = MinorSearchResult::Status::Exhausted;
    }
    res.states_explored = search.visits;
    return res;
}

CylinderGrid generate_cylindrical_grid(int n) {
    if (n < 1) throw std::invalid_argument("generate_cylindrical_grid: n must be positive");
    const int L = 2 * n;
    auto vid = [&](int i, int j) { return i * L + j; };
    std::vector<VertexId> vs;
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < L; ++j) vs.push_back(vid(i, j));
    EdgeId next = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < L; ++j) es.push_back({next++, vid(i, j), vid(i, (j + 1) % L)});
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j < n; ++j) es.push_back({next++, vid(i, j), vid(i + 1, j)});
        for (int j = n; j < L; ++j) es.push_back({next++, vid(i + 1, j), vid(i, j)});
    }
    CylinderGrid out;
    out.graph = Digraph(std::move(vs), std::move(es));

    for (int i = 0; i < n; ++i) {
        DirectedPath c;
        c.circuit = true;
        for (int j = 0; j < L; ++j) {
            c.verts.push_back(vid(i, j));
            c.edges.push_back(i * L + j);
        }
        c.verts.push_back(vid(i, 0));
        out.witness.circuits.push_back(std::move(c));
    }
    out.witness.n = n;

    std::map<VertexId, std::pair<double, double>> xy;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < L; ++j) {
            double a = 2 * pi * j / L;
            double r = i + 1.0;
            xy[vid(i, j)] = {r * std::cos(a), r * std::sin(a)};
        }
    out.embedding = embed_from_coordinates(out.graph, xy, EmbedMode::Plain, {});
    return out;
}

SpokePaths canonical_spoke_paths(const CylinderGrid& g) {
    const int n = g.witness.n;
    const int L = 2 * n;
    SpokePaths sp;
    if (n < 2) return sp;
    auto vid = [&](int i, int j) { return i * L + j; };
    auto find_edge = [&](VertexId a, VertexId b) -> EdgeId {
        for (EdgeId e : g.graph.out_edges(a))
            if (g.graph.edge(e).head == b) return e;
        throw std::logic_error("canonical_spoke_paths: missing spoke");
    };
    for (int j = n; j < L; ++j) {  // inward chains: outer to inner
        DirectedPath p;
        p.verts.push_back(vid(n - 1, j));
        for (int i = n - 1; i > 0; --i) {
            p.edges.push_back(find_edge(vid(i, j), vid(i - 1, j)));
            p.verts.push_back(vid(i - 1, j));
        }
        sp.in_paths.push_back(std::move(p));
    }
    for (int j = 0; j < n; ++j) {  // outward chains: inner to outer
        DirectedPath p;
        p.verts.push_back(vid(0, j));
        for (int i = 0; i + 1 < n; ++i) {
            p.edges.push_back(find_edge(vid(i, j), vid(i + 1, j)));
            p.verts.push_back(vid(i + 1, j));
        }
        sp.out_paths.push_back(std::move(p));
    }
    return sp;
}

ValidationReport validate_grid_witness(const Digraph& d, const CylGridWitness& w) {
    ValidationReport rep;
    if (w.n < 1) {
        rep.fail("size: n must be positive");
        return rep;
    }
    const int L = 2 * w.n;
    if (static_cast<int>(w.circuits.size()) != w.n) {
        rep.fail("size: expected " + std::to_string(w.n) + " circuits");
        return rep;
    }
    for (int i = 0; i < w.n; ++i) {
        std::string why;
        if (!w.circuits[i].circuit || !is_valid_path(d, w.circuits[i], &why)) {
            rep.fail("circuit " + std::to_string(i) + ": " + (why.empty() ? "not a circuit" : why));
            return rep;
        }
        if (static_cast<int>(w.circuits[i].length()) != L)
            rep.fail("circuit " + std::to_string(i) + ": length != 2n");
    }
    std::set<VertexId> seen;
    for (const auto& c : w.circuits)
        for (std::size_t j = 0; j + 1 < c.verts.size(); ++j)
            if (!seen.insert(c.verts[j]).second) rep.fail("circuits are not vertex-disjoint");
    if (!rep.ok) return rep;

    auto has_arc = [&](VertexId a, VertexId b) {
        for (EdgeId e : d.out_edges(a))
            if (d.edge(e).head == b) return true;
        return false;
    };
    for (int i = 0; i + 1 < w.n; ++i) {
        for (int j = 1; j <= w.n; ++j)
            if (!has_arc(w.circuits[i].verts[j - 1], w.circuits[i + 1].verts[j - 1]))
                rep.fail("spoke-direction: missing up-spoke at circuit " + std::to_string(i) +
                         " position " + std::to_string(j));
        for (int j = w.n + 1; j <= L; ++j)
            if (!has_arc(w.circuits[i + 1].verts[j - 1], w.circuits[i].verts[j - 1]))
                rep.fail("spoke-direction: missing down-spoke at circuit " + std::to_string(i) +
                         " position " + std::to_string(j));
    }
    return rep;
}

bool hits_in_reverse(const DirectedPath& p, const DirectedPath& q) {
    std::vector<std::pair<int, int>> shared;  // (pos in p, pos in q)
    for (std::size_t i = 0; i < p.verts.size(); ++i) {
        int j = q.position_of(p.verts[i]);
        if (j >= 0) shared.push_back({static_cast<int>(i), j});
    }
    for (std::size_t a = 0; a < shared.size(); ++a)
        for (std::size_t b = a + 1; b < shared.size(); ++b) {
            bool p_later = shared[b].first > shared[a].first;
            bool q_later = shared[b].second > shared[a].second;
            if (shared[a].first != shared[b].first && p_later == q_later) return false;
        }
    return true;
}

ValidationReport validate_grid_witness(const Digraph& d, const AcyclicGridWitness& w) {
    ValidationReport rep;
    const int n = w.n;
    if (n < 1) {
        rep.fail("size: n must be positive");
        return rep;
    }
    if (static_cast<int>(w.horizontals.size()) != n ||
        static_cast<int>(w.verticals.size()) != n) {
        rep.fail("size: expected " + std::to_string(n) + " paths per family");
        return rep;
    }
    for (const auto* fam : {&w.horizontals, &w.verticals}) {
        std::set<VertexId> seen;
        for (const auto& p : *fam) {
            std::string why;
            if (!is_valid_path(d, p, &why)) {
                rep.fail("path: " + why);
                return rep;
            }
            for (VertexId v : p.verts)
                if (!seen.insert(v).second) {
                    rep.fail("family-disjoint: vertex " + std::to_string(v) + " reused");
                    return rep;
                }
        }
    }

    if (!w.bubble) {
        // exactly one shared vertex per pair, in order both ways
        std::vector<std::vector<VertexId>> cross(n, std::vector<VertexId>(n, -1));
        for (int vi = 0; vi < n; ++vi)
            for (int hj = 0; hj < n; ++hj) {
                std::vector<VertexId> shared;
                for (VertexId x : w.verticals[vi].verts)
                    if (w.horizontals[hj].contains_vertex(x)) shared.push_back(x);
                if (shared.size() != 1) {
                    rep.fail("exactly-one-vertex: vertical " + std::to_string(vi) +
                             " and horizontal " + std::to_string(hj) + " share " +
                             std::to_string(shared.size()) + " vertices");
                    continue;
                }
                cross[vi][hj] = shared[0];
            }
        if (!rep.ok) return rep;
        for (int vi = 0; vi < n; ++vi)
            for (int hj = 0; hj + 1 < n; ++hj)
                if (w.verticals[vi].position_of(cross[vi][hj]) >=
                    w.verticals[vi].position_of(cross[vi][hj + 1]))
                    rep.fail("vertical-order: vertical " + std::to_string(vi) +
                             " meets horizontals out of order");
        for (int hj = 0; hj < n; ++hj)
            for (int vi = 0; vi + 1 < n; ++vi)
                if (w.horizontals[hj].position_of(cross[vi][hj]) >=
                    w.horizontals[hj].position_of(cross[vi + 1][hj]))
                    rep.fail("horizontal-order: horizontal " + std::to_string(hj) +
                             " meets verticals out of order");
        return rep;
    }

    // bubble: verticals hit every horizontal, monotonically; all pairs hit in
    // reverse
    for (int vi = 0; vi < n; ++vi) {
        std::vector<int> hit_seq;
        for (VertexId x : w.verticals[vi].verts)
            for (int hj = 0; hj < n; ++hj)
                if (w.horizontals[hj].contains_vertex(x)) hit_seq.push_back(hj);
        std::set<int> hit(hit_seq.begin(), hit_seq.end());
        if (static_cast<int>(hit.size()) != n)
            rep.fail("bubble-coverage: vertical " + std::to_string(vi) +
                     " misses a horizontal");
        for (std::size_t i = 1; i < hit_seq.size(); ++i)
            if (hit_seq[i] < hit_seq[i - 1])
                rep.fail("bubble-monotone: vertical " + std::to_string(vi) +
                         " returns to a lower horizontal");
        for (int hj = 0; hj < n; ++hj)
            if (!hits_in_reverse(w.horizontals[hj], w.verticals[vi]))
                rep.fail("hits-in-reverse: vertical " + std::to_string(vi) + " and horizontal " +
                         std::to_string(hj));
    }
    return rep;
}

}  // namespace digrid
