#include "digrid/digraph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <set>

namespace digrid {

Digraph::Digraph(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : verts_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(verts_.begin(), verts_.end());
    verts_.erase(std::unique(verts_.begin(), verts_.end()), verts_.end());
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        if (edges_[i].id == edges_[i + 1].id)
            throw std::invalid_argument("duplicate edge id " + std::to_string(edges_[i].id));
    for (const Edge& e : edges_) {
        if (!std::binary_search(verts_.begin(), verts_.end(), e.tail) ||
            !std::binary_search(verts_.begin(), verts_.end(), e.head))
            throw std::invalid_argument("edge " + std::to_string(e.id) +
                                        " references missing vertex");
    }
    build_index();
}

Digraph Digraph::from_edges(int vertex_count,
                            const std::vector<std::pair<VertexId, VertexId>>& arcs) {
    std::vector<VertexId> vs(vertex_count);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<Edge> es;
    es.reserve(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i)
        es.push_back({static_cast<EdgeId>(i), arcs[i].first, arcs[i].second});
    return Digraph(std::move(vs), std::move(es));
}

void Digraph::build_index() {
    out_.assign(verts_.size(), {});
    in_.assign(verts_.size(), {});
    for (const Edge& e : edges_) {
        out_[dense_index(e.tail)].push_back(e.id);
        in_[dense_index(e.head)].push_back(e.id);
    }
}

bool Digraph::has_vertex(VertexId v) const {
    return std::binary_search(verts_.begin(), verts_.end(), v);
}

bool Digraph::has_edge(EdgeId e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                               [](const Edge& a, EdgeId id) { return a.id < id; });
    return it != edges_.end() && it->id == e;
}

const Edge& Digraph::edge(EdgeId e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                               [](const Edge& a, EdgeId id) { return a.id < id; });
    if (it == edges_.end() || it->id != e)
        throw std::invalid_argument("unknown edge " + std::to_string(e));
    return *it;
}

int Digraph::dense_index(VertexId v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
    if (it == verts_.end() || *it != v)
        throw std::invalid_argument("unknown vertex " + std::to_string(v));
    return static_cast<int>(it - verts_.begin());
}

const std::vector<EdgeId>& Digraph::out_edges(VertexId v) const { return out_[dense_index(v)]; }
const std::vector<EdgeId>& Digraph::in_edges(VertexId v) const { return in_[dense_index(v)]; }

Digraph Digraph::without_vertices(const std::vector<VertexId>& remove) const {
    std::set<VertexId> gone(remove.begin(), remove.end());
    std::vector<VertexId> vs;
    for (VertexId v : verts_)
        if (!gone.count(v)) vs.push_back(v);
    std::vector<Edge> es;
    for (const Edge& e : edges_)
        if (!gone.count(e.tail) && !gone.count(e.head)) es.push_back(e);
    return Digraph(std::move(vs), std::move(es));
}

Digraph Digraph::without_edge(EdgeId e) const {
    std::vector<Edge> es;
    for (const Edge& x : edges_)
        if (x.id != e) es.push_back(x);
    if (es.size() == edges_.size())
        throw std::invalid_argument("unknown edge " + std::to_string(e));
    return Digraph(verts_, std::move(es));
}

Digraph Digraph::induced(const std::vector<VertexId>& keep) const {
    std::set<VertexId> in(keep.begin(), keep.end());
    std::vector<VertexId> vs(in.begin(), in.end());
    for (VertexId v : vs)
        if (!has_vertex(v)) throw std::invalid_argument("unknown vertex");
    std::vector<Edge> es;
    for (const Edge& e : edges_)
        if (in.count(e.tail) && in.count(e.head)) es.push_back(e);
    return Digraph(std::move(vs), std::move(es));
}

Digraph Digraph::subgraph(const std::vector<VertexId>& verts,
                          const std::vector<EdgeId>& edges) const {
    std::set<VertexId> vs(verts.begin(), verts.end());
    std::vector<Edge> es;
    for (EdgeId id : std::set<EdgeId>(edges.begin(), edges.end())) {
        const Edge& e = edge(id);
        es.push_back(e);
        vs.insert(e.tail);
        vs.insert(e.head);
    }
    return Digraph(std::vector<VertexId>(vs.begin(), vs.end()), std::move(es));
}

bool Digraph::weakly_connected() const {
    if (verts_.empty()) return true;
    std::vector<char> seen(verts_.size(), 0);
    std::deque<int> q{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!q.empty()) {
        int i = q.front();
        q.pop_front();
        VertexId v = verts_[i];
        auto visit = [&](VertexId u) {
            int j = dense_index(u);
            if (!seen[j]) {
                seen[j] = 1;
                ++cnt;
                q.push_back(j);
            }
        };
        for (EdgeId e : out_[i]) visit(edge(e).head);
        for (EdgeId e : in_[i]) visit(edge(e).tail);
    }
    return cnt == verts_.size();
}

bool Digraph::strongly_connected() const {
    return strong_components(*this).size() <= 1;
}

bool DirectedPath::contains_vertex(VertexId v) const {
    return std::find(verts.begin(), verts.end(), v) != verts.end();
}

int DirectedPath::position_of(VertexId v) const {
    std::size_t n = circuit && verts.size() > 1 ? verts.size() - 1 : verts.size();
    for (std::size_t i = 0; i < n; ++i)
        if (verts[i] == v) return static_cast<int>(i);
    return -1;
}

DirectedPath DirectedPath::slice(int i, int j) const {
    DirectedPath p;
    p.verts.assign(verts.begin() + i, verts.begin() + j + 1);
    p.edges.assign(edges.begin() + i, edges.begin() + j);
    return p;
}

bool is_valid_path(const Digraph& d, const DirectedPath& p, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (p.verts.empty()) return fail("empty path");
    if (p.verts.size() != p.edges.size() + 1) return fail("vertex/edge count mismatch");
    for (VertexId v : p.verts)
        if (!d.has_vertex(v)) return fail("missing vertex " + std::to_string(v));
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (!d.has_edge(p.edges[i])) return fail("missing edge " + std::to_string(p.edges[i]));
        const Edge& e = d.edge(p.edges[i]);
        if (e.tail != p.verts[i] || e.head != p.verts[i + 1])
            return fail("edge " + std::to_string(e.id) + " does not chain");
    }
    std::set<VertexId> seen;
    std::size_t n = p.verts.size();
    if (p.circuit) {
        if (p.verts.front() != p.verts.back()) return fail("circuit does not close");
        if (n > 1) --n;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen.insert(p.verts[i]).second)
            return fail("repeated vertex " + std::to_string(p.verts[i]));
    return true;
}

bool check_euler_multiplicity(const Digraph& d, const EulerMultiplicity& em,
                              std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    for (const Edge& e : d.edges()) {
        auto it = em.multiplicity.find(e.id);
        if (it == em.multiplicity.end() || it->second < 1)
            return fail("edge " + std::to_string(e.id) + " lacks positive multiplicity");
    }
    if (em.multiplicity.size() != d.edge_count()) return fail("extraneous multiplicities");
    for (VertexId v : d.vertices()) {
        long in = 0, out = 0;
        for (EdgeId e : d.in_edges(v)) in += em.multiplicity.at(e);
        for (EdgeId e : d.out_edges(v)) out += em.multiplicity.at(e);
        if (in != out)
            return fail("vertex " + std::to_string(v) + " unbalanced");
        if (in > em.bound)
            return fail("vertex " + std::to_string(v) + " exceeds degree bound");
    }
    return true;
}

std::vector<std::vector<VertexId>> strong_components(const Digraph& d) {
    // Iterative Tarjan.
    const int n = static_cast<int>(d.vertex_count());
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<VertexId>> comps;
    int next = 0;

    struct Frame {
        int v;
        std::size_t ei;
    };
    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        std::vector<Frame> call{{s, 0}};
        index[s] = low[s] = next++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& outs = d.out_edges(d.vertices()[f.v]);
            if (f.ei < outs.size()) {
                int w = d.dense_index(d.edge(outs[f.ei]).head);
                ++f.ei;
                if (index[w] == -1) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<VertexId> comp;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(d.vertices()[w]);
                        if (w == f.v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

std::vector<VertexId> strong_component_of(const Digraph& d, VertexId v,
                                          const std::vector<VertexId>& removed) {
    Digraph sub = d.without_vertices(removed);
    if (!sub.has_vertex(v)) return {};
    for (auto& c : strong_components(sub))
        if (std::binary_search(c.begin(), c.end(), v)) return c;
    return {};
}

BoundarySets boundary_edges(const Digraph& d, const std::vector<VertexId>& x) {
    std::set<VertexId> in(x.begin(), x.end());
    for (VertexId v : x)
        if (!d.has_vertex(v)) throw std::invalid_argument("boundary_edges: unknown vertex");
    BoundarySets b;
    for (const Edge& e : d.edges()) {
        bool ht = in.count(e.head), tl = in.count(e.tail);
        if (ht && !tl) b.into.push_back(e.id);
        if (tl && !ht) b.outof.push_back(e.id);
    }
    return b;
}

namespace detail {

// Max flow with vertex splitting. Node 2i = v_in, 2i+1 = v_out. Vertex arcs
// carry capacity 1; all other arcs are uncapped so the min cut crosses only
// vertex arcs.
int disjoint_path_flow(const Digraph& d, const std::vector<VertexId>& a,
                       const std::vector<VertexId>& b, int want,
                       std::vector<DirectedPath>* paths_out,
                       std::vector<VertexId>* cut_out) {
    const int n = static_cast<int>(d.vertex_count());
    const int S = 2 * n, T = 2 * n + 1, N = 2 * n + 2;
    const int BIG = n + 2;

    struct Arc {
        int to, rev, cap;
        EdgeId eid;  // original edge, -1 for auxiliary arcs
    };
    std::vector<std::vector<Arc>> g(N);
    auto add = [&](int u, int v, int cap, EdgeId eid) {
        g[u].push_back({v, static_cast<int>(g[v].size()), cap, eid});
        g[v].push_back({u, static_cast<int>(g[u].size()) - 1, 0, eid});
    };

    std::set<VertexId> as(a.begin(), a.end()), bs(b.begin(), b.end());
    for (int i = 0; i < n; ++i) add(2 * i, 2 * i + 1, 1, -1);
    for (const Edge& e : d.edges()) {
        if (e.tail == e.head) continue;
        add(2 * d.dense_index(e.tail) + 1, 2 * d.dense_index(e.head), BIG, e.id);
    }
    for (VertexId v : as) add(S, 2 * d.dense_index(v), BIG, -1);
    for (VertexId v : bs) add(2 * d.dense_index(v) + 1, T, BIG, -1);

    int flow = 0;
    while (flow < want) {
        // BFS augmenting path, deterministic order.
        std::vector<int> prev_node(N, -1), prev_arc(N, -1);
        std::deque<int> q{S};
        prev_node[S] = S;
        while (!q.empty() && prev_node[T] == -1) {
            int u = q.front();
            q.pop_front();
            for (std::size_t i = 0; i < g[u].size(); ++i) {
                const Arc& arc = g[u][i];
                if (arc.cap > 0 && prev_node[arc.to] == -1) {
                    prev_node[arc.to] = u;
                    prev_arc[arc.to] = static_cast<int>(i);
                    q.push_back(arc.to);
                }
            }
        }
        if (prev_node[T] == -1) break;
        for (int v = T; v != S; v = prev_node[v]) {
            Arc& arc = g[prev_node[v]][prev_arc[v]];
            arc.cap -= 1;
            g[arc.to][arc.rev].cap += 1;
        }
        ++flow;
    }

    if (paths_out && flow >= want) {
        // Net flow on a forward arc equals the residual capacity of its
        // reverse arc. Walk flow from each used source, consuming as we go.
        paths_out->clear();
        auto net = [&](int u, std::size_t i) -> int {
            const Arc& arc = g[u][i];
            return g[arc.to][arc.rev].cap;
        };
        for (VertexId sv : as) {
            bool launched = false;
            for (std::size_t i = 0; i < g[S].size(); ++i)
                if (g[S][i].to == 2 * d.dense_index(sv) && net(S, i) > 0) {
                    launched = true;
                    g[S][i].cap += 1;
                    g[g[S][i].to][g[S][i].rev].cap -= 1;
                    break;
                }
            if (!launched) continue;
            DirectedPath p;
            p.verts.push_back(sv);
            while (!bs.count(p.verts.back())) {
                int uo = 2 * d.dense_index(p.verts.back()) + 1;
                bool advanced = false;
                for (std::size_t i = 0; i < g[uo].size(); ++i) {
                    Arc& arc = g[uo][i];
                    if (arc.eid >= 0 && arc.to % 2 == 0 && net(uo, i) > 0) {
                        arc.cap += 1;
                        g[arc.to][arc.rev].cap -= 1;
                        p.edges.push_back(arc.eid);
                        p.verts.push_back(d.vertices()[arc.to / 2]);
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) throw std::logic_error("flow decomposition failed");
            }
            paths_out->push_back(std::move(p));
        }
    }

    if (cut_out && flow < want) {
        // Min vertex cut: v with v_in reachable in residual but v_out not.
        std::vector<char> reach(N, 0);
        std::deque<int> q{S};
        reach[S] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (const Arc& arc : g[u])
                if (arc.cap > 0 && !reach[arc.to]) {
                    reach[arc.to] = 1;
                    q.push_back(arc.to);
                }
        }
        cut_out->clear();
        for (int i = 0; i < n; ++i)
            if (reach[2 * i] && !reach[2 * i + 1]) cut_out->push_back(d.vertices()[i]);
    }
    return flow;
}

}  // namespace detail

MengerResult menger_paths(const Digraph& d, std::vector<VertexId> a,
                          std::vector<VertexId> b, int k) {
    if (k <= 0) throw std::invalid_argument("menger_paths: k must be positive");
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (VertexId v : a)
        if (!d.has_vertex(v)) throw std::invalid_argument("menger_paths: unknown source");
    for (VertexId v : b)
        if (!d.has_vertex(v)) throw std::invalid_argument("menger_paths: unknown target");

    // Shared terminals are zero-length paths and belong to every separator.
    std::vector<VertexId> shared;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));

    MengerResult res;
    int need = k - static_cast<int>(shared.size());
    if (need <= 0) {
        res.linked = true;
        for (int i = 0; i < k; ++i) res.paths.push_back({{shared[i]}, {}, false});
        return res;
    }
    Digraph rest = d.without_vertices(shared);
    std::vector<VertexId> a2, b2;
    for (VertexId v : a)
        if (rest.has_vertex(v)) a2.push_back(v);
    for (VertexId v : b)
        if (rest.has_vertex(v)) b2.push_back(v);

    std::vector<DirectedPath> paths;
    std::vector<VertexId> cut;
    int flow = detail::disjoint_path_flow(rest, a2, b2, need, &paths, &cut);
    if (flow >= need) {
        res.linked = true;
        for (VertexId v : shared) res.paths.push_back({{v}, {}, false});
        for (auto& p : paths) res.paths.push_back(std::move(p));
        res.paths.resize(k);  // flow may route more than asked; keep exactly k
        return res;
    }
    res.linked = false;
    res.separator = shared;
    res.separator.insert(res.separator.end(), cut.begin(), cut.end());
    std::sort(res.separator.begin(), res.separator.end());
    return res;
}

namespace {

// Feasible circulation test: every edge carries multiplicity within
// [lo_e, hi_e], every vertex balanced with throughput <= bound.
bool circulation_feasible(const Digraph& d, int bound,
                          const std::map<EdgeId, std::pair<int, int>>& range,
                          std::map<EdgeId, int>* result) {
    const int n = static_cast<int>(d.vertex_count());
    // Nodes: 2i v_in, 2i+1 v_out, then super source/sink for lower bounds.
    const int S = 2 * n, T = 2 * n + 1, N = 2 * n + 2;
    struct Arc {
        int to, rev, cap;
        EdgeId eid;
    };
    std::vector<std::vector<Arc>> g(N);
    auto add = [&](int u, int v, int cap, EdgeId eid) {
        g[u].push_back({v, static_cast<int>(g[v].size()), cap, eid});
        g[v].push_back({u, static_cast<int>(g[u].size()) - 1, 0, eid});
    };
    std::vector<long> excess(N, 0);
    // Vertex throughput arc v_in -> v_out with cap = bound.
    for (int i = 0; i < n; ++i) add(2 * i, 2 * i + 1, bound, -1);
    // Edge u->v becomes u_out -> v_in, bounds [lo, hi].
    for (const Edge& e : d.edges()) {
        auto [lo, hi] = range.at(e.id);
        if (lo > hi) return false;
        int u = 2 * d.dense_index(e.tail) + 1, v = 2 * d.dense_index(e.head);
        add(u, v, hi - lo, e.id);
        excess[v] += lo;
        excess[u] -= lo;
    }
    long total = 0;
    for (int i = 0; i < N - 2; ++i) {
        if (excess[i] > 0) {
            add(S, i, static_cast<int>(excess[i]), -1);
            total += excess[i];
        } else if (excess[i] < 0) {
            add(i, T, static_cast<int>(-excess[i]), -1);
        }
    }
    // Max flow S->T (BFS augmenting).
    long flow = 0;
    while (true) {
        std::vector<int> pn(N, -1), pa(N, -1);
        std::deque<int> q{S};
        pn[S] = S;
        while (!q.empty() && pn[T] == -1) {
            int u = q.front();
            q.pop_front();
            for (std::size_t i = 0; i < g[u].size(); ++i)
                if (g[u][i].cap > 0 && pn[g[u][i].to] == -1) {
                    pn[g[u][i].to] = u;
                    pa[g[u][i].to] = static_cast<int>(i);
                    q.push_back(g[u][i].to);
                }
        }
        if (pn[T] == -1) break;
        int aug = INT32_MAX;
        for (int v = T; v != S; v = pn[v]) aug = std::min(aug, g[pn[v]][pa[v]].cap);
        for (int v = T; v != S; v = pn[v]) {
            Arc& arc = g[pn[v]][pa[v]];
            arc.cap -= aug;
            g[arc.to][arc.rev].cap += aug;
        }
        flow += aug;
    }
    if (flow != total) return false;
    if (result) {
        result->clear();
        for (const Edge& e : d.edges()) (*result)[e.id] = range.at(e.id).first;
        for (int u = 0; u < N - 2; ++u)
            for (const Arc& arc : g[u])
                if (arc.eid >= 0 && u % 2 == 1 && arc.to % 2 == 0) {
                    auto [lo, hi] = range.at(arc.eid);
                    (*result)[arc.eid] = lo + (hi - lo - arc.cap);
                }
    }
    return true;
}

}  // namespace

Digraph contract_edge_merge(const Digraph& d, EdgeId e, VertexId* merged_out) {
    const Edge& ce = d.edge(e);
    if (ce.tail == ce.head) throw std::invalid_argument("contract_edge_merge: loop edge");
    VertexId keep = std::min(ce.tail, ce.head), gone = std::max(ce.tail, ce.head);
    std::vector<VertexId> vs;
    for (VertexId v : d.vertices())
        if (v != gone) vs.push_back(v);
    std::vector<Edge> es;
    for (const Edge& x : d.edges()) {
        if (x.id == e) continue;
        Edge y = x;
        if (y.tail == gone) y.tail = keep;
        if (y.head == gone) y.head = keep;
        bool was_loop = x.tail == x.head;
        if (y.tail == y.head && !was_loop) continue;  // merge-created loop dropped
        es.push_back(y);
    }
    if (merged_out) *merged_out = keep;
    return Digraph(std::move(vs), std::move(es));
}

std::optional<EulerMultiplicity> eulerianize(const Digraph& d, int bound) {
    if (bound != 2 && bound != 4 && bound != 5 && bound != 6)
        throw std::invalid_argument("eulerianize: bound must be one of 2,4,5,6");
    if (!d.weakly_connected())
        throw std::invalid_argument("eulerianize: graph must be weakly connected");
    if (bound == 2 && !d.strongly_connected())
        throw std::invalid_argument("eulerianize: bound 2 requires strong connectivity");

    std::map<EdgeId, std::pair<int, int>> range;
    for (const Edge& e : d.edges()) range[e.id] = {1, bound};
    if (!circulation_feasible(d, bound, range, nullptr)) return std::nullopt;

    // Lexicographically smallest witness: pin edges in id order.
    for (const Edge& e : d.edges()) {
        for (int m = 1; m <= bound; ++m) {
            auto trial = range;
            trial[e.id] = {m, m};
            if (circulation_feasible(d, bound, trial, nullptr)) {
                range[e.id] = {m, m};
                break;
            }
        }
    }
    EulerMultiplicity em;
    em.bound = bound;
    std::map<EdgeId, int> mult;
    if (!circulation_feasible(d, bound, range, &mult))
        throw std::logic_error("eulerianize: pinned circulation vanished");
    em.multiplicity = std::move(mult);
    return em;
}

}  // namespace digrid
