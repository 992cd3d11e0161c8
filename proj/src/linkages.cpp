#include "digrid/linkages.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace digrid {

VertexId Linkage::matched(VertexId source) const {
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (sources[i] == source) return paths[i].finish();
    throw std::invalid_argument("linkage: unknown source " + std::to_string(source));
}

std::map<VertexId, VertexId> Linkage::matching() const {
    std::map<VertexId, VertexId> m;
    for (std::size_t i = 0; i < sources.size(); ++i) m[sources[i]] = paths[i].finish();
    return m;
}

Linkage Linkage::restricted(const std::vector<VertexId>& keep_sources) const {
    Linkage out;
    std::set<VertexId> keep(keep_sources.begin(), keep_sources.end());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!keep.count(sources[i])) continue;
        out.sources.push_back(sources[i]);
        out.paths.push_back(paths[i]);
        out.targets.push_back(paths[i].finish());
    }
    return out;
}

bool validate_linkage(const Digraph& d, const Linkage& l, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (l.sources.size() != l.paths.size()) return fail("one path per source required");
    std::set<VertexId> seen;
    std::set<VertexId> hit_targets;
    std::set<VertexId> targets(l.targets.begin(), l.targets.end());
    if (targets.size() != l.targets.size()) return fail("duplicate targets");
    for (std::size_t i = 0; i < l.paths.size(); ++i) {
        std::string pwhy;
        if (!is_valid_path(d, l.paths[i], &pwhy)) return fail("path " + std::to_string(i) + ": " + pwhy);
        if (l.paths[i].start() != l.sources[i]) return fail("path starts off its source");
        if (!targets.count(l.paths[i].finish())) return fail("path finishes outside targets");
        if (!hit_targets.insert(l.paths[i].finish()).second)
            return fail("two paths share a target");
        for (VertexId v : l.paths[i].verts)
            if (!seen.insert(v).second) return fail("paths share vertex " + std::to_string(v));
    }
    if (hit_targets.size() != targets.size()) return fail("matching is not onto the targets");
    return true;
}

Linkage linkage_from_menger(const Digraph& d, const std::vector<VertexId>& a,
                            const std::vector<VertexId>& b) {
    auto res = menger_paths(d, a, b, static_cast<int>(a.size()));
    if (!res.linked)
        throw std::invalid_argument("linkage_from_menger: sets are not linked");
    Linkage l;
    l.targets = b;
    std::sort(l.targets.begin(), l.targets.end());
    l.targets.erase(std::unique(l.targets.begin(), l.targets.end()), l.targets.end());
    // order paths by source
    std::sort(res.paths.begin(), res.paths.end(),
              [](const DirectedPath& p, const DirectedPath& q) { return p.start() < q.start(); });
    for (auto& p : res.paths) {
        l.sources.push_back(p.start());
        l.paths.push_back(std::move(p));
    }
    l.targets.clear();
    for (const auto& p : l.paths) l.targets.push_back(p.finish());
    return l;
}

namespace {

// subset masks of 1..2^k-1 grouped by popcount
std::vector<std::pair<unsigned, unsigned>> equal_size_pairs(int k) {
    std::vector<std::vector<unsigned>> by_size(k + 1);
    for (unsigned m = 1; m < (1u << k); ++m)
        by_size[std::popcount(m)].push_back(m);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (int s = 1; s <= k; ++s)
        for (unsigned ma : by_size[s])
            for (unsigned mb : by_size[s]) pairs.push_back({ma, mb});
    return pairs;
}

std::vector<VertexId> unmask_subset(const std::vector<VertexId>& x, unsigned m) {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (m & (1u << i)) out.push_back(x[i]);
    return out;
}

}  // namespace

LinkedSetResult is_linked_set(const Digraph& d, const std::vector<VertexId>& x, long budget) {
    LinkedSetResult res;
    std::vector<VertexId> xs(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (VertexId v : xs)
        if (!d.has_vertex(v)) throw std::invalid_argument("is_linked_set: unknown vertex");
    const int k = static_cast<int>(xs.size());
    if (k == 0) {
        res.linked = true;
        return res;
    }
    if (k > 20) throw std::invalid_argument("is_linked_set: set too large to enumerate");
    auto pairs = equal_size_pairs(k);
    if (static_cast<long>(pairs.size()) > budget) {
        pairs.resize(budget);
        res.exhausted = true;
    }

    const long npairs = static_cast<long>(pairs.size());
    long first_bad = npairs;
    std::vector<VertexId> bad_sep;
#ifdef _OPENMP
#pragma omp parallel
    {
        long local_bad = npairs;
        std::vector<VertexId> local_sep;
#pragma omp for schedule(dynamic, 16)
        for (long i = 0; i < npairs; ++i) {
            if (i >= local_bad) continue;
            auto a = unmask_subset(xs, pairs[i].first);
            auto b = unmask_subset(xs, pairs[i].second);
            auto m = menger_paths(d, a, b, static_cast<int>(a.size()));
            if (!m.linked && i < local_bad) {
                local_bad = i;
                local_sep = m.separator;
            }
        }
#pragma omp critical
        {
            if (local_bad < first_bad) {
                first_bad = local_bad;
                bad_sep = local_sep;
            }
        }
    }
#else
    for (long i = 0; i < npairs; ++i) {
        auto a = unmask_subset(xs, pairs[i].first);
        auto b = unmask_subset(xs, pairs[i].second);
        auto m = menger_paths(d, a, b, static_cast<int>(a.size()));
        if (!m.linked) {
            first_bad = i;
            bad_sep = m.separator;
            break;
        }
    }
#endif
    if (first_bad < npairs) {
        res.linked = false;
        res.exhausted = false;
        res.a = unmask_subset(xs, pairs[first_bad].first);
        res.b = unmask_subset(xs, pairs[first_bad].second);
        res.separator = bad_sep;
        return res;
    }
    res.linked = !res.exhausted;
    return res;
}

std::vector<VertexId> extract_linked_set(const Digraph& d, const HavenOracle& haven, int n) {
    if (n < 1) throw std::invalid_argument("extract_linked_set: n must be positive");
    if (haven.order() < 3 * n)
        throw std::invalid_argument("extract_linked_set: haven order below 3n");
    const auto& vs = d.vertices();
    const int nv = static_cast<int>(vs.size());

    // enumerate subsets of size <= 2n, canonical order
    std::vector<std::vector<VertexId>> candidates;
    std::vector<VertexId> cur;
    std::function<void(int)> rec = [&](int start) {
        candidates.push_back(cur);
        if (static_cast<int>(cur.size()) == 2 * n) return;
        for (int i = start; i < nv; ++i) {
            cur.push_back(vs[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });

    const long m = static_cast<long>(candidates.size());
    std::vector<long> bsize(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (long i = 0; i < m; ++i)
        bsize[i] = static_cast<long>(haven.component(candidates[i]).size());

    long best = 0;
    for (long i = 1; i < m; ++i) {
        auto key = [&](long j) {
            return std::tuple<long, std::size_t, const std::vector<VertexId>&>(
                bsize[j], candidates[j].size(), candidates[j]);
        };
        if (key(i) < key(best)) best = i;
    }
    auto x = candidates[best];
    if (static_cast<int>(x.size()) != 2 * n)
        throw std::logic_error("extract_linked_set: extremal set has unexpected size " +
                               std::to_string(x.size()));
    auto chk = is_linked_set(d, x);
    if (!chk.linked)
        throw std::logic_error("extract_linked_set: extremal set failed the linkage check");
    return x;
}

Monotonicity classify_monotone(const Linkage& l, const std::vector<VertexId>& order_a,
                               const std::vector<VertexId>& order_b) {
    std::set<VertexId> sa(l.sources.begin(), l.sources.end());
    std::set<VertexId> sb;
    for (const auto& p : l.paths) sb.insert(p.finish());
    if (std::set<VertexId>(order_a.begin(), order_a.end()) != sa ||
        std::set<VertexId>(order_b.begin(), order_b.end()) != sb)
        throw std::invalid_argument("classify_monotone: orders must cover the linkage");
    auto pos_b = [&](VertexId v) {
        return std::find(order_b.begin(), order_b.end(), v) - order_b.begin();
    };
    auto f = l.matching();
    bool inc = true, dec = true;
    for (std::size_t i = 0; i + 1 < order_a.size(); ++i)
        for (std::size_t j = i + 1; j < order_a.size(); ++j) {
            auto pi = pos_b(f.at(order_a[i])), pj = pos_b(f.at(order_a[j]));
            if (pi > pj) inc = false;
            if (pi < pj) dec = false;
        }
    if (inc) return Monotonicity::Increasing;
    if (dec) return Monotonicity::Decreasing;
    return Monotonicity::Neither;
}

PairRelation pair_relation(const Linkage& fwd, const Linkage& bwd) {
    std::set<VertexId> a(fwd.sources.begin(), fwd.sources.end());
    std::set<VertexId> b(bwd.sources.begin(), bwd.sources.end());
    std::set<VertexId> fa;
    for (const auto& p : fwd.paths) fa.insert(p.finish());
    std::set<VertexId> ba;
    for (const auto& p : bwd.paths) ba.insert(p.finish());
    if (fa != b || ba != a) throw std::invalid_argument("pair_relation: mismatched sets");

    auto f = fwd.matching(), g = bwd.matching();
    std::map<VertexId, VertexId> sigma;
    for (VertexId v : a) sigma[v] = g.at(f.at(v));
    bool identity = true;
    for (auto& [v, w] : sigma)
        if (v != w) identity = false;
    if (identity) return PairRelation::Agree;
    bool involution = true;
    int fixed = 0;
    for (auto& [v, w] : sigma) {
        if (sigma.at(w) != v) involution = false;
        if (v == w) ++fixed;
    }
    if (involution && fixed <= 1) return PairRelation::Cross;
    return PairRelation::Neither;
}

namespace detail {

bool enumerate_disjoint_systems(const Digraph& d, const std::vector<VertexId>& a,
                                const std::vector<VertexId>& b, long& budget,
                                const std::function<bool(const std::vector<DirectedPath>&)>& cb) {
    std::set<VertexId> targets(b.begin(), b.end());
    std::vector<DirectedPath> system;
    std::set<VertexId> used;
    bool stopped = false;

    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (--budget < 0) return false;
        if (i == a.size()) {
            if (!cb(system)) stopped = true;
            return !stopped;
        }
        VertexId s = a[i];
        if (used.count(s)) return false;
        // DFS over simple paths from s into an unused target
        std::vector<std::pair<VertexId, std::size_t>> stack;
        std::vector<VertexId> cur{s};
        std::function<bool(VertexId)> walk = [&](VertexId v) -> bool {
            if (--budget < 0) return false;
            used.insert(v);
            if (targets.count(v)) {
                DirectedPath p;
                p.verts = cur;
                for (std::size_t q = 0; q + 1 < cur.size(); ++q) {
                    for (EdgeId e : d.out_edges(cur[q]))
                        if (d.edge(e).head == cur[q + 1]) {
                            p.edges.push_back(e);
                            break;
                        }
                }
                bool target_free = true;
                for (const auto& sp : system)
                    if (sp.finish() == v) target_free = false;
                if (target_free) {
                    system.push_back(p);
                    if (!rec(i + 1)) {
                        used.erase(v);
                        return false;
                    }
                    system.pop_back();
                }
            }
            for (EdgeId e : d.out_edges(v)) {
                VertexId h = d.edge(e).head;
                if (used.count(h)) continue;
                cur.push_back(h);
                if (!walk(h)) {
                    cur.pop_back();
                    used.erase(v);
                    return false;
                }
                cur.pop_back();
            }
            used.erase(v);
            return true;
        };
        bool ok = walk(s);
        return ok && !stopped;
    };
    bool complete = rec(0);
    return complete && budget >= 0;
}

}  // namespace detail

namespace {

// Try to certify an Agree or Cross pair on a fixed (a2, b2) via composed
// permutations of menger linkages.
std::optional<LinkmatchResult> sigma_probe(const Digraph& d, const std::vector<VertexId>& a,
                                           const std::vector<VertexId>& b, int n) {
    auto fa = menger_paths(d, a, b, static_cast<int>(a.size()));
    if (!fa.linked) return std::nullopt;
    auto fb = menger_paths(d, b, a, static_cast<int>(b.size()));
    if (!fb.linked) return std::nullopt;
    Linkage fwd;
    for (auto& p : fa.paths) {
        fwd.sources.push_back(p.start());
        fwd.targets.push_back(p.finish());
        fwd.paths.push_back(p);
    }
    Linkage bwd;
    for (auto& p : fb.paths) {
        bwd.sources.push_back(p.start());
        bwd.targets.push_back(p.finish());
        bwd.paths.push_back(p);
    }
    auto f = fwd.matching(), g = bwd.matching();
    // fixed points and 2-cycles of g(f(.))
    std::vector<VertexId> fixed;
    std::vector<std::pair<VertexId, VertexId>> twocycles;
    std::set<VertexId> in_cycle;
    for (VertexId v : a) {
        VertexId w = g.at(f.at(v));
        if (w == v) {
            fixed.push_back(v);
        } else if (!in_cycle.count(v) && g.at(f.at(w)) == v) {
            twocycles.push_back({std::min(v, w), std::max(v, w)});
            in_cycle.insert(v);
            in_cycle.insert(w);
        }
    }
    std::sort(fixed.begin(), fixed.end());
    std::sort(twocycles.begin(), twocycles.end());

    auto finish = [&](const std::vector<VertexId>& a2) {
        LinkmatchResult res;
        res.found = true;
        res.a_sub = a2;
        Linkage rf = fwd.restricted(a2);
        std::vector<VertexId> b2;
        for (const auto& p : rf.paths) b2.push_back(p.finish());
        Linkage rb = bwd.restricted(b2);
        res.b_sub = b2;
        res.fwd = rf;
        res.bwd = rb;
        res.relation = pair_relation(rf, rb);
        return res;
    };

    if (static_cast<int>(fixed.size()) >= n) {
        auto res = finish({fixed.begin(), fixed.begin() + n});
        if (res.relation == PairRelation::Agree) return res;
    }
    int need_pairs = n / 2;
    bool odd = n % 2 == 1;
    if (static_cast<int>(twocycles.size()) >= need_pairs && (!odd || !fixed.empty())) {
        std::vector<VertexId> a2;
        for (int i = 0; i < need_pairs; ++i) {
            a2.push_back(twocycles[i].first);
            a2.push_back(twocycles[i].second);
        }
        if (odd) a2.push_back(fixed.front());
        std::sort(a2.begin(), a2.end());
        auto res = finish(a2);
        if (res.relation == PairRelation::Cross && n > 1) return res;
        if (res.relation == PairRelation::Agree) return res;
    }
    return std::nullopt;
}

}  // namespace

LinkmatchResult linkmatch_search(const Digraph& d, const std::vector<VertexId>& x,
                                 const std::vector<VertexId>& a, const std::vector<VertexId>& b,
                                 int n, long budget) {
    if (n < 1) throw std::invalid_argument("linkmatch_search: n must be positive");
    std::set<VertexId> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::set<VertexId> sx(x.begin(), x.end());
    if (sa.size() != sb.size() || sa.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("linkmatch_search: |A| = |B| >= n required");
    for (VertexId v : a)
        if (sb.count(v) || !sx.count(v))
            throw std::invalid_argument("linkmatch_search: A must sit inside X, disjoint from B");
    for (VertexId v : b)
        if (!sx.count(v)) throw std::invalid_argument("linkmatch_search: B must sit inside X");
    LinkmatchResult out;
    if (budget <= 0) return out;

    // full-set composed-permutation probe
    if (auto r = sigma_probe(d, std::vector<VertexId>(sa.begin(), sa.end()),
                             std::vector<VertexId>(sb.begin(), sb.end()), n)) {
        return *r;
    }

    // monotone-subsequence restriction probe: restrict A to a monotone block
    // of the matching and retry
    {
        auto fa = menger_paths(d, std::vector<VertexId>(sa.begin(), sa.end()),
                               std::vector<VertexId>(sb.begin(), sb.end()),
                               static_cast<int>(sa.size()));
        if (fa.linked) {
            std::vector<VertexId> asorted(sa.begin(), sa.end());
            std::vector<VertexId> bsorted(sb.begin(), sb.end());
            std::map<VertexId, VertexId> f;
            for (auto& p : fa.paths) f[p.start()] = p.finish();
            std::vector<int> ranks;
            for (VertexId v : asorted)
                ranks.push_back(static_cast<int>(
                    std::find(bsorted.begin(), bsorted.end(), f.at(v)) - bsorted.begin()));
            auto mono = longest_monotone_subsequence(ranks);
            if (static_cast<int>(mono.size()) >= n) {
                std::vector<VertexId> a0, b0;
                std::size_t mi = 0;
                for (std::size_t i = 0; i < ranks.size() && mi < mono.size(); ++i)
                    if (ranks[i] == mono[mi]) {
                        a0.push_back(asorted[i]);
                        b0.push_back(bsorted[ranks[i]]);
                        ++mi;
                    }
                if (auto r = sigma_probe(d, a0, b0, n)) return *r;
            }
        }
    }

    // bounded exhaustive enumeration over size-n subset pairs and systems
    std::vector<VertexId> av(sa.begin(), sa.end()), bv(sb.begin(), sb.end());
    long spent = 0;
    std::function<bool(std::vector<VertexId>&, std::vector<VertexId>&)> try_pair =
        [&](std::vector<VertexId>& a2, std::vector<VertexId>& b2) -> bool {
        long sys_budget = std::max(budget / 16, 1000l);
        bool found = false;
        detail::enumerate_disjoint_systems(d, a2, b2, sys_budget, [&](const auto& fpaths) {
            Linkage fw;
            for (const auto& p : fpaths) {
                fw.sources.push_back(p.start());
                fw.targets.push_back(p.finish());
                fw.paths.push_back(p);
            }
            long back_budget = std::max(budget / 64, 500l);
            detail::enumerate_disjoint_systems(d, b2, a2, back_budget, [&](const auto& bpaths) {
                Linkage bw;
                for (const auto& p : bpaths) {
                    bw.sources.push_back(p.start());
                    bw.targets.push_back(p.finish());
                    bw.paths.push_back(p);
                }
                auto rel = pair_relation(fw, bw);
                if (rel == PairRelation::Agree || rel == PairRelation::Cross) {
                    out.found = true;
                    out.a_sub = a2;
                    out.b_sub = b2;
                    out.fwd = fw;
                    out.bwd = bw;
                    out.relation = rel;
                    found = true;
                }
                return !found;
            });
            return !found;
        });
        return found;
    };

    std::vector<unsigned> amasks, bmasks;
    for (unsigned m = 0; m < (1u << av.size()); ++m)
        if (std::popcount(m) == n) amasks.push_back(m);
    for (unsigned m = 0; m < (1u << bv.size()); ++m)
        if (std::popcount(m) == n) bmasks.push_back(m);
    for (unsigned ma : amasks) {
        for (unsigned mb : bmasks) {
            if (spent++ > budget) return out;
            auto a2 = unmask_subset(av, ma);
            auto b2 = unmask_subset(bv, mb);
            if (try_pair(a2, b2)) return out;
        }
    }
    return out;  // exhausted
}

namespace {

Subdigraph path_union(const Digraph& d, std::initializer_list<const DirectedPath*> paths) {
    std::set<VertexId> vs;
    std::set<EdgeId> es;
    for (const DirectedPath* p : paths) {
        vs.insert(p->verts.begin(), p->verts.end());
        es.insert(p->edges.begin(), p->edges.end());
    }
    return Subdigraph{{vs.begin(), vs.end()}, {es.begin(), es.end()}};
}

bool subs_intersect(const Subdigraph& a, const Subdigraph& b) {
    std::set<VertexId> sa(a.verts.begin(), a.verts.end());
    for (VertexId v : b.verts)
        if (sa.count(v)) return true;
    return false;
}

// Simple path from s to t inside the subdigraph, BFS.
DirectedPath path_inside(const Digraph& d, const Subdigraph& sub, VertexId s, VertexId t) {
    Digraph g = d.subgraph(sub.verts, sub.edges);
    std::map<VertexId, std::pair<VertexId, EdgeId>> prev;
    std::deque<VertexId> q{s};
    prev[s] = {s, -1};
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        if (v == t) break;
        for (EdgeId e : g.out_edges(v)) {
            VertexId h = g.edge(e).head;
            if (!prev.count(h)) {
                prev[h] = {v, e};
                q.push_back(h);
            }
        }
    }
    if (!prev.count(t)) throw std::logic_error("path_inside: target unreachable");
    DirectedPath p;
    for (VertexId v = t; v != s; v = prev[v].first) {
        p.verts.push_back(v);
        p.edges.push_back(prev[v].second);
    }
    p.verts.push_back(s);
    std::reverse(p.verts.begin(), p.verts.end());
    std::reverse(p.edges.begin(), p.edges.end());
    return p;
}

// exact independent set of a small graph, lexicographically least
std::optional<std::vector<int>> independent_set(const std::vector<std::vector<char>>& adj,
                                                int want) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int start) -> bool {
        if (static_cast<int>(pick.size()) == want) return true;
        for (int v = start; v < n; ++v) {
            bool ok = true;
            for (int u : pick)
                if (adj[u][v]) ok = false;
            if (!ok) continue;
            pick.push_back(v);
            if (rec(v + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    if (rec(0)) return pick;
    return std::nullopt;
}

std::optional<std::vector<int>> clique_set(const std::vector<std::vector<char>>& adj, int want) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<char>> co(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) co[i][j] = !adj[i][j];
    return independent_set(co, want);
}

}  // namespace

Linkmatch2Result linkmatch2_search(const Digraph& d, const std::vector<VertexId>& x,
                                   const std::vector<VertexId>& a,
                                   const std::vector<VertexId>& b, int n, long budget) {
    Linkmatch2Result out;
    if (budget <= 0) return out;

    // connectors from a linkmatch pair at the largest feasible size
    int big = static_cast<int>(std::min(a.size(), b.size()));
    LinkmatchResult lm;
    for (int size = big; size >= n; --size) {
        lm = linkmatch_search(d, x, a, b, size, budget);
        if (lm.found) break;
    }
    if (!lm.found) return out;

    std::vector<Subdigraph> connectors;
    std::vector<std::pair<VertexId, VertexId>> connector_ends;  // (a-end, b-end)
    auto f = lm.fwd.matching(), g = lm.bwd.matching();
    if (lm.relation == PairRelation::Agree) {
        for (std::size_t i = 0; i < lm.fwd.sources.size(); ++i) {
            VertexId av = lm.fwd.sources[i];
            VertexId bv = lm.fwd.paths[i].finish();
            const DirectedPath* back = nullptr;
            for (std::size_t j = 0; j < lm.bwd.sources.size(); ++j)
                if (lm.bwd.sources[j] == bv) back = &lm.bwd.paths[j];
            connectors.push_back(path_union(d, {&lm.fwd.paths[i], back}));
            connector_ends.push_back({av, bv});
        }
    } else {
        // crossing: quadruples over the involution's 2-cycles
        std::set<VertexId> done;
        for (std::size_t i = 0; i < lm.fwd.sources.size(); ++i) {
            VertexId av = lm.fwd.sources[i];
            if (done.count(av)) continue;
            VertexId aw = g.at(f.at(av));
            if (aw == av) continue;
            done.insert(av);
            done.insert(aw);
            const DirectedPath *fa = nullptr, *fw = nullptr, *ga = nullptr, *gw = nullptr;
            for (std::size_t j = 0; j < lm.fwd.sources.size(); ++j) {
                if (lm.fwd.sources[j] == av) fa = &lm.fwd.paths[j];
                if (lm.fwd.sources[j] == aw) fw = &lm.fwd.paths[j];
            }
            for (std::size_t j = 0; j < lm.bwd.sources.size(); ++j) {
                if (lm.bwd.sources[j] == f.at(av)) ga = &lm.bwd.paths[j];
                if (lm.bwd.sources[j] == f.at(aw)) gw = &lm.bwd.paths[j];
            }
            connectors.push_back(path_union(d, {fa, fw, ga, gw}));
            connector_ends.push_back({av, f.at(av)});
        }
    }

    const int m = static_cast<int>(connectors.size());
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            adj[i][j] = adj[j][i] = subs_intersect(connectors[i], connectors[j]) ? 1 : 0;

    if (auto ind = independent_set(adj, n)) {
        // outcome 1: restrict to the disjoint connectors
        out.kind = Linkmatch2Result::Kind::AgreePair;
        for (int i : *ind) {
            auto [av, bv] = connector_ends[i];
            out.a_sub.push_back(av);
            out.b_sub.push_back(bv);
            DirectedPath fwd_path = path_inside(d, connectors[i], av, bv);
            DirectedPath bwd_path = path_inside(d, connectors[i], bv, av);
            out.fwd.sources.push_back(av);
            out.fwd.targets.push_back(bv);
            out.fwd.paths.push_back(fwd_path);
            out.bwd.sources.push_back(bv);
            out.bwd.targets.push_back(av);
            out.bwd.paths.push_back(bwd_path);
        }
        return out;
    }
    if (auto cli = clique_set(adj, 2 * n + 1)) {
        std::vector<Subdigraph> family;
        for (int i : *cli) family.push_back(connectors[i]);
        auto fam = haven_from_intersecting_family(d, family, n);
        auto em = eulerianize(fam.union_graph, 4);
        if (em.has_value()) {
            out.kind = Linkmatch2Result::Kind::EulerHaven;
            out.subgraph = fam.union_graph;
            out.multiplicity = *em;
            out.certificate = fam.certificate;
            return out;
        }
    }
    return out;
}

ReduceOutcome reduce_to_eulerian(const Digraph& d, const std::vector<VertexId>& x, int h,
                                 long budget) {
    auto lc = is_linked_set(d, x);
    if (!lc.linked && !lc.exhausted)
        throw std::invalid_argument("reduce_to_eulerian: X is not linked");
    ReduceOutcome out;
    if (budget <= 0) return out;

    auto finish_euler = [&](const Digraph& sub, int bound) -> bool {
        auto em = eulerianize(sub, bound);
        if (!em) return false;
        auto ho = haven_order(sub, h + 1, budget);
        if (ho.order < h + 1) return false;
        if (!check_haven(sub, ho.certificate).ok) return false;
        out.kind = ReduceOutcome::Kind::EulerHaven;
        out.bound = bound;
        out.subgraph = sub;
        out.multiplicity = *em;
        out.certificate = ho.certificate;
        return true;
    };

    // direct route: bidirected cliques of size h+1 (eulerian up to degree 4
    // when h+1 <= 5), then short directed circuits for h = 1
    long spent = 0;
    if (h + 1 <= 5) {
        const auto& vs = d.vertices();
        std::vector<VertexId> pick;
        std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
            if (static_cast<int>(pick.size()) == h + 1)
                return finish_euler(d.induced(pick), 4);
            for (std::size_t i = start; i < vs.size(); ++i) {
                if (++spent > budget) return false;
                bool ok = true;
                for (VertexId u : pick) {
                    bool fwd = false, bwd = false;
                    for (EdgeId e : d.out_edges(u))
                        if (d.edge(e).head == vs[i]) fwd = true;
                    for (EdgeId e : d.in_edges(u))
                        if (d.edge(e).tail == vs[i]) bwd = true;
                    if (!fwd || !bwd) ok = false;
                }
                if (!ok) continue;
                pick.push_back(vs[i]);
                if (rec(i + 1)) return true;
                pick.pop_back();
            }
            return false;
        };
        if (h >= 1 && rec(0)) return out;
    }
    if (h == 1) {
        // any short directed circuit has a haven of order 2
        for (VertexId v : d.vertices()) {
            if (spent > budget) break;
            std::vector<VertexId> cur{v};
            std::set<VertexId> used{v};
            std::function<bool(VertexId)> walk = [&](VertexId w) -> bool {
                if (++spent > budget) return false;
                if (cur.size() > 6) return false;
                for (EdgeId e : d.out_edges(w)) {
                    VertexId hvx = d.edge(e).head;
                    if (hvx == v && cur.size() >= 2) {
                        std::set<EdgeId> es;
                        for (std::size_t i = 0; i + 1 < cur.size(); ++i)
                            for (EdgeId e2 : d.out_edges(cur[i]))
                                if (d.edge(e2).head == cur[i + 1]) {
                                    es.insert(e2);
                                    break;
                                }
                        es.insert(e);
                        if (finish_euler(d.subgraph(cur, {es.begin(), es.end()}), 4)) return true;
                    }
                    if (hvx > v && !used.count(hvx)) {
                        used.insert(hvx);
                        cur.push_back(hvx);
                        if (walk(hvx)) return true;
                        cur.pop_back();
                        used.erase(hvx);
                    }
                }
                return false;
            };
            if (walk(v)) return out;
        }
    }

    // linkage route: split X and run the pairing search; its second outcome
    // is exactly a 4-eulerianizable subdigraph with a haven of order h+1
    {
        std::vector<VertexId> xs(x);
        std::sort(xs.begin(), xs.end());
        std::size_t half = xs.size() / 2;
        if (half >= 1) {
            std::vector<VertexId> a(xs.begin(), xs.begin() + half);
            std::vector<VertexId> b(xs.begin() + half, xs.begin() + 2 * half);
            auto lm2 = linkmatch2_search(d, xs, a, b, h, budget);
            if (lm2.kind == Linkmatch2Result::Kind::EulerHaven &&
                lm2.certificate.order >= h + 1) {
                out.kind = ReduceOutcome::Kind::EulerHaven;
                out.bound = 4;
                out.subgraph = lm2.subgraph;
                out.multiplicity = lm2.multiplicity;
                out.certificate = lm2.certificate;
                return out;
            }
        }
    }

    // representation route: assemble a small clique representation from
    // short strongly connected pieces
    {
        std::vector<Subdigraph> pool;
        for (VertexId v : d.vertices()) {
            if (spent > budget) break;
            // digons through v
            for (EdgeId e1 : d.out_edges(v)) {
                VertexId w = d.edge(e1).head;
                if (w <= v) continue;
                for (EdgeId e2 : d.out_edges(w))
                    if (d.edge(e2).head == v) {
                        pool.push_back({{v, w}, {e1, e2}});
                        break;
                    }
                ++spent;
            }
        }
        int maxm = 3;
        for (int m = maxm; m >= 3; --m) {
            // vmembers: m disjoint pool members; emembers: m(m-1)/2 disjoint
            // pool members touching their pair
            std::vector<int> vsel;
            std::function<bool(std::size_t)> pick_v = [&](std::size_t start) -> bool {
                if (static_cast<int>(vsel.size()) == m) {
                    // assign emembers greedily from the pool
                    std::vector<int> esel;
                    std::vector<std::pair<int, int>> need;
                    for (int i = 0; i < m; ++i)
                        for (int j = i + 1; j < m; ++j) need.push_back({i, j});
                    std::set<int> taken(vsel.begin(), vsel.end());
                    std::function<bool(std::size_t)> pick_e = [&](std::size_t k) -> bool {
                        if (k == need.size()) return true;
                        auto [i, j] = need[k];
                        for (std::size_t p = 0; p < pool.size(); ++p) {
                            if (++spent > budget) return false;
                            if (taken.count(static_cast<int>(p))) continue;
                            bool okdisj = true;
                            for (int q : esel)
                                if (subs_intersect(pool[p], pool[q])) okdisj = false;
                            for (int q : vsel)
                                if (q != vsel[i] && q != vsel[j] &&
                                    subs_intersect(pool[p], pool[q]))
                                    okdisj = false;
                            if (!okdisj) continue;
                            if (!subs_intersect(pool[p], pool[vsel[i]]) ||
                                !subs_intersect(pool[p], pool[vsel[j]]))
                                continue;
                            esel.push_back(static_cast<int>(p));
                            taken.insert(static_cast<int>(p));
                            if (pick_e(k + 1)) return true;
                            esel.pop_back();
                            taken.erase(static_cast<int>(p));
                        }
                        return false;
                    };
                    if (!pick_e(0)) return false;
                    Representation rep;
                    rep.host = d;
                    rep.pattern = [&] {
                        std::vector<std::pair<VertexId, VertexId>> arcs;
                        for (int i = 0; i < m; ++i)
                            for (int j = 0; j < m; ++j)
                                if (i != j) arcs.push_back({i, j});
                        return Digraph::from_edges(m, arcs);
                    }();
                    for (int i = 0; i < m; ++i) {
                        rep.vmembers.push_back(pool[vsel[i]]);
                        rep.vmap.push_back(i);
                    }
                    for (std::size_t k = 0; k < need.size(); ++k) {
                        rep.emembers.push_back(pool[esel[k]]);
                        rep.emap.push_back(need[k]);
                    }
                    rep.faithful = validate_representation([&] {
                                       Representation r = rep;
                                       r.faithful = true;
                                       return r;
                                   }())
                                       .ok;
                    if (validate_representation(rep).ok) {
                        out.kind = ReduceOutcome::Kind::CliqueRepresentation;
                        out.representation = rep;
                        return true;
                    }
                    return false;
                }
                for (std::size_t p = start; p < pool.size(); ++p) {
                    if (++spent > budget) return false;
                    bool ok = true;
                    for (int q : vsel)
                        if (subs_intersect(pool[p], pool[q])) ok = false;
                    if (!ok) continue;
                    vsel.push_back(static_cast<int>(p));
                    if (pick_v(p + 1)) return true;
                    vsel.pop_back();
                }
                return false;
            };
            if (pick_v(0)) return out;
        }
    }
    return out;  // exhausted
}

}  // namespace digrid
