#include "digrid/havens.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace digrid {

namespace {

constexpr int kMaxCertVertices = 64;

struct DenseGraph {
    int n = 0;
    std::vector<VertexId> ids;
    std::vector<std::uint64_t> out;

    explicit DenseGraph(const Digraph& d) {
        n = static_cast<int>(d.vertex_count());
        if (n > kMaxCertVertices)
            throw std::invalid_argument("haven machinery supports at most 64 vertices");
        ids = d.vertices();
        out.assign(n, 0);
        for (const Edge& e : d.edges())
            out[d.dense_index(e.tail)] |= 1ull << d.dense_index(e.head);
    }

    // Strong components of the subgraph induced by `allowed`, as masks sorted
    // by lowest set bit.
    std::vector<std::uint64_t> components(std::uint64_t allowed) const {
        std::vector<std::uint64_t> comps;
        std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
        std::vector<int> stack;
        int next = 0;
        struct Frame {
            int v;
            std::uint64_t rest;
        };
        for (int s = 0; s < n; ++s) {
            if (!((allowed >> s) & 1) || index[s] != -1) continue;
            std::vector<Frame> call{{s, out[s] & allowed}};
            index[s] = low[s] = next++;
            stack.push_back(s);
            on_stack[s] = 1;
            while (!call.empty()) {
                Frame& f = call.back();
                if (f.rest) {
                    int w = std::countr_zero(f.rest);
                    f.rest &= f.rest - 1;
                    if (index[w] == -1) {
                        index[w] = low[w] = next++;
                        stack.push_back(w);
                        on_stack[w] = 1;
                        call.push_back({w, out[w] & allowed});
                    } else if (on_stack[w]) {
                        low[f.v] = std::min(low[f.v], index[w]);
                    }
                } else {
                    if (low[f.v] == index[f.v]) {
                        std::uint64_t comp = 0;
                        while (true) {
                            int w = stack.back();
                            stack.pop_back();
                            on_stack[w] = 0;
                            comp |= 1ull << w;
                            if (w == f.v) break;
                        }
                        comps.push_back(comp);
                    }
                    int v = f.v;
                    call.pop_back();
                    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                }
            }
        }
        std::sort(comps.begin(), comps.end(), [](std::uint64_t a, std::uint64_t b) {
            return std::countr_zero(a) < std::countr_zero(b);
        });
        return comps;
    }

    std::uint64_t mask_of(const Digraph& d, const std::vector<VertexId>& vs) const {
        std::uint64_t m = 0;
        for (VertexId v : vs) m |= 1ull << d.dense_index(v);
        return m;
    }

    std::vector<VertexId> unmask(std::uint64_t m) const {
        std::vector<VertexId> vs;
        while (m) {
            int i = std::countr_zero(m);
            m &= m - 1;
            vs.push_back(ids[i]);
        }
        return vs;
    }
};

// All subset masks of {0..n-1} with popcount < w, ordered by (size, value).
std::vector<std::uint64_t> layered_subsets(int n, int w) {
    std::vector<std::uint64_t> out;
    std::uint64_t full = n == 64 ? ~0ull : (1ull << n) - 1;
    for (int s = 0; s < w; ++s) {
        if (s > n) break;
        // enumerate masks of popcount s in increasing value
        if (s == 0) {
            out.push_back(0);
            continue;
        }
        std::uint64_t m = (1ull << s) - 1;
        while (m <= full) {
            out.push_back(m);
            std::uint64_t c = m & -m, r = m + c;
            std::uint64_t next = (((r ^ m) >> 2) / c) | r;
            if (r > full || next == m) break;
            m = next;
            if ((m & ~full) != 0) break;
        }
    }
    return out;
}

}  // namespace

CertBlock HavenCertificate::to_cert_block() const {
    CertBlock cb;
    cb.order = order;
    for (const auto& [z, rep] : table) cb.entries.push_back({z, rep});
    return cb;
}

HavenCertificate HavenCertificate::from_cert_block(const CertBlock& cb) {
    HavenCertificate hc;
    hc.order = cb.order;
    for (const auto& e : cb.entries) hc.table[e.z] = e.rep;
    return hc;
}

ValidationReport check_haven(const Digraph& d, const HavenCertificate& cert,
                             const HavenCheckOptions& opts) {
    ValidationReport rep;
    if (cert.order < 0) {
        rep.fail("order: negative");
        return rep;
    }
    DenseGraph dg(d);
    std::uint64_t full = dg.n == 64 ? ~0ull : (1ull << dg.n) - 1;

    std::unordered_map<std::uint64_t, std::uint64_t> value;  // Z mask -> B(Z) mask
    auto entry_mask = [&](const std::vector<VertexId>& z) { return dg.mask_of(d, z); };

    // Entry genuineness (and canonical representative).
    auto check_entry = [&](const std::vector<VertexId>& z, VertexId v) -> bool {
        std::uint64_t zm = entry_mask(z);
        if (static_cast<int>(z.size()) >= cert.order) {
            rep.fail("domain: entry exceeds order");
            return false;
        }
        if (!d.has_vertex(v)) {
            rep.fail("entry: unknown representative " + std::to_string(v));
            return false;
        }
        int vi = d.dense_index(v);
        if ((zm >> vi) & 1) {
            rep.fail("entry: representative inside Z");
            return false;
        }
        for (std::uint64_t comp : dg.components(full & ~zm)) {
            if ((comp >> vi) & 1) {
                if (std::countr_zero(comp) != vi) {
                    rep.fail("entry: representative is not the component minimum");
                    return false;
                }
                value[zm] = comp;
                return true;
            }
        }
        rep.fail("entry: representative not in the remainder");
        return false;
    };

    auto axiom_pair = [&](const std::vector<VertexId>& z, const std::vector<VertexId>& zc) {
        // zc = z minus one element; both must be present and nested
        auto itz = value.find(entry_mask(z));
        auto itc = value.find(entry_mask(zc));
        if (itz == value.end() || itc == value.end()) return;  // missing reported elsewhere
        if ((itz->second & ~itc->second) != 0) {
            std::string zs;
            for (VertexId v : z) zs += std::to_string(v) + " ";
            rep.fail("axiom: B({" + zs + "}) not inside its cover");
        }
    };

    if (opts.sample_pairs <= 0) {
        // Exhaustive: domain must be exactly all subsets with |Z| < order.
        auto subsets = layered_subsets(dg.n, cert.order);
        if (cert.table.size() != subsets.size()) {
            rep.fail("domain: expected " + std::to_string(subsets.size()) + " entries, found " +
                     std::to_string(cert.table.size()));
        }
        for (const auto& [z, v] : cert.table)
            if (!check_entry(z, v)) return rep;
        for (const auto& [z, v] : cert.table) {
            if (z.empty()) continue;
            for (std::size_t i = 0; i < z.size(); ++i) {
                std::vector<VertexId> zc;
                for (std::size_t j = 0; j < z.size(); ++j)
                    if (j != i) zc.push_back(z[j]);
                if (!cert.table.count(zc)) {
                    rep.fail("domain: missing cover entry");
                    continue;
                }
                axiom_pair(z, zc);
            }
        }
        if (rep.ok && cert.order > 0 && !cert.table.count({}))
            rep.fail("domain: missing empty-set entry");
    } else {
        std::mt19937_64 rng(opts.seed);
        std::vector<const std::vector<VertexId>*> keys;
        for (const auto& [z, v] : cert.table) keys.push_back(&z);
        if (keys.empty() && cert.order > 0) {
            rep.fail("domain: empty table");
            return rep;
        }
        for (long t = 0; t < opts.sample_pairs && rep.ok; ++t) {
            const auto& z = *keys[rng() % keys.size()];
            if (!check_entry(z, cert.table.at(z))) break;
            if (z.empty()) continue;
            std::size_t i = rng() % z.size();
            std::vector<VertexId> zc;
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i) zc.push_back(z[j]);
            auto it = cert.table.find(zc);
            if (it == cert.table.end()) {
                rep.fail("domain: missing cover entry");
                break;
            }
            if (!check_entry(zc, it->second)) break;
            axiom_pair(z, zc);
        }
    }
    return rep;
}

namespace {

struct LevelSearch {
    const DenseGraph& dg;
    std::vector<std::uint64_t> subsets;                       // (size, value) order
    std::unordered_map<std::uint64_t, int> index_of;          // mask -> position
    std::vector<std::vector<std::uint64_t>> comps;            // per position
    std::vector<std::vector<int>> covers;                     // per position
    long budget;
    long visits = 0;
    bool budget_hit = false;

    LevelSearch(const DenseGraph& g, int w, long b) : dg(g), budget(b) {
        subsets = layered_subsets(g.n, w);
        std::uint64_t full = g.n == 64 ? ~0ull : (1ull << g.n) - 1;
        comps.resize(subsets.size());
        covers.resize(subsets.size());
        for (std::size_t i = 0; i < subsets.size(); ++i) index_of[subsets[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            comps[i] = g.components(full & ~subsets[i]);
            std::uint64_t z = subsets[i];
            std::uint64_t rest = z;
            while (rest) {
                std::uint64_t bit = rest & -rest;
                rest &= rest - 1;
                covers[i].push_back(index_of.at(z & ~bit));
            }
        }
    }

    // assignment[i] = chosen component mask or 0
    bool dfs(std::size_t i, std::vector<std::uint64_t>& assignment) {
        if (i == subsets.size()) return true;
        if (++visits > budget) {
            budget_hit = true;
            return false;
        }
        std::uint64_t allowed = ~0ull;
        for (int c : covers[i]) allowed &= assignment[c];
        for (std::uint64_t comp : comps[i]) {
            if ((comp & ~allowed) != 0) continue;
            assignment[i] = comp;
            if (dfs(i + 1, assignment)) return true;
            if (budget_hit) return false;
        }
        assignment[i] = 0;
        return false;
    }

    // Parallel fan-out over the root component choice.
    bool run(std::vector<std::uint64_t>& assignment) {
        if (subsets.empty()) return true;
        const auto& roots = comps[0];
        if (roots.empty()) return false;
        if (roots.size() == 1) {
            assignment[0] = roots[0];
            return dfs(1, assignment);
        }
        std::vector<std::vector<std::uint64_t>> results(roots.size());
        std::vector<char> ok(roots.size(), 0), hit(roots.size(), 0);
        std::vector<long> used(roots.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int r = 0; r < static_cast<int>(roots.size()); ++r) {
            LevelSearch branch(dg, 0, budget);  // reuse precomputation cheaply
            branch.subsets = subsets;
            branch.index_of = index_of;
            branch.comps = comps;
            branch.covers = covers;
            std::vector<std::uint64_t> local(subsets.size(), 0);
            local[0] = roots[r];
            ok[r] = branch.dfs(1, local) ? 1 : 0;
            hit[r] = branch.budget_hit ? 1 : 0;
            used[r] = branch.visits;
            results[r] = std::move(local);
        }
        for (std::size_t r = 0; r < roots.size(); ++r) {
            visits += used[r];
            if (hit[r]) budget_hit = true;
        }
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (ok[r]) {
                assignment = results[r];
                return true;
            }
        }
        return false;
    }
};

}  // namespace

HavenOrderResult haven_order(const Digraph& d, int cap, long budget) {
    HavenOrderResult res;
    DenseGraph dg(d);
    int top = std::min<int>(cap, dg.n);
    for (int w = top; w >= 1; --w) {
        LevelSearch ls(dg, w, budget);
        std::vector<std::uint64_t> assignment(ls.subsets.size(), 0);
        bool found = ls.run(assignment);
        res.visits += ls.visits;
        if (found) {
            res.order = w;
            res.certificate.order = w;
            for (std::size_t i = 0; i < ls.subsets.size(); ++i) {
                auto z = dg.unmask(ls.subsets[i]);
                res.certificate.table[z] = dg.ids[std::countr_zero(assignment[i])];
            }
            return res;
        }
        if (ls.budget_hit) res.exact = false;
    }
    res.order = 0;
    res.certificate = HavenCertificate{0, {}};
    return res;
}

std::vector<VertexId> CertificateOracle::component(const std::vector<VertexId>& z) const {
    std::vector<VertexId> key(z);
    std::sort(key.begin(), key.end());
    auto it = cert_.table.find(key);
    if (it == cert_.table.end())
        throw std::invalid_argument("haven oracle: set outside certificate domain");
    return strong_component_of(d_, it->second, key);
}

std::unique_ptr<HavenOracle> make_search_oracle(const Digraph& d, int cap, long budget) {
    auto res = haven_order(d, cap, budget);
    return std::make_unique<CertificateOracle>(d, res.certificate);
}

ValidationReport validate_representation(const Representation& rep) {
    ValidationReport out;
    const Digraph& d = rep.host;
    auto disjoint_family = [&](const std::vector<Subdigraph>& fam, const std::string& name) {
        std::set<VertexId> seen;
        for (const auto& s : fam)
            for (VertexId v : s.verts)
                if (!seen.insert(v).second) out.fail(name + ": members share vertex " +
                                                     std::to_string(v));
    };
    disjoint_family(rep.vmembers, "vertex-family");
    disjoint_family(rep.emembers, "edge-family");
    auto as_graph = [&](const Subdigraph& s) { return d.subgraph(s.verts, s.edges); };
    for (std::size_t i = 0; i < rep.vmembers.size(); ++i)
        if (!as_graph(rep.vmembers[i]).strongly_connected())
            out.fail("vertex-family: member " + std::to_string(i) + " not strongly connected");
    for (std::size_t i = 0; i < rep.emembers.size(); ++i) {
        Digraph g = as_graph(rep.emembers[i]);
        if (!g.strongly_connected())
            out.fail("edge-family: member " + std::to_string(i) + " not strongly connected");
        else if (g.edge_count() > 0 && !eulerianize(g, 2).has_value())
            out.fail("edge-family: member " + std::to_string(i) + " not 2-eulerianizable");
    }
    if (rep.vmap.size() != rep.vmembers.size()) out.fail("vmap: size mismatch");
    if (rep.emap.size() != rep.emembers.size()) out.fail("emap: size mismatch");
    if (!out.ok) return out;
    std::set<VertexId> pverts(rep.pattern.vertices().begin(), rep.pattern.vertices().end());
    std::set<VertexId> vimage(rep.vmap.begin(), rep.vmap.end());
    if (vimage.size() != rep.vmap.size() || vimage != pverts)
        out.fail("vmap: not a bijection onto the pattern vertices");
    std::set<std::pair<VertexId, VertexId>> pedges, eimage;
    for (const Edge& e : rep.pattern.edges())
        pedges.insert({std::min(e.tail, e.head), std::max(e.tail, e.head)});
    for (auto [u, v] : rep.emap) {
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (!eimage.insert(key).second) out.fail("emap: duplicate pattern edge");
        if (!pedges.count(key)) out.fail("emap: pattern edge absent");
    }
    if (eimage.size() != pedges.size()) out.fail("emap: not a bijection onto the pattern edges");

    auto member_of = [&](VertexId pv) -> const Subdigraph* {
        for (std::size_t i = 0; i < rep.vmap.size(); ++i)
            if (rep.vmap[i] == pv) return &rep.vmembers[i];
        return nullptr;
    };
    for (std::size_t i = 0; i < rep.emembers.size(); ++i) {
        auto [u, v] = rep.emap[i];
        for (VertexId pv : {u, v}) {
            const Subdigraph* m = member_of(pv);
            bool shares = false;
            if (m)
                for (VertexId x : rep.emembers[i].verts)
                    if (std::find(m->verts.begin(), m->verts.end(), x) != m->verts.end())
                        shares = true;
            if (!shares)
                out.fail("incidence: edge member " + std::to_string(i) +
                         " misses its end " + std::to_string(pv));
        }
        if (rep.faithful) {
            for (std::size_t j = 0; j < rep.vmembers.size(); ++j) {
                if (rep.vmap[j] == u || rep.vmap[j] == v) continue;
                for (VertexId x : rep.emembers[i].verts)
                    if (std::find(rep.vmembers[j].verts.begin(), rep.vmembers[j].verts.end(), x) !=
                        rep.vmembers[j].verts.end())
                        out.fail("faithful: edge member " + std::to_string(i) +
                                 " meets a non-end vertex member");
            }
        }
    }
    return out;
}

HavenCertificate haven_from_representation(const Representation& rep,
                                           const HavenCertificate& pattern_cert, int h) {
    if (h <= 0 || h % 2 != 0)
        throw std::invalid_argument("haven_from_representation: h must be positive and even");
    if (!rep.faithful) throw std::invalid_argument("haven_from_representation: need faithful");
    {
        auto vr = validate_representation(rep);
        if (!vr.ok)
            throw std::invalid_argument("haven_from_representation: invalid representation: " +
                                        vr.violations[0]);
    }
    if (pattern_cert.order < h + 1)
        throw std::invalid_argument("haven_from_representation: pattern certificate too weak");
    {
        auto cr = check_haven(rep.pattern, pattern_cert);
        if (!cr.ok)
            throw std::invalid_argument("haven_from_representation: pattern certificate invalid: " +
                                        cr.violations[0]);
    }

    const Digraph& d = rep.host;
    DenseGraph dg(d);

    // m(x): edge-family ends dominate, then the vertex member, else empty.
    std::map<VertexId, std::vector<VertexId>> m;
    for (VertexId x : d.vertices()) m[x] = {};
    for (std::size_t i = 0; i < rep.vmembers.size(); ++i)
        for (VertexId x : rep.vmembers[i].verts) m[x] = {rep.vmap[i]};
    for (std::size_t i = 0; i < rep.emembers.size(); ++i)
        for (VertexId x : rep.emembers[i].verts) m[x] = {rep.emap[i].first, rep.emap[i].second};

    std::map<VertexId, VertexId> anchor;  // pattern vertex -> a host vertex of its member
    for (std::size_t i = 0; i < rep.vmembers.size(); ++i)
        anchor[rep.vmap[i]] = *std::min_element(rep.vmembers[i].verts.begin(),
                                                rep.vmembers[i].verts.end());

    HavenCertificate out;
    out.order = h / 2 + 1;
    for (std::uint64_t zm : layered_subsets(dg.n, out.order)) {
        auto x = dg.unmask(zm);
        std::set<VertexId> y;
        for (VertexId v : x)
            for (VertexId pv : m.at(v)) y.insert(pv);
        std::vector<VertexId> yk(y.begin(), y.end());
        // trim to a table key within the pattern certificate's domain
        auto it = pattern_cert.table.find(yk);
        if (it == pattern_cert.table.end())
            throw std::logic_error("haven_from_representation: pattern table misses Y");
        VertexId pu = it->second;
        VertexId hv = anchor.at(pu);
        auto comp = strong_component_of(d, hv, x);
        if (comp.empty())
            throw std::logic_error("haven_from_representation: anchor vanished");
        out.table[x] = comp.front();
    }
    return out;
}

IntersectingFamilyResult haven_from_intersecting_family(const Digraph& d,
                                                        const std::vector<Subdigraph>& subs,
                                                        int n) {
    if (static_cast<int>(subs.size()) < 2 * n + 1)
        throw std::invalid_argument("intersecting-family: count below 2n+1");
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Digraph g = d.subgraph(subs[i].verts, subs[i].edges);
        if (!g.strongly_connected())
            throw std::invalid_argument("intersecting-family: member " + std::to_string(i) +
                                        " not strongly connected");
    }
    std::map<VertexId, int> cover;
    for (const auto& s : subs)
        for (VertexId v : std::set<VertexId>(s.verts.begin(), s.verts.end())) {
            if (++cover[v] > 2)
                throw std::invalid_argument("intersecting-family: 3-covered vertex " +
                                            std::to_string(v));
        }
    for (std::size_t i = 0; i < subs.size(); ++i)
        for (std::size_t j = i + 1; j < subs.size(); ++j) {
            std::set<VertexId> a(subs[i].verts.begin(), subs[i].verts.end());
            bool meet = false;
            for (VertexId v : subs[j].verts)
                if (a.count(v)) meet = true;
            if (!meet)
                throw std::invalid_argument("intersecting-family: disjoint pair " +
                                            std::to_string(i) + "," + std::to_string(j));
        }

    IntersectingFamilyResult res;
    std::set<VertexId> uverts;
    std::set<EdgeId> uedges;
    for (const auto& s : subs) {
        uverts.insert(s.verts.begin(), s.verts.end());
        uedges.insert(s.edges.begin(), s.edges.end());
    }
    res.union_graph = d.subgraph(std::vector<VertexId>(uverts.begin(), uverts.end()),
                                 std::vector<EdgeId>(uedges.begin(), uedges.end()));

    DenseGraph dg(res.union_graph);
    res.certificate.order = n + 1;
    for (std::uint64_t zm : layered_subsets(dg.n, n + 1)) {
        auto x = dg.unmask(zm);
        std::set<VertexId> xs(x.begin(), x.end());
        // component containing every member disjoint from X
        std::vector<VertexId> comp;
        for (const auto& s : subs) {
            bool hit = false;
            for (VertexId v : s.verts)
                if (xs.count(v)) hit = true;
            if (hit) continue;
            auto c = strong_component_of(res.union_graph, s.verts.front(), x);
            if (comp.empty()) {
                comp = c;
            } else if (comp != c) {
                throw std::logic_error("intersecting-family: members split across components");
            }
        }
        if (comp.empty()) throw std::logic_error("intersecting-family: no member avoids X");
        res.certificate.table[x] = comp.front();
    }
    return res;
}

Digraph wall_pattern(int k) {
    if (k < 1) throw std::invalid_argument("wall_pattern: k must be positive");
    auto vid = [&](int i, int j, int s) { return (i * k + j) * 2 + s; };
    std::vector<std::pair<VertexId, VertexId>> arcs;
    auto link = [&](VertexId a, VertexId b) {
        arcs.push_back({a, b});
        arcs.push_back({b, a});
    };
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            link(vid(i, j, 0), vid(i, j, 1));                      // bridge
            if (j + 1 < k) link(vid(i, j, 1), vid(i, j + 1, 0));   // row
            if (i + 1 < k) link(vid(i, j, 1), vid(i + 1, j, 0));   // column drop
        }
    return Digraph::from_edges(2 * k * k, arcs);
}

WallLines wall_lines(int k) {
    WallLines wl;
    auto vid = [&](int i, int j, int s) { return (i * k + j) * 2 + s; };
    for (int i = 0; i < k; ++i) {
        std::vector<VertexId> row;
        for (int j = 0; j < k; ++j) {
            row.push_back(vid(i, j, 0));
            row.push_back(vid(i, j, 1));
        }
        wl.rows.push_back(row);
    }
    for (int j = 0; j < k; ++j) {
        std::vector<VertexId> col;
        for (int i = 0; i < k; ++i) {
            col.push_back(vid(i, j, 0));
            col.push_back(vid(i, j, 1));
        }
        wl.cols.push_back(col);
    }
    return wl;
}

HavenCertificate wall_haven_certificate(int k) {
    Digraph d = wall_pattern(k);
    WallLines wl = wall_lines(k);
    DenseGraph dg(d);
    HavenCertificate cert;
    cert.order = k;
    for (std::uint64_t zm : layered_subsets(dg.n, k)) {
        auto z = dg.unmask(zm);
        std::set<VertexId> zs(z.begin(), z.end());
        // component holding every untouched row and column
        std::vector<VertexId> comp;
        bool ok = false;
        for (const auto* lines : {&wl.rows, &wl.cols}) {
            for (const auto& line : *lines) {
                bool touched = false;
                for (VertexId v : line)
                    if (zs.count(v)) touched = true;
                if (touched) continue;
                auto c = strong_component_of(d, line.front(), z);
                if (comp.empty()) comp = c;
                ok = true;
            }
        }
        if (!ok) throw std::logic_error("wall certificate: |Z| too large");
        cert.table[z] = comp.front();
    }
    return cert;
}

}  // namespace digrid
