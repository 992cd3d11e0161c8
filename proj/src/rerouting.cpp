#include "digrid/rerouting.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace digrid {

namespace {

std::set<EdgeId> union_edges(const std::vector<DirectedPath>& a,
                             const std::vector<DirectedPath>& b) {
    std::set<EdgeId> es;
    for (const auto& p : a) es.insert(p.edges.begin(), p.edges.end());
    for (const auto& p : b) es.insert(p.edges.begin(), p.edges.end());
    return es;
}

std::vector<int> serialize_system(const std::vector<DirectedPath>& fam) {
    std::vector<int> key;
    for (const auto& p : fam) {
        key.push_back(-1);
        key.insert(key.end(), p.verts.begin(), p.verts.end());
    }
    return key;
}

bool family_avoids(const std::vector<DirectedPath>& fam, const std::set<VertexId>& forbidden) {
    for (const auto& p : fam)
        for (VertexId v : p.verts)
            if (forbidden.count(v)) return false;
    return true;
}

// Order paths of a family by their boundary pins so output families keep the
// input's boundary order.
void order_by_start(std::vector<DirectedPath>& fam, const std::vector<VertexId>& pin_order) {
    std::map<VertexId, int> rank;
    for (std::size_t i = 0; i < pin_order.size(); ++i) rank[pin_order[i]] = static_cast<int>(i);
    std::sort(fam.begin(), fam.end(), [&](const DirectedPath& p, const DirectedPath& q) {
        return rank.at(p.start()) < rank.at(q.start());
    });
}

}  // namespace

ValidationReport validate_routed_system(const RoutedSystem& s) {
    ValidationReport rep = validate_embedding(s.embedding);
    if (!rep.ok) return rep;
    const Digraph& d = s.embedding.host;

    auto check_family = [&](const std::vector<DirectedPath>& fam, const std::string& name,
                            const std::vector<VertexId>& from, const std::vector<VertexId>& to,
                            bool circuits_allowed) {
        std::set<VertexId> starts, finishes, seen;
        for (const auto& p : fam) {
            std::string why;
            if (!is_valid_path(d, p, &why)) {
                rep.fail(name + ": " + why);
                continue;
            }
            if (p.circuit) {
                if (!circuits_allowed) rep.fail(name + ": unexpected circuit");
                for (std::size_t i = 0; i + 1 < p.verts.size(); ++i)
                    if (!seen.insert(p.verts[i]).second)
                        rep.fail(name + ": families not vertex-disjoint");
                continue;
            }
            starts.insert(p.start());
            finishes.insert(p.finish());
            for (VertexId v : p.verts)
                if (!seen.insert(v).second) rep.fail(name + ": families not vertex-disjoint");
        }
        if (!circuits_allowed || !fam.empty()) {
            if (!from.empty() && !fam.empty() && !fam.front().circuit) {
                std::set<VertexId> want_from(from.begin(), from.end());
                std::set<VertexId> want_to(to.begin(), to.end());
                if (starts != want_from) rep.fail(name + ": sources must cover the boundary set");
                if (finishes != want_to) rep.fail(name + ": targets must cover the boundary set");
            }
        }
    };

    if (s.embedding.mode == EmbedMode::Disk) {
        check_family(s.horizontals, "horizontals", s.embedding.mark("R"), s.embedding.mark("L"),
                     false);
        check_family(s.verticals, "verticals", s.embedding.mark("B"), s.embedding.mark("T"),
                     false);
    } else if (s.embedding.mode == EmbedMode::Cylinder) {
        check_family(s.horizontals, "circuits", {}, {}, true);
        check_family(s.verticals, "verticals", s.embedding.mark("T"), s.embedding.mark("B"),
                     false);
    } else {
        rep.fail("mode: routed systems need a disk or cylinder embedding");
    }
    return rep;
}

SideConstraints side_constraints(const RoutedSystem& original) {
    SideConstraints sc;
    if (original.verticals.empty() || original.horizontals.empty())
        throw std::invalid_argument("side_constraints: both families must be present");
    auto vorder = left_right_order(original.embedding, original.verticals);
    const DirectedPath& rightmost = original.verticals[vorder.back()];
    auto rs = side_with(original.embedding, rightmost, "R", "L");
    sc.forbidden_for_verticals = std::set<VertexId>(rs.begin(), rs.end());
    auto horder = top_bottom_order(original.embedding, original.horizontals);
    const DirectedPath& topmost = original.horizontals[horder.back()];
    auto ts = side_with(original.embedding, topmost, "T", "B");
    sc.forbidden_for_horizontals = std::set<VertexId>(ts.begin(), ts.end());
    return sc;
}

bool reverse_property_holds(const RoutedSystem& s, std::string* why) {
    for (std::size_t h = 0; h < s.horizontals.size(); ++h)
        for (std::size_t v = 0; v < s.verticals.size(); ++v)
            if (!hits_in_reverse(s.horizontals[h], s.verticals[v])) {
                if (why)
                    *why = "horizontal " + std::to_string(h) + " and vertical " +
                           std::to_string(v) + " do not hit in reverse";
                return false;
            }
    return true;
}

namespace {

struct ContractionOutcome {
    RotationEmbedding embedding;
    std::vector<DirectedPath> horizontals, verticals;
    std::vector<ScriptStep> steps;
};

// Delete everything outside the routing, then butterfly-contract every edge
// shared by two paths.
ContractionOutcome contract_to_minor(const RotationEmbedding& emb,
                                     std::vector<DirectedPath> horizontals,
                                     std::vector<DirectedPath> verticals) {
    ContractionOutcome out;
    const Digraph& host = emb.host;
    std::set<EdgeId> used = union_edges(horizontals, verticals);
    std::set<VertexId> used_verts;
    for (const auto* fam : {&horizontals, &verticals})
        for (const auto& p : *fam) used_verts.insert(p.verts.begin(), p.verts.end());

    RotationEmbedding cur = emb;
    std::vector<VertexId> kill_verts;
    for (VertexId v : host.vertices())
        if (!used_verts.count(v)) kill_verts.push_back(v);
    for (VertexId v : kill_verts) out.steps.push_back({StepKind::DeleteVertex, v});
    cur = delete_vertices_embedded(cur, kill_verts);
    std::vector<EdgeId> kill_edges;
    for (const Edge& e : cur.host.edges())
        if (!used.count(e.id)) kill_edges.push_back(e.id);
    for (EdgeId e : kill_edges) {
        out.steps.push_back({StepKind::DeleteEdge, e});
        cur = delete_edge_embedded(cur, e);
    }

    // shared edges, ascending ids; ids survive contraction
    std::set<EdgeId> hedges, vedges;
    for (const auto& p : horizontals) hedges.insert(p.edges.begin(), p.edges.end());
    for (const auto& p : verticals) vedges.insert(p.edges.begin(), p.edges.end());
    std::vector<EdgeId> shared;
    std::set_intersection(hedges.begin(), hedges.end(), vedges.begin(), vedges.end(),
                          std::back_inserter(shared));

    auto apply_merge = [&](std::vector<DirectedPath>& fam, EdgeId eid, VertexId tail,
                           VertexId head, VertexId merged) {
        for (auto& p : fam) {
            std::vector<VertexId> nv;
            std::vector<EdgeId> ne;
            for (std::size_t i = 0; i < p.verts.size(); ++i) {
                VertexId v = p.verts[i];
                if (v == tail || v == head) v = merged;
                if (!nv.empty() && nv.back() == v &&
                    (i == 0 || p.edges[i - 1] == eid)) {
                    // the contracted edge collapses; drop it
                    continue;
                }
                if (!nv.empty() && nv.back() == v) {
                    // adjacent duplicate without the contracted edge: keep the
                    // edge (parallel edge case cannot arise on simple paths)
                }
                nv.push_back(v);
                if (i < p.edges.size() && p.edges[i] != eid) ne.push_back(p.edges[i]);
            }
            // rebuild edges: remove the contracted edge wherever it sat
            std::vector<EdgeId> ne2;
            for (EdgeId e : p.edges)
                if (e != eid) ne2.push_back(e);
            p.edges = ne2;
            // rebuild verts from edges to stay consistent
            p.verts = nv;
        }
    };

    for (EdgeId eid : shared) {
        const Edge& e = cur.host.edge(eid);
        if (!is_butterfly_contractible(cur.host, eid))
            throw std::logic_error("reroute: shared edge not butterfly contractible");
        VertexId tail = e.tail, head = e.head;
        VertexId merged = std::min(tail, head);
        cur = contract_edge_embedded(cur, eid);
        out.steps.push_back({StepKind::Contract, eid});
        apply_merge(horizontals, eid, tail, head, merged);
        apply_merge(verticals, eid, tail, head, merged);
    }

    out.embedding = cur;
    out.horizontals = std::move(horizontals);
    out.verticals = std::move(verticals);
    return out;
}

// Enumerate all full routings of one family (one disjoint path per source pin
// finishing on the target pins) that avoid the forbidden side.
std::vector<std::vector<DirectedPath>> all_family_routings(const Digraph& d,
                                                           const std::vector<VertexId>& from,
                                                           const std::vector<VertexId>& to,
                                                           const std::set<VertexId>& forbidden,
                                                           long& budget) {
    std::vector<std::vector<DirectedPath>> out;
    Digraph pruned = d;
    if (!forbidden.empty())
        pruned = d.without_vertices(std::vector<VertexId>(forbidden.begin(), forbidden.end()));
    detail::enumerate_disjoint_systems(pruned, from, to, budget,
                                       [&](const std::vector<DirectedPath>& sys) {
                                           out.push_back(sys);
                                           return true;
                                       });
    return out;
}

RerouteResult finish_reroute(const RoutedSystem& s, std::vector<DirectedPath> horizontals,
                             std::vector<DirectedPath> verticals, long considered) {
    // keep canonical family order: horizontals by R pin order of the input,
    // verticals by B pin order
    std::vector<VertexId> hpins, vpins;
    for (const auto& p : s.horizontals) hpins.push_back(p.start());
    for (const auto& p : s.verticals) vpins.push_back(p.start());
    if (s.embedding.mode == EmbedMode::Disk) {
        order_by_start(horizontals, hpins);
        order_by_start(verticals, vpins);
    }
    auto res = contract_to_minor(s.embedding, std::move(horizontals), std::move(verticals));
    RerouteResult rr;
    rr.model.steps = res.steps;
    for (VertexId v : res.embedding.host.vertices()) rr.model.final_map[v] = v;
    rr.system.embedding = res.embedding;
    rr.system.horizontals = res.horizontals;
    rr.system.verticals = res.verticals;
    rr.considered = considered;
    return rr;
}

}  // namespace

RerouteResult reroute_disk(const RoutedSystem& s, RerouteMode mode, long budget) {
    auto vr = validate_routed_system(s);
    if (!vr.ok) throw std::invalid_argument("reroute_disk: " + vr.violations[0]);
    if (s.embedding.mode != EmbedMode::Disk)
        throw std::invalid_argument("reroute_disk: disk embedding required");
    if (s.horizontals.empty() || s.verticals.empty())
        throw std::invalid_argument("reroute_disk: both path families must be present");
    const Digraph& d = s.embedding.host;
    SideConstraints sc = side_constraints(s);

    if (mode == RerouteMode::Exact) {
        long vb = budget, hb = budget;
        auto vsystems = all_family_routings(d, s.embedding.mark("B"), s.embedding.mark("T"),
                                            sc.forbidden_for_verticals, vb);
        auto hsystems = all_family_routings(d, s.embedding.mark("R"), s.embedding.mark("L"),
                                            sc.forbidden_for_horizontals, hb);
        if (vsystems.empty() || hsystems.empty())
            throw std::invalid_argument("reroute_disk: no admissible routing");

        const long nv = static_cast<long>(vsystems.size());
        const long nh = static_cast<long>(hsystems.size());
        long best_cost = -1;
        long best_v = -1, best_h = -1;
        std::vector<int> best_key;
#ifdef _OPENMP
#pragma omp parallel
        {
            long lcost = -1, lv = -1, lh = -1;
            std::vector<int> lkey;
#pragma omp for schedule(dynamic, 4)
            for (long i = 0; i < nv; ++i) {
                for (long j = 0; j < nh; ++j) {
                    long cost =
                        static_cast<long>(union_edges(hsystems[j], vsystems[i]).size());
                    std::vector<int> key = serialize_system(hsystems[j]);
                    auto vk = serialize_system(vsystems[i]);
                    key.insert(key.end(), vk.begin(), vk.end());
                    if (lcost == -1 || cost < lcost || (cost == lcost && key < lkey)) {
                        lcost = cost;
                        lkey = key;
                        lv = i;
                        lh = j;
                    }
                }
            }
#pragma omp critical
            {
                if (best_cost == -1 || lcost < best_cost ||
                    (lcost == best_cost && lkey < best_key)) {
                    if (lcost != -1) {
                        best_cost = lcost;
                        best_key = lkey;
                        best_v = lv;
                        best_h = lh;
                    }
                }
            }
        }
#else
        for (long i = 0; i < nv; ++i)
            for (long j = 0; j < nh; ++j) {
                long cost = static_cast<long>(union_edges(hsystems[j], vsystems[i]).size());
                std::vector<int> key = serialize_system(hsystems[j]);
                auto vk = serialize_system(vsystems[i]);
                key.insert(key.end(), vk.begin(), vk.end());
                if (best_cost == -1 || cost < best_cost ||
                    (cost == best_cost && key < best_key)) {
                    best_cost = cost;
                    best_key = key;
                    best_v = i;
                    best_h = j;
                }
            }
#endif
        return finish_reroute(s, hsystems[best_h], vsystems[best_v], nv * nh);
    }

    // local mode: single-path improvement to a fixed point
    std::vector<DirectedPath> horizontals = s.horizontals, verticals = s.verticals;
    long considered = 0;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int fam = 0; fam < 2 && !improved; ++fam) {
            auto& family = fam == 0 ? verticals : horizontals;
            const auto& forbidden =
                fam == 0 ? sc.forbidden_for_verticals : sc.forbidden_for_horizontals;
            const auto& other = fam == 0 ? horizontals : verticals;
            for (std::size_t i = 0; i < family.size() && !improved; ++i) {
                ++considered;
                // free edges: anything already used elsewhere
                std::set<EdgeId> free_edges;
                for (std::size_t j = 0; j < family.size(); ++j)
                    if (j != i)
                        free_edges.insert(family[j].edges.begin(), family[j].edges.end());
                for (const auto& p : other) free_edges.insert(p.edges.begin(), p.edges.end());
                std::set<VertexId> blocked(forbidden.begin(), forbidden.end());
                for (std::size_t j = 0; j < family.size(); ++j)
                    if (j != i) blocked.insert(family[j].verts.begin(), family[j].verts.end());
                // 0/1 Dijkstra from start to finish
                VertexId src = family[i].start(), dst = family[i].finish();
                std::map<VertexId, std::pair<long, std::pair<VertexId, EdgeId>>> dist;
                std::deque<VertexId> dq{src};
                dist[src] = {0, {src, -1}};
                while (!dq.empty()) {
                    VertexId v = dq.front();
                    dq.pop_front();
                    long base = dist[v].first;
                    for (EdgeId e : d.out_edges(v)) {
                        VertexId h = d.edge(e).head;
                        if (blocked.count(h) && h != dst) continue;
                        long w = free_edges.count(e) ? 0 : 1;
                        auto it = dist.find(h);
                        if (it == dist.end() || base + w < it->second.first) {
                            dist[h] = {base + w, {v, e}};
                            if (w == 0)
                                dq.push_front(h);
                            else
                                dq.push_back(h);
                        }
                    }
                }
                if (!dist.count(dst)) continue;
                // rebuild candidate path
                DirectedPath cand;
                for (VertexId v = dst; v != src; v = dist[v].second.first) {
                    cand.verts.push_back(v);
                    cand.edges.push_back(dist[v].second.second);
                }
                cand.verts.push_back(src);
                std::reverse(cand.verts.begin(), cand.verts.end());
                std::reverse(cand.edges.begin(), cand.edges.end());
                std::string why;
                if (!is_valid_path(d, cand, &why)) continue;  // revisits a vertex via 0-arcs
                auto old_family = family;
                auto old_cost = union_edges(horizontals, verticals).size();
                family[i] = cand;
                auto new_cost = union_edges(horizontals, verticals).size();
                if (new_cost < old_cost) {
                    improved = true;
                } else {
                    family = old_family;
                }
            }
        }
        if (considered > budget) break;
    }
    return finish_reroute(s, horizontals, verticals, considered);
}

bool cylinder_property_holds(const RoutedSystem& s, std::string* why) {
    auto fs = trace_faces(s.embedding);
    const Digraph& d = s.embedding.host;
    // the two boundary faces: take the T-face and B-face via marks
    int tf = face_containing(d, fs, s.embedding.mark("T"));
    int bf = face_containing(d, fs, s.embedding.mark("B"));
    if (tf < 0 || bf < 0 || tf == bf) {
        if (why) *why = "boundary faces not identified";
        return false;
    }
    auto cut = annulus_cut(s.embedding, fs, tf, bf);
    for (std::size_t qi = 0; qi < s.horizontals.size(); ++qi) {
        const DirectedPath& q = s.horizontals[qi];
        if (!q.circuit) {
            if (why) *why = "horizontal " + std::to_string(qi) + " is not a circuit";
            return false;
        }
        if (winding_number(cut, q) == 0) {
            if (why) *why = "circuit " + std::to_string(qi) + " does not separate";
            return false;
        }
        for (std::size_t pi = 0; pi < s.verticals.size(); ++pi) {
            const DirectedPath& p = s.verticals[pi];
            // consecutive visits of q along p
            std::vector<int> visits;
            for (std::size_t k = 0; k < p.verts.size(); ++k)
                if (q.position_of(p.verts[k]) >= 0) visits.push_back(static_cast<int>(k));
            for (std::size_t k = 0; k + 1 < visits.size(); ++k) {
                DirectedPath sub = p.slice(visits[k], visits[k + 1]);
                // arc of q from sub.finish back to sub.start
                int from = q.position_of(sub.finish());
                int to = q.position_of(sub.start());
                DirectedPath closed = sub;
                int L = static_cast<int>(q.edges.size());
                for (int step = from; step % L != (to % L + L) % L || step == from;) {
                    closed.edges.push_back(q.edges[step % L]);
                    step = step + 1;
                    closed.verts.push_back(q.verts[step % L == 0 ? L : step % L]);
                    if (static_cast<int>(closed.edges.size()) > L + 1) break;
                    if (step % L == (to % L + L) % L) break;
                }
                if (winding_number(cut, closed) != 0) {
                    if (why)
                        *why = "vertical " + std::to_string(pi) + " wraps with circuit " +
                               std::to_string(qi);
                    return false;
                }
            }
        }
    }
    return true;
}

RerouteResult reroute_cylinder(const RoutedSystem& s, RerouteMode mode, long budget) {
    auto vr = validate_routed_system(s);
    if (!vr.ok) throw std::invalid_argument("reroute_cylinder: " + vr.violations[0]);
    if (s.embedding.mode != EmbedMode::Cylinder)
        throw std::invalid_argument("reroute_cylinder: cylinder embedding required");
    const Digraph& d = s.embedding.host;

    // circuits must separate the boundaries, all with the same orientation
    auto fs = trace_faces(s.embedding);
    int tf = face_containing(d, fs, s.embedding.mark("T"));
    int bf = face_containing(d, fs, s.embedding.mark("B"));
    if (tf < 0 || bf < 0 || tf == bf)
        throw std::invalid_argument("reroute_cylinder: boundary faces not identified");
    auto cut = annulus_cut(s.embedding, fs, tf, bf);
    int sign = 0;
    for (const auto& q : s.horizontals) {
        int w = winding_number(cut, q);
        if (w == 0) throw std::invalid_argument("reroute_cylinder: non-separating circuit");
        int sgn = w > 0 ? 1 : -1;
        if (sign == 0) sign = sgn;
        if (sign != sgn)
            throw std::invalid_argument("reroute_cylinder: inconsistent circuit orientations");
    }

    // route the T->B paths on the fewest edges, circuit edges free
    long vb = budget;
    auto systems = all_family_routings(d, s.embedding.mark("T"), s.embedding.mark("B"), {}, vb);
    if (systems.empty()) throw std::invalid_argument("reroute_cylinder: no admissible routing");
    std::set<EdgeId> circuit_edges;
    for (const auto& q : s.horizontals)
        circuit_edges.insert(q.edges.begin(), q.edges.end());
    long best = -1;
    std::size_t best_i = 0;
    std::vector<int> best_key;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        std::set<EdgeId> all(circuit_edges);
        for (const auto& p : systems[i]) all.insert(p.edges.begin(), p.edges.end());
        long cost = static_cast<long>(all.size());
        auto key = serialize_system(systems[i]);
        if (best == -1 || cost < best || (cost == best && key < best_key)) {
            best = cost;
            best_i = i;
            best_key = key;
        }
    }
    (void)mode;
    auto rr = finish_reroute(s, s.horizontals, systems[best_i],
                             static_cast<long>(systems.size()));
    std::string why;
    if (!cylinder_property_holds(rr.system, &why))
        throw std::runtime_error("reroute_cylinder: property failed after rerouting: " + why);
    return rr;
}

}  // namespace digrid
