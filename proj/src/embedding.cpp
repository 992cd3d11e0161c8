#include "digrid/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace digrid {

const std::vector<VertexId>& RotationEmbedding::mark(const std::string& name) const {
    static const std::vector<VertexId> empty;
    auto it = marks.find(name);
    return it == marks.end() ? empty : it->second;
}

RotationEmbedding RotationEmbedding::from_edge_lists(
    Digraph host, const std::map<VertexId, std::vector<EdgeId>>& rot, EmbedMode mode,
    std::map<std::string, std::vector<VertexId>> marks) {
    RotationEmbedding e;
    e.mode = mode;
    e.marks = std::move(marks);
    for (const auto& [v, ids] : rot) {
        std::vector<EndRef> ends;
        std::map<EdgeId, int> seen;
        for (EdgeId id : ids) {
            const Edge& ed = host.edge(id);
            int end;
            if (ed.tail == ed.head) {
                end = seen[id]++;  // loop: tail end first
            } else if (ed.tail == v) {
                end = 0;
            } else {
                end = 1;
            }
            ends.push_back({id, end});
        }
        e.rotation[v] = std::move(ends);
    }
    e.host = std::move(host);
    return e;
}

std::map<VertexId, std::vector<EdgeId>> RotationEmbedding::rotation_edge_lists() const {
    std::map<VertexId, std::vector<EdgeId>> out;
    for (const auto& [v, ends] : rotation) {
        auto& ids = out[v];
        for (const EndRef& er : ends) ids.push_back(er.edge);
    }
    return out;
}

RotationEmbedding embed_from_coordinates(Digraph host,
                                         const std::map<VertexId, std::pair<double, double>>& xy,
                                         EmbedMode mode,
                                         std::map<std::string, std::vector<VertexId>> marks) {
    RotationEmbedding e;
    e.mode = mode;
    e.marks = std::move(marks);
    for (VertexId v : host.vertices()) {
        auto [px, py] = xy.at(v);
        struct Item {
            double ang;
            EdgeId id;
            int end;
        };
        std::vector<Item> items;
        for (EdgeId id : host.out_edges(v)) {
            const Edge& ed = host.edge(id);
            if (ed.head == ed.tail) throw std::invalid_argument("embed_from_coordinates: loop");
            auto [qx, qy] = xy.at(ed.head);
            items.push_back({std::atan2(qy - py, qx - px), id, 0});
        }
        for (EdgeId id : host.in_edges(v)) {
            const Edge& ed = host.edge(id);
            auto [qx, qy] = xy.at(ed.tail);
            items.push_back({std::atan2(qy - py, qx - px), id, 1});
        }
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
            if (a.ang != b.ang) return a.ang < b.ang;
            return a.id < b.id;
        });
        std::vector<EndRef> ends;
        for (const Item& it : items) ends.push_back({it.id, it.end});
        e.rotation[v] = std::move(ends);
    }
    e.host = std::move(host);
    return e;
}

int dart_dir(int dart) { return dart & 1; }

EdgeId dart_edge(const Digraph& d, int dart) { return d.edges()[dart >> 1].id; }

VertexId dart_origin(const Digraph& d, int dart) {
    const Edge& e = d.edges()[dart >> 1];
    return dart_dir(dart) == 0 ? e.tail : e.head;
}

VertexId dart_target(const Digraph& d, int dart) {
    const Edge& e = d.edges()[dart >> 1];
    return dart_dir(dart) == 0 ? e.head : e.tail;
}

int FaceStructure::dart_of(const Digraph& d, EdgeId e, int dir) const {
    int pos = -1;
    const auto& es = d.edges();
    auto it = std::lower_bound(es.begin(), es.end(), e,
                               [](const Edge& a, EdgeId id) { return a.id < id; });
    pos = static_cast<int>(it - es.begin());
    return 2 * pos + dir;
}

namespace {

// Position of a given end in a rotation list.
int end_position(const std::vector<EndRef>& rot, const EndRef& er) {
    for (std::size_t i = 0; i < rot.size(); ++i)
        if (rot[i] == er) return static_cast<int>(i);
    return -1;
}

// Arriving end of a dart at its target.
EndRef arriving_end(const Digraph& d, int dart) {
    return {dart_edge(d, dart), dart_dir(dart) == 0 ? 1 : 0};
}

// Dart leaving along a given end.
int departing_dart(const Digraph& d, const FaceStructure& fs, const EndRef& er) {
    return fs.dart_of(d, er.edge, er.end == 0 ? 0 : 1);
}

}  // namespace

FaceStructure trace_faces(const RotationEmbedding& e) {
    const Digraph& d = e.host;
    FaceStructure fs;
    fs.dart_count = static_cast<int>(2 * d.edge_count());
    fs.face_of.assign(fs.dart_count, -1);
    for (int start = 0; start < fs.dart_count; ++start) {
        if (fs.face_of[start] != -1) continue;
        std::vector<int> face;
        int dart = start;
        while (fs.face_of[dart] == -1) {
            fs.face_of[dart] = static_cast<int>(fs.faces.size());
            face.push_back(dart);
            VertexId w = dart_target(d, dart);
            const auto& rot = e.rotation.at(w);
            int pos = end_position(rot, arriving_end(d, dart));
            if (pos < 0) throw std::invalid_argument("rotation misses an incident end");
            // ccw rotations: the face on the left continues via the rotation
            // predecessor of the arriving end
            int n = static_cast<int>(rot.size());
            const EndRef& next = rot[(pos - 1 + n) % n];
            dart = departing_dart(d, fs, next);
        }
        fs.faces.push_back(std::move(face));
    }
    return fs;
}

namespace {

// Marked-vertex visit sequence along a face walk.
std::vector<VertexId> face_vertex_walk(const Digraph& d, const std::vector<int>& face) {
    std::vector<VertexId> out;
    for (int dart : face) out.push_back(dart_origin(d, dart));
    return out;
}

// Does the cyclic sequence decompose into blocks matching `roles` in order,
// visiting each marked vertex exactly once?
bool cyclic_blocks_match(const std::vector<VertexId>& walk,
                         const std::vector<const std::vector<VertexId>*>& roles) {
    std::map<VertexId, int> role_of;
    std::size_t total = 0;
    for (std::size_t r = 0; r < roles.size(); ++r)
        for (VertexId v : *roles[r]) {
            role_of[v] = static_cast<int>(r);
            ++total;
        }
    std::vector<std::pair<VertexId, int>> marked;
    for (VertexId v : walk) {
        auto it = role_of.find(v);
        if (it != role_of.end()) marked.push_back({v, it->second});
    }
    if (marked.size() != total) return false;
    std::set<VertexId> dedup;
    for (auto& [v, r] : marked)
        if (!dedup.insert(v).second) return false;
    if (marked.empty()) return true;
    // Rotate so a block boundary is at position 0, then roles must be
    // non-decreasing with no role revisited.
    for (std::size_t shift = 0; shift < marked.size(); ++shift) {
        bool ok = true;
        int prev = -1;
        std::set<int> used;
        for (std::size_t i = 0; i < marked.size() && ok; ++i) {
            int r = marked[(shift + i) % marked.size()].second;
            if (r != prev) {
                if (used.count(r)) ok = false;
                used.insert(r);
                prev = r;
            }
        }
        if (ok) {
            // roles must appear in listed cyclic order
            std::vector<int> order;
            for (std::size_t i = 0; i < marked.size(); ++i) {
                int r = marked[(shift + i) % marked.size()].second;
                if (order.empty() || order.back() != r) order.push_back(r);
            }
            // order must be a subsequence of roles 0..k-1 rotated to order[0]
            bool seq = true;
            for (std::size_t i = 1; i < order.size(); ++i)
                if (order[i] <= order[i - 1]) seq = false;
            if (seq) return true;
        }
    }
    return false;
}

int weak_component_count(const Digraph& d) {
    std::map<VertexId, int> comp;
    int c = 0;
    for (VertexId s : d.vertices()) {
        if (comp.count(s)) continue;
        ++c;
        std::deque<VertexId> q{s};
        comp[s] = c;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop_front();
            auto push = [&](VertexId u) {
                if (!comp.count(u)) {
                    comp[u] = c;
                    q.push_back(u);
                }
            };
            for (EdgeId e : d.out_edges(v)) push(d.edge(e).head);
            for (EdgeId e : d.in_edges(v)) push(d.edge(e).tail);
        }
    }
    return c;
}

}  // namespace

ValidationReport validate_embedding(const RotationEmbedding& e) {
    ValidationReport rep;
    const Digraph& d = e.host;

    // Rotation completeness: every vertex lists exactly its incident ends.
    bool rotation_ok = true;
    for (VertexId v : d.vertices()) {
        std::multiset<std::pair<EdgeId, int>> want;
        for (EdgeId id : d.out_edges(v)) want.insert({id, 0});
        for (EdgeId id : d.in_edges(v)) want.insert({id, 1});
        std::multiset<std::pair<EdgeId, int>> got;
        auto it = e.rotation.find(v);
        if (it != e.rotation.end())
            for (const EndRef& er : it->second) got.insert({er.edge, er.end});
        if (want != got) {
            rotation_ok = false;
            rep.fail("rotation: vertex " + std::to_string(v) +
                     " does not list exactly its incident ends");
        }
    }
    if (!rotation_ok) return rep;

    FaceStructure fs = trace_faces(e);
    int components = weak_component_count(d);
    long faces = static_cast<long>(fs.faces.size());
    long edgeless = 0;
    {
        std::set<VertexId> touched;
        for (const Edge& ed : d.edges()) {
            touched.insert(ed.tail);
            touched.insert(ed.head);
        }
        std::map<VertexId, int> comp;
        // isolated vertices each count one sphere face
        for (VertexId v : d.vertices())
            if (!touched.count(v)) ++edgeless;
    }
    long v = static_cast<long>(d.vertex_count());
    long ecnt = static_cast<long>(d.edge_count());
    if (v - ecnt + faces + edgeless != 1 + components)
        rep.fail("euler: V - E + F = " + std::to_string(v - ecnt + faces + edgeless) +
                 ", expected " + std::to_string(1 + components));
    if ((e.mode == EmbedMode::Disk || e.mode == EmbedMode::Cylinder) && components > 1)
        rep.fail("euler: boundary modes require a connected graph");
    if (!rep.ok) return rep;

    auto check_degrees = [&](const std::string& role, int want_in, int want_out) {
        for (VertexId bv : e.mark(role)) {
            if (d.in_degree(bv) != want_in || d.out_degree(bv) != want_out)
                rep.fail("degree: " + role + " vertex " + std::to_string(bv) + " has (in,out)=(" +
                         std::to_string(d.in_degree(bv)) + "," + std::to_string(d.out_degree(bv)) +
                         ")");
        }
    };

    if (e.mode == EmbedMode::Disk) {
        const auto &t = e.mark("T"), &l = e.mark("L"), &b = e.mark("B"), &r = e.mark("R");
        std::set<VertexId> all;
        std::size_t total = t.size() + l.size() + b.size() + r.size();
        for (const auto* m : {&t, &l, &b, &r}) all.insert(m->begin(), m->end());
        if (all.size() != total) rep.fail("marks: boundary roles overlap");
        if (t.size() != b.size()) rep.fail("marks: |T| != |B|");
        if (l.size() != r.size()) rep.fail("marks: |L| != |R|");
        check_degrees("B", 0, 1);
        check_degrees("R", 0, 1);
        check_degrees("T", 1, 0);
        check_degrees("L", 1, 0);
        // Outer face walk is clockwise, so the ccw order T,L,B,R reads as
        // cyclic blocks R,B,L,T along some face.
        bool found = false;
        for (const auto& face : fs.faces) {
            auto walk = face_vertex_walk(d, face);
            if (cyclic_blocks_match(walk, {&r, &b, &l, &t})) {
                found = true;
                break;
            }
        }
        if (!found && total > 0)
            rep.fail("boundary-order: no face carries T,L,B,R in counter-clockwise order");
    } else if (e.mode == EmbedMode::Cylinder) {
        const auto &t = e.mark("T"), &b = e.mark("B");
        std::set<VertexId> all(t.begin(), t.end());
        all.insert(b.begin(), b.end());
        if (all.size() != t.size() + b.size()) rep.fail("marks: boundary roles overlap");
        if (t.size() != b.size()) rep.fail("marks: |T| != |B|");
        check_degrees("T", 0, 1);
        check_degrees("B", 1, 0);
        int tf = face_containing(d, fs, t);
        int bf = face_containing(d, fs, b);
        if (tf < 0 || bf < 0)
            rep.fail("boundary-order: T or B not on a single face");
        else if (tf == bf && !t.empty())
            rep.fail("boundary-order: T and B share a face");
    }
    return rep;
}

namespace {

// Ends of path p at interior vertex u: (incoming end, outgoing end).
std::pair<EndRef, EndRef> path_ends_at(const Digraph& d, const DirectedPath& p, VertexId u) {
    int pos = p.position_of(u);
    if (pos < 0) throw std::invalid_argument("vertex not on path");
    bool interior = pos > 0 && pos < static_cast<int>(p.edges.size());
    if (p.circuit && p.verts.size() > 1) {
        // every circuit vertex is interior; incoming edge for position 0 is the last
        int in_idx = pos == 0 ? static_cast<int>(p.edges.size()) - 1 : pos - 1;
        return {{p.edges[in_idx], 1}, {p.edges[pos], 0}};
    }
    if (!interior) throw std::invalid_argument("endpoint has no sidedness");
    return {{p.edges[pos - 1], 1}, {p.edges[pos], 0}};
}

}  // namespace

MeetingKind classify_meeting(const RotationEmbedding& e, const DirectedPath& p,
                             const DirectedPath& q, VertexId u) {
    if (p.position_of(u) < 0 || q.position_of(u) < 0)
        throw std::invalid_argument("classify_meeting: vertex not shared");
    auto [pin, pout] = path_ends_at(e.host, p, u);
    auto [qin, qout] = path_ends_at(e.host, q, u);
    if (qin == pin || qin == pout || qout == pin || qout == pout)
        throw std::invalid_argument("classify_meeting: paths share an edge at the vertex");
    const auto& rot = e.rotation.at(u);
    int ip = end_position(rot, pin), op = end_position(rot, pout);
    int iq = end_position(rot, qin), oq = end_position(rot, qout);
    if (ip < 0 || op < 0 || iq < 0 || oq < 0)
        throw std::invalid_argument("classify_meeting: rotation misses an end");
    auto side = [&](int x) {
        // true when x lies in the ccw arc from op to ip
        int n = static_cast<int>(rot.size());
        for (int i = (op + 1) % n; i != ip; i = (i + 1) % n)
            if (i == x) return true;
        return false;
    };
    return side(iq) == side(oq) ? MeetingKind::Bounce : MeetingKind::Cross;
}

std::vector<VertexId> side_with(const RotationEmbedding& e, const DirectedPath& curve,
                                const std::string& mark_name, const std::string& other_side) {
    const Digraph& d = e.host;
    std::set<VertexId> cut(curve.verts.begin(), curve.verts.end());
    std::vector<VertexId> keep;
    for (VertexId v : d.vertices())
        if (!cut.count(v)) keep.push_back(v);
    Digraph rest = d.induced(keep);
    std::set<VertexId> mine(e.mark(mark_name).begin(), e.mark(mark_name).end());
    std::set<VertexId> other(e.mark(other_side).begin(), e.mark(other_side).end());
    std::vector<VertexId> out;
    std::set<VertexId> seen;
    for (VertexId s : rest.vertices()) {
        if (seen.count(s)) continue;
        // collect weak component of s
        std::vector<VertexId> comp{s};
        seen.insert(s);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            VertexId v = comp[i];
            auto push = [&](VertexId u) {
                if (seen.insert(u).second) comp.push_back(u);
            };
            for (EdgeId id : rest.out_edges(v)) push(rest.edge(id).head);
            for (EdgeId id : rest.in_edges(v)) push(rest.edge(id).tail);
        }
        bool has_mine = false, has_other = false;
        for (VertexId v : comp) {
            if (mine.count(v)) has_mine = true;
            if (other.count(v)) has_other = true;
        }
        if (has_mine && has_other)
            throw std::invalid_argument("curve does not separate " + mark_name + " from " +
                                        other_side);
        if (has_mine) out.insert(out.end(), comp.begin(), comp.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<int> separating_order(const RotationEmbedding& e,
                                  const std::vector<DirectedPath>& curves,
                                  const std::string& low_mark, const std::string& high_mark) {
    const std::size_t n = curves.size();
    // Disjointness.
    std::set<VertexId> seen;
    for (const auto& c : curves)
        for (VertexId v : c.verts)
            if (!seen.insert(v).second)
                throw std::invalid_argument("curves are not vertex-disjoint");
    std::vector<std::set<VertexId>> high_side(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto hs = side_with(e, curves[i], high_mark, low_mark);
        high_side[i] = std::set<VertexId>(hs.begin(), hs.end());
    }
    auto before = [&](std::size_t i, std::size_t j) {
        // i on the low side of j: i avoids j's high side... but i must sit on
        // SOME side; require no vertex of i inside j's high side.
        for (VertexId v : curves[i].verts)
            if (high_side[j].count(v)) return false;
        return true;
    };
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool ij = before(order[i], order[j]), ji = before(order[j], order[i]);
            if (ij == ji)
                throw std::invalid_argument("curves are not totally ordered");
        }
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return before(i, j); });
    return order;
}

}  // namespace

std::vector<int> left_right_order(const RotationEmbedding& e,
                                  const std::vector<DirectedPath>& curves) {
    return separating_order(e, curves, "L", "R");
}

std::vector<int> top_bottom_order(const RotationEmbedding& e,
                                  const std::vector<DirectedPath>& curves) {
    return separating_order(e, curves, "B", "T");
}

RotationEmbedding reversed_orientation(const RotationEmbedding& e) {
    RotationEmbedding out = e;
    for (auto& [v, rot] : out.rotation) std::reverse(rot.begin(), rot.end());
    auto l = out.marks.find("L"), r = out.marks.find("R");
    if (l != out.marks.end() && r != out.marks.end()) std::swap(l->second, r->second);
    return out;
}

RotationEmbedding contract_edge_embedded(const RotationEmbedding& e, EdgeId id) {
    const Edge& ce = e.host.edge(id);
    if (ce.tail == ce.head) throw std::invalid_argument("contract: loop edge");
    VertexId keep = std::min(ce.tail, ce.head), gone = std::max(ce.tail, ce.head);
    VertexId merged;
    Digraph g = contract_edge_merge(e.host, id, &merged);

    // Merge rotations: splice `gone`'s rotation (after the contracted end)
    // into `keep`'s at the contracted end's position.
    auto rot_keep = e.rotation.at(keep);
    auto rot_gone = e.rotation.at(gone);
    EndRef end_keep{id, ce.tail == keep ? 0 : 1};
    EndRef end_gone{id, ce.tail == gone ? 0 : 1};
    int pk = end_position(rot_keep, end_keep), pg = end_position(rot_gone, end_gone);
    if (pk < 0 || pg < 0) throw std::invalid_argument("contract: rotation misses end");
    std::vector<EndRef> merged_rot;
    for (int i = 0; i < static_cast<int>(rot_keep.size()); ++i) {
        if (i == pk) {
            int m = static_cast<int>(rot_gone.size());
            for (int j = 1; j < m; ++j) merged_rot.push_back(rot_gone[(pg + j) % m]);
        } else {
            merged_rot.push_back(rot_keep[i]);
        }
    }
    RotationEmbedding out;
    out.mode = e.mode;
    out.marks = e.marks;
    out.rotation = e.rotation;
    out.rotation.erase(gone);
    out.rotation[keep] = std::move(merged_rot);
    // Drop ends of edges that vanished (merge-created loops).
    std::set<EdgeId> alive;
    for (const Edge& ed : g.edges()) alive.insert(ed.id);
    for (auto& [v, rot] : out.rotation) {
        std::vector<EndRef> filtered;
        for (const EndRef& er : rot)
            if (alive.count(er.edge)) filtered.push_back(er);
        rot = std::move(filtered);
    }
    for (auto& [name, vs] : out.marks)
        for (auto& v : vs)
            if (v == gone) v = keep;
    out.host = std::move(g);
    return out;
}

RotationEmbedding delete_edge_embedded(const RotationEmbedding& e, EdgeId id) {
    RotationEmbedding out = e;
    out.host = e.host.without_edge(id);
    for (auto& [v, rot] : out.rotation) {
        std::vector<EndRef> filtered;
        for (const EndRef& er : rot)
            if (er.edge != id) filtered.push_back(er);
        rot = std::move(filtered);
    }
    return out;
}

RotationEmbedding delete_vertices_embedded(const RotationEmbedding& e,
                                           const std::vector<VertexId>& vs) {
    RotationEmbedding out = e;
    out.host = e.host.without_vertices(vs);
    std::set<EdgeId> alive;
    for (const Edge& ed : out.host.edges()) alive.insert(ed.id);
    std::set<VertexId> gone(vs.begin(), vs.end());
    std::map<VertexId, std::vector<EndRef>> rot;
    for (auto& [v, r] : out.rotation) {
        if (gone.count(v)) continue;
        std::vector<EndRef> filtered;
        for (const EndRef& er : r)
            if (alive.count(er.edge)) filtered.push_back(er);
        rot[v] = std::move(filtered);
    }
    out.rotation = std::move(rot);
    for (auto& [name, mvs] : out.marks) {
        std::vector<VertexId> kept;
        for (VertexId v : mvs)
            if (!gone.count(v)) kept.push_back(v);
        mvs = std::move(kept);
    }
    return out;
}

AnnulusCut annulus_cut(const RotationEmbedding& e, const FaceStructure& fs, int from_face,
                       int to_face) {
    const Digraph& d = e.host;
    const int nf = static_cast<int>(fs.faces.size());
    std::vector<int> prev_face(nf, -1), prev_dart(nf, -1);
    std::deque<int> q{from_face};
    prev_face[from_face] = from_face;
    while (!q.empty() && prev_face[to_face] == -1) {
        int f = q.front();
        q.pop_front();
        for (int dart : fs.faces[f]) {
            int opp = dart ^ 1;
            int g = fs.face_of[opp];
            if (prev_face[g] == -1) {
                prev_face[g] = f;
                prev_dart[g] = dart;
                q.push_back(g);
            }
        }
    }
    AnnulusCut cut;
    if (prev_face[to_face] == -1)
        throw std::invalid_argument("annulus_cut: faces not connected in the dual");
    for (int f = to_face; f != from_face; f = prev_face[f]) {
        int dart = prev_dart[f];
        // Step went from face_of[dart] across dart's edge to face_of[dart^1].
        // face_of(forward dart) is the left face; crossing left->right means a
        // forward traversal of the edge crosses the cut right-to-left: +1.
        EdgeId id = dart_edge(d, dart);
        cut.cross[id] += dart_dir(dart) == 0 ? +1 : -1;
    }
    return cut;
}

int winding_number(const AnnulusCut& cut, const DirectedPath& walk) {
    int w = 0;
    for (EdgeId id : walk.edges) {
        auto it = cut.cross.find(id);
        if (it != cut.cross.end()) w += it->second;
    }
    return w;
}

int face_containing(const Digraph& d, const FaceStructure& fs, const std::vector<VertexId>& vs) {
    std::set<VertexId> want(vs.begin(), vs.end());
    for (std::size_t f = 0; f < fs.faces.size(); ++f) {
        std::set<VertexId> got;
        for (int dart : fs.faces[f]) got.insert(dart_origin(d, dart));
        bool all = true;
        for (VertexId v : want)
            if (!got.count(v)) all = false;
        if (all) return static_cast<int>(f);
    }
    return -1;
}

int face_of_circuit_side(const Digraph& d, const FaceStructure& fs, const DirectedPath& circuit,
                         int dir) {
    int face = -1;
    for (EdgeId id : circuit.edges) {
        int f = fs.face_of[fs.dart_of(d, id, dir)];
        if (face == -1) face = f;
        if (face != f) throw std::invalid_argument("circuit side is not a single face");
    }
    if (face == -1) throw std::invalid_argument("empty circuit");
    return face;
}

UnrolledAnnulus unroll_annulus(const RotationEmbedding& e, const AnnulusCut& cut, int copies) {
    const Digraph& d = e.host;
    UnrolledAnnulus u;
    VertexId maxv = d.vertices().empty() ? 0 : d.vertices().back();
    u.stride = maxv + 1;
    u.copies = copies;
    std::vector<VertexId> vs;
    std::vector<Edge> es;
    for (int layer = 0; layer < copies; ++layer)
        for (VertexId v : d.vertices()) vs.push_back(u.lift(v, layer));
    EdgeId next = 0;
    for (int layer = 0; layer < copies; ++layer) {
        for (const Edge& ed : d.edges()) {
            int shift = 0;
            auto it = cut.cross.find(ed.id);
            if (it != cut.cross.end()) shift = it->second;
            int to_layer = layer + shift;
            if (to_layer < 0 || to_layer >= copies) continue;
            es.push_back({next++, u.lift(ed.tail, layer), u.lift(ed.head, to_layer)});
        }
    }
    u.graph = Digraph(std::move(vs), std::move(es));
    return u;
}

}  // namespace digrid
