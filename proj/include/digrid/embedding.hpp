#ifndef DIGRID_EMBEDDING_HPP
#define DIGRID_EMBEDDING_HPP

#include <map>
#include <string>
#include <vector>

#include "digrid/digraph.hpp"

namespace digrid {

/// One end of an edge: end 0 sits at the tail, end 1 at the head.
struct EndRef {
    EdgeId edge;
    int end;
    bool operator==(const EndRef&) const = default;
    auto operator<=>(const EndRef&) const = default;
};

enum class EmbedMode { Plain, Disk, Cylinder };

/// Combinatorial plane embedding: counterclockwise cyclic order of incident
/// edge ends at each vertex, plus boundary role marks.
/// Disk mode boundary roles are T, L, B, R; cylinder mode uses T and B on two
/// distinct faces.
struct RotationEmbedding {
    Digraph host;
    std::map<VertexId, std::vector<EndRef>> rotation;
    EmbedMode mode = EmbedMode::Plain;
    std::map<std::string, std::vector<VertexId>> marks;

    const std::vector<VertexId>& mark(const std::string& name) const;
    /// Rotation lists from edge-id lists (loops listed twice: tail end first).
    static RotationEmbedding from_edge_lists(Digraph host,
                                             const std::map<VertexId, std::vector<EdgeId>>& rot,
                                             EmbedMode mode,
                                             std::map<std::string, std::vector<VertexId>> marks);
    std::map<VertexId, std::vector<EdgeId>> rotation_edge_lists() const;
};

/// Straight-line rotations: ends sorted counterclockwise by angle.
/// Loops unsupported; parallel edges share the angle and sort by id.
RotationEmbedding embed_from_coordinates(Digraph host,
                                         const std::map<VertexId, std::pair<double, double>>& xy,
                                         EmbedMode mode,
                                         std::map<std::string, std::vector<VertexId>> marks);

/// Darts: 2*edge_position + dir; dir 0 runs tail->head.
struct FaceStructure {
    std::vector<std::vector<int>> faces;  // dart cycles; inner faces ccw, outer cw
    std::vector<int> face_of;             // dart -> face index
    int dart_count = 0;

    int dart_of(const Digraph& d, EdgeId e, int dir) const;
};

int dart_dir(int dart);
EdgeId dart_edge(const Digraph& d, int dart);
VertexId dart_origin(const Digraph& d, int dart);
VertexId dart_target(const Digraph& d, int dart);

FaceStructure trace_faces(const RotationEmbedding& e);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(const std::string& clause) {
        ok = false;
        violations.push_back(clause);
    }
};

ValidationReport validate_embedding(const RotationEmbedding& e);

enum class MeetingKind { Bounce, Cross };

/// Side classification of Q's passage through u relative to P. Throws
/// std::invalid_argument when u is not interior to both paths or the paths
/// share an edge at u.
MeetingKind classify_meeting(const RotationEmbedding& e, const DirectedPath& p,
                             const DirectedPath& q, VertexId u);

/// Union of components of host - V(curve) containing a vertex with the given
/// mark. Throws if some component contains both `mark_name` and `other_side`
/// vertices (curve does not separate).
std::vector<VertexId> side_with(const RotationEmbedding& e, const DirectedPath& curve,
                                const std::string& mark_name, const std::string& other_side);

/// Orders disjoint L-R separating curves left to right; the returned indices
/// permute the input. Throws on non-separating or unordered (crossing) input.
std::vector<int> left_right_order(const RotationEmbedding& e,
                                  const std::vector<DirectedPath>& curves);
/// Same for T-B separating curves, bottom to top.
std::vector<int> top_bottom_order(const RotationEmbedding& e,
                                  const std::vector<DirectedPath>& curves);

/// Orientation mirror: all rotations reversed, L and R marks swapped.
RotationEmbedding reversed_orientation(const RotationEmbedding& e);

/// Embedding-aware butterfly contraction (rotation lists merged at the glued
/// vertex). Caller checks contractibility.
RotationEmbedding contract_edge_embedded(const RotationEmbedding& e, EdgeId id);
RotationEmbedding delete_edge_embedded(const RotationEmbedding& e, EdgeId id);
RotationEmbedding delete_vertices_embedded(const RotationEmbedding& e,
                                           const std::vector<VertexId>& vs);

/// Crossing record of a dual path from one face to another. Traversing edge
/// `first` forward adds `second` to the winding number.
struct AnnulusCut {
    std::map<EdgeId, int> cross;
};

/// Dual-BFS cut between two faces of the embedding.
AnnulusCut annulus_cut(const RotationEmbedding& e, const FaceStructure& fs, int from_face,
                       int to_face);

/// Sum of crossing signs along a path or circuit (all edges traversed forward).
int winding_number(const AnnulusCut& cut, const DirectedPath& walk);

/// Face whose walk visits every listed vertex, or -1.
int face_containing(const Digraph& d, const FaceStructure& fs, const std::vector<VertexId>& vs);

/// Face bounded by the given side of a circuit: dir 0 takes the faces of the
/// forward darts (left side for a ccw circuit). Throws if the side is not a
/// single face.
int face_of_circuit_side(const Digraph& d, const FaceStructure& fs, const DirectedPath& circuit,
                         int dir);

/// Finite unrolling of an annulus embedding: `copies` layers indexed 0..copies-1,
/// vertex (v, layer) becomes layer * stride + v. Edges shift layers by their
/// cut crossing sign; edges leaving the layer range are dropped.
struct UnrolledAnnulus {
    Digraph graph;
    int stride = 0;
    int copies = 0;
    VertexId lift(VertexId v, int layer) const { return layer * stride + v; }
    VertexId project(VertexId lifted) const { return lifted % stride; }
    int layer(VertexId lifted) const { return lifted / stride; }
};

UnrolledAnnulus unroll_annulus(const RotationEmbedding& e, const AnnulusCut& cut, int copies);

}  // namespace digrid

#endif
