#ifndef DIGRID_DIGRAPH_HPP
#define DIGRID_DIGRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace digrid {

using VertexId = int;
using EdgeId = int;

struct Edge {
    EdgeId id;
    VertexId tail;
    VertexId head;
};

/// Finite multidigraph. Loops and parallel edges are allowed. Immutable after
/// construction; mutating operations return a new graph.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::vector<VertexId> vertices, std::vector<Edge> edges);

    /// Vertices 0..n-1, edge ids 0..m-1 in the given order.
    static Digraph from_edges(int vertex_count,
                              const std::vector<std::pair<VertexId, VertexId>>& arcs);

    const std::vector<VertexId>& vertices() const { return verts_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return verts_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_vertex(VertexId v) const;
    bool has_edge(EdgeId e) const;
    const Edge& edge(EdgeId e) const;
    bool is_loop(EdgeId e) const { return edge(e).tail == edge(e).head; }

    /// Position of v in the sorted vertex list.
    int dense_index(VertexId v) const;

    const std::vector<EdgeId>& out_edges(VertexId v) const;
    const std::vector<EdgeId>& in_edges(VertexId v) const;
    int out_degree(VertexId v) const { return static_cast<int>(out_edges(v).size()); }
    int in_degree(VertexId v) const { return static_cast<int>(in_edges(v).size()); }

    Digraph without_vertices(const std::vector<VertexId>& remove) const;
    Digraph without_edge(EdgeId e) const;
    /// Subgraph on the given vertices with all edges among them.
    Digraph induced(const std::vector<VertexId>& keep) const;
    /// Subgraph keeping the listed edges and vertices (vertices of edges always kept).
    Digraph subgraph(const std::vector<VertexId>& verts, const std::vector<EdgeId>& edges) const;

    bool weakly_connected() const;
    bool strongly_connected() const;

    bool operator==(const Digraph& other) const {
        if (verts_ != other.verts_ || edges_.size() != other.edges_.size()) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge &a = edges_[i], &b = other.edges_[i];
            if (a.id != b.id || a.tail != b.tail || a.head != b.head) return false;
        }
        return true;
    }

private:
    std::vector<VertexId> verts_;        // sorted, unique
    std::vector<Edge> edges_;            // sorted by id, unique ids
    std::vector<std::vector<EdgeId>> out_, in_;  // indexed by dense vertex index
    void build_index();
};

/// Alternating vertex/edge sequence. verts.size() == edges.size() + 1.
/// A zero-length path is a single vertex. A circuit has verts.front() ==
/// verts.back() and is otherwise vertex-simple.
struct DirectedPath {
    std::vector<VertexId> verts;
    std::vector<EdgeId> edges;
    bool circuit = false;

    VertexId start() const { return verts.front(); }
    VertexId finish() const { return verts.back(); }
    std::size_t length() const { return edges.size(); }
    bool contains_vertex(VertexId v) const;
    /// Index of first occurrence of v, -1 if absent (for circuits the closing
    /// repeat of the start vertex is ignored).
    int position_of(VertexId v) const;
    /// Sub-path from position i to position j inclusive (i <= j).
    DirectedPath slice(int i, int j) const;
};

/// Checks chaining, simplicity and the circuit flag against the host graph.
bool is_valid_path(const Digraph& d, const DirectedPath& p, std::string* why = nullptr);

/// Edge multiplicities witnessing that duplicating existing edges makes every
/// vertex eulerian with degree at most `bound`.
struct EulerMultiplicity {
    int bound = 0;
    std::map<EdgeId, int> multiplicity;
};

bool check_euler_multiplicity(const Digraph& d, const EulerMultiplicity& em,
                              std::string* why = nullptr);

/// Partition of V(D) by mutual reachability. Components sorted by smallest
/// vertex id; each component sorted. The representative is the first entry.
std::vector<std::vector<VertexId>> strong_components(const Digraph& d);

/// Component of d - removed containing v, or empty if v is removed/absent.
std::vector<VertexId> strong_component_of(const Digraph& d, VertexId v,
                                          const std::vector<VertexId>& removed);

struct BoundarySets {
    std::vector<EdgeId> into;   // head inside X, tail outside
    std::vector<EdgeId> outof;  // tail inside X, head outside
};

BoundarySets boundary_edges(const Digraph& d, const std::vector<VertexId>& x);

struct MengerResult {
    bool linked = false;
    std::vector<DirectedPath> paths;      // k pairwise vertex-disjoint A->B paths
    std::vector<VertexId> separator;      // < k vertices meeting every A->B path
};

/// Either k vertex-disjoint directed A->B paths or a separator of size < k.
/// Vertices in both A and B are linked by zero-length paths. Throws on k <= 0
/// or terminals outside the graph.
MengerResult menger_paths(const Digraph& d, std::vector<VertexId> a,
                          std::vector<VertexId> b, int k);

/// Multiplicities satisfying the eulerian degree bound, or nullopt when the
/// circulation search certifies none exist. bound must be one of 2,4,5,6;
/// the graph must be weakly connected and, for bound 2, strongly connected.
/// Ties broken toward the lexicographically smallest multiplicity vector.
std::optional<EulerMultiplicity> eulerianize(const Digraph& d, int bound);

/// Mechanical edge contraction: merges tail and head into the smaller of the
/// two ids, re-attaches all other edges, drops loops created by the merge and
/// keeps parallels. No contractibility check. Throws on loops.
Digraph contract_edge_merge(const Digraph& d, EdgeId e, VertexId* merged_out = nullptr);

namespace detail {
/// Max number of vertex-disjoint A->B paths (with vertex splitting), plus a
/// minimum separator when fewer than `want` exist.
int disjoint_path_flow(const Digraph& d, const std::vector<VertexId>& a,
                       const std::vector<VertexId>& b, int want,
                       std::vector<DirectedPath>* paths_out,
                       std::vector<VertexId>* cut_out);
}  // namespace detail

}  // namespace digrid

#endif
