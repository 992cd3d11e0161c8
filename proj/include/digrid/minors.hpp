#ifndef DIGRID_MINORS_HPP
#define DIGRID_MINORS_HPP

#include <optional>

#include "digrid/dgf.hpp"
#include "digrid/digraph.hpp"
#include "digrid/embedding.hpp"

namespace digrid {

/// The edge is the only out-edge of its tail or the only in-edge of its head.
bool is_butterfly_contractible(const Digraph& d, EdgeId e);

struct NotContractible : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct LoopEdge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Contract a butterfly-contractible edge. Merge keeps the smaller vertex id,
/// drops loops created by the merge, keeps parallel edges. Throws LoopEdge /
/// NotContractible.
Digraph butterfly_contract(const Digraph& d, EdgeId e);

/// Replayable deletion/contraction script plus the map from surviving
/// vertices to pattern vertices.
struct MinorModel {
    std::vector<ScriptStep> steps;
    std::map<VertexId, VertexId> final_map;

    ScriptBlock to_script() const { return {steps, final_map}; }
    static MinorModel from_script(const ScriptBlock& s) { return {s.steps, s.final_map}; }
};

/// Applies the script; throws on any invalid step (missing id, loop, or a
/// contraction that is not butterfly at that moment).
Digraph replay(const Digraph& host, const MinorModel& model);

/// Replays and checks that the result is isomorphic to the pattern under the
/// model's final map (edge multiplicities included).
bool check_minor_model(const Digraph& host, const Digraph& pattern, const MinorModel& model,
                       std::string* why = nullptr);

struct MinorSearchResult {
    enum class Status { Found, Absent, Exhausted };
    Status status = Status::Exhausted;
    std::optional<MinorModel> model;
    long states_explored = 0;
};

/// Breadth-first exhaustive search for a butterfly-minor model. Candidate
/// steps are ordered deletions first, then contractions, smallest id first,
/// so the first model found is canonical. `budget` caps explored states;
/// Absent is only reported when the space was exhausted within budget.
MinorSearchResult find_butterfly_minor(const Digraph& host, const Digraph& pattern,
                                       long budget = 200000);

/// Cylindrical grid witness: n disjoint circuits of length 2n with the spoke
/// pattern between consecutive circuits. Position j of circuit i is
/// circuits[i].verts[j-1].
struct CylGridWitness {
    int n = 0;
    std::vector<DirectedPath> circuits;
};

struct AcyclicGridWitness {
    int n = 0;
    bool bubble = false;
    std::vector<DirectedPath> horizontals;  // ordered bottom to top
    std::vector<DirectedPath> verticals;    // ordered by crossing order on each horizontal
};

struct CylinderGrid {
    Digraph graph;
    CylGridWitness witness;
    RotationEmbedding embedding;
};

/// The size-n cylindrical grid: circuits of length 2n labeled outward from
/// the innermost, upward spokes at positions 1..n, downward at n+1..2n,
/// embedded as concentric counterclockwise circles.
CylinderGrid generate_cylindrical_grid(int n);

/// Inward spoke chains (outermost to innermost circuit) and outward chains
/// for a generated grid, in position order.
struct SpokePaths {
    std::vector<DirectedPath> in_paths;   // start on outer circuit, end on inner
    std::vector<DirectedPath> out_paths;  // start on inner circuit, end on outer
};
SpokePaths canonical_spoke_paths(const CylinderGrid& g);

ValidationReport validate_grid_witness(const Digraph& d, const CylGridWitness& w);
ValidationReport validate_grid_witness(const Digraph& d, const AcyclicGridWitness& w);

/// True when no two shared vertices occur in the same relative order on both
/// paths.
bool hits_in_reverse(const DirectedPath& p, const DirectedPath& q);

}  // namespace digrid

#endif
