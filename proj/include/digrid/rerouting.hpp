#ifndef DIGRID_REROUTING_HPP
#define DIGRID_REROUTING_HPP

#include "digrid/embedding.hpp"
#include "digrid/linkages.hpp"
#include "digrid/minors.hpp"

namespace digrid {

/// Boundary-to-boundary path families in a disk or cylinder embedding.
/// Disk: horizontals run R->L (ordered bottom to top), verticals B->T
/// (ordered left to right). Cylinder: horizontals are separating circuits,
/// verticals run T->B. Families are disjoint within themselves; a horizontal
/// and a vertical may share vertices and edges.
struct RoutedSystem {
    RotationEmbedding embedding;
    std::vector<DirectedPath> horizontals;
    std::vector<DirectedPath> verticals;
};

ValidationReport validate_routed_system(const RoutedSystem& s);

enum class RerouteMode { Exact, Local };

struct RerouteResult {
    MinorModel model;  // replay on the input host yields the output host
    RoutedSystem system;
    long considered = 0;
};

/// Re-routes both families to use the fewest edges subject to staying weakly
/// left of the original rightmost vertical and weakly below the original
/// topmost horizontal, then butterfly-contracts every edge shared by two
/// paths. Exact mode enumerates routings exhaustively; local mode improves
/// single paths to a fixed point.
RerouteResult reroute_disk(const RoutedSystem& s, RerouteMode mode, long budget = 20'000'000);

/// Cylinder variant: circuits stay, T->B paths are re-routed onto the fewest
/// edges; shared edges contracted; the output satisfies the opposite-winding
/// property checked by cylinder_property_holds.
RerouteResult reroute_cylinder(const RoutedSystem& s, RerouteMode mode = RerouteMode::Exact,
                               long budget = 20'000'000);

/// Every minimal sub-path of a vertical between two visits of a circuit
/// closes up with the circuit arc into a non-separating directed circuit.
bool cylinder_property_holds(const RoutedSystem& s, std::string* why = nullptr);

/// All horizontal-vertical pairs hit in reverse.
bool reverse_property_holds(const RoutedSystem& s, std::string* why = nullptr);

/// Property checks for disk outputs: paths avoid the open right side of the
/// original rightmost vertical / the open top side of the original topmost
/// horizontal (computed against the original system).
struct SideConstraints {
    std::set<VertexId> forbidden_for_verticals;    // right of rightmost vertical
    std::set<VertexId> forbidden_for_horizontals;  // above topmost horizontal
};
SideConstraints side_constraints(const RoutedSystem& original);

}  // namespace digrid

#endif
