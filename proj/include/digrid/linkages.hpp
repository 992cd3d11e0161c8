#ifndef DIGRID_LINKAGES_HPP
#define DIGRID_LINKAGES_HPP

#include <functional>

#include "digrid/combinatorics.hpp"
#include "digrid/digraph.hpp"
#include "digrid/havens.hpp"

namespace digrid {

/// Ordered family of pairwise vertex-disjoint paths, one per source, inducing
/// a bijection onto the targets.
struct Linkage {
    std::vector<VertexId> sources;  // ordered
    std::vector<VertexId> targets;  // ordered; targets[i] need not match paths[i]
    std::vector<DirectedPath> paths;  // paths[i] starts at sources[i]

    VertexId matched(VertexId source) const;
    std::map<VertexId, VertexId> matching() const;
    Linkage restricted(const std::vector<VertexId>& keep_sources) const;
};

bool validate_linkage(const Digraph& d, const Linkage& l, std::string* why = nullptr);

Linkage linkage_from_menger(const Digraph& d, const std::vector<VertexId>& a,
                            const std::vector<VertexId>& b);

struct LinkedSetResult {
    bool linked = false;
    bool exhausted = false;
    // counterexample when !linked
    std::vector<VertexId> a, b, separator;
};

/// Checks every equal-size subset pair of X via disjoint-path queries.
/// budget caps the number of pairs tried.
LinkedSetResult is_linked_set(const Digraph& d, const std::vector<VertexId>& x,
                              long budget = 5'000'000);

/// Extremal extraction: among X with |X| <= 2n, minimize |B(X)|, then |X|,
/// then lexicographic. Requires a haven of order >= 3n. The result has size
/// 2n and is verified linked.
std::vector<VertexId> extract_linked_set(const Digraph& d, const HavenOracle& haven, int n);

enum class Monotonicity { Increasing, Decreasing, Neither };

Monotonicity classify_monotone(const Linkage& l, const std::vector<VertexId>& order_a,
                               const std::vector<VertexId>& order_b);

enum class PairRelation { Agree, Cross, Neither };

/// Orders exist making both linkages monotone increasing iff the composed
/// permutation is the identity; increasing/decreasing iff it is an involution
/// with at most one fixed point. Singleton pairs report Agree.
PairRelation pair_relation(const Linkage& fwd, const Linkage& bwd);

struct LinkmatchResult {
    bool found = false;
    std::vector<VertexId> a_sub, b_sub;
    Linkage fwd, bwd;
    PairRelation relation = PairRelation::Neither;
    long used_budget = 0;
};

/// Finds size-n restrictions with an agreeing or crossing linkage pair:
/// first via the composed permutation of full menger linkages, then via
/// monotone-subsequence restriction, then by bounded exhaustive enumeration.
LinkmatchResult linkmatch_search(const Digraph& d, const std::vector<VertexId>& x,
                                 const std::vector<VertexId>& a, const std::vector<VertexId>& b,
                                 int n, long budget = 2'000'000);

struct Linkmatch2Result {
    enum class Kind { AgreePair, EulerHaven, Exhausted };
    Kind kind = Kind::Exhausted;
    // AgreePair: agreeing linkages whose paths are disjoint except between
    // matched endpoints
    std::vector<VertexId> a_sub, b_sub;
    Linkage fwd, bwd;
    // EulerHaven
    Digraph subgraph;
    EulerMultiplicity multiplicity;
    HavenCertificate certificate;
};

Linkmatch2Result linkmatch2_search(const Digraph& d, const std::vector<VertexId>& x,
                                   const std::vector<VertexId>& a,
                                   const std::vector<VertexId>& b, int n,
                                   long budget = 2'000'000);

namespace detail {
/// Enumerates systems of |A| vertex-disjoint A->B paths in canonical order;
/// callback returns false to stop. Returns false when the budget ran out.
bool enumerate_disjoint_systems(const Digraph& d, const std::vector<VertexId>& a,
                                const std::vector<VertexId>& b, long& budget,
                                const std::function<bool(const std::vector<DirectedPath>&)>& cb);
}  // namespace detail

}  // namespace digrid

#endif
