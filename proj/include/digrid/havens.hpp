#ifndef DIGRID_HAVENS_HPP
#define DIGRID_HAVENS_HPP

#include <cstdint>
#include <memory>
#include <optional>

#include "digrid/dgf.hpp"
#include "digrid/digraph.hpp"
#include "digrid/embedding.hpp"

namespace digrid {

/// Explicit haven table: every Z with |Z| < order maps to the canonical
/// representative (smallest vertex) of a strong component of D - Z.
struct HavenCertificate {
    int order = 0;
    std::map<std::vector<VertexId>, VertexId> table;

    CertBlock to_cert_block() const;
    static HavenCertificate from_cert_block(const CertBlock& cb);
};

struct HavenCheckOptions {
    long sample_pairs = 0;  // 0: exhaustive domain + all cover pairs
    std::uint64_t seed = 1;
};

/// Accepts iff every entry names a strong component of D - Z and every cover
/// pair Z' = Z \ {z} satisfies B(Z) subset of B(Z'). Covers suffice: nested
/// containments compose along element-removal chains.
ValidationReport check_haven(const Digraph& d, const HavenCertificate& cert,
                             const HavenCheckOptions& opts = {});

struct HavenOrderResult {
    int order = 0;
    HavenCertificate certificate;
    bool exact = true;  // false when a refutation level hit the budget
    long visits = 0;
};

/// Largest w <= cap admitting a certificate, by descending exhaustive search
/// with component-choice backtracking. Budget caps backtracking nodes per
/// level; a level cut short by budget makes the result inexact.
HavenOrderResult haven_order(const Digraph& d, int cap, long budget = 20'000'000);

/// Query interface over a haven: the component assigned to Z, as a vertex set.
class HavenOracle {
public:
    virtual ~HavenOracle() = default;
    virtual int order() const = 0;
    virtual std::vector<VertexId> component(const std::vector<VertexId>& z) const = 0;
};

/// Backed by an explicit certificate.
class CertificateOracle : public HavenOracle {
public:
    CertificateOracle(Digraph d, HavenCertificate cert)
        : d_(std::move(d)), cert_(std::move(cert)) {}
    int order() const override { return cert_.order; }
    std::vector<VertexId> component(const std::vector<VertexId>& z) const override;

private:
    Digraph d_;
    HavenCertificate cert_;
};

/// Backed by the exhaustive searcher (one search, then table lookups).
std::unique_ptr<HavenOracle> make_search_oracle(const Digraph& d, int cap, long budget = 20'000'000);

/// Vertex- and edge-subdigraph families mirroring a pattern graph's incidence.
struct Subdigraph {
    std::vector<VertexId> verts;
    std::vector<EdgeId> edges;
};

struct Representation {
    Digraph host;
    Digraph pattern;  // bidirected digraph form of the pattern graph
    std::vector<Subdigraph> vmembers;
    std::vector<Subdigraph> emembers;
    std::vector<VertexId> vmap;                          // pattern vertex per vmember
    std::vector<std::pair<VertexId, VertexId>> emap;     // pattern edge ends per emember
    bool faithful = false;
};

ValidationReport validate_representation(const Representation& rep);

/// Haven transfer through a faithful representation: pattern certificate of
/// order h+1 (h positive and even) yields a host certificate of order h/2+1.
HavenCertificate haven_from_representation(const Representation& rep,
                                           const HavenCertificate& pattern_cert, int h);

struct IntersectingFamilyResult {
    Digraph union_graph;
    HavenCertificate certificate;
};

/// At least 2n+1 strongly connected subdigraphs, pairwise sharing a vertex,
/// every vertex in at most two of them: the union carries a haven of order
/// n+1 assigning to X the component holding every member disjoint from X.
IntersectingFamilyResult haven_from_intersecting_family(const Digraph& d,
                                                        const std::vector<Subdigraph>& subs,
                                                        int n);

/// Subcubic wall pattern with k disjoint rows and k disjoint columns, every
/// row meeting every column; bidirected. Haven order k via the cross rule.
Digraph wall_pattern(int k);
HavenCertificate wall_haven_certificate(int k);
/// Rows/columns as paths (used to build representations of the wall).
struct WallLines {
    std::vector<std::vector<VertexId>> rows, cols;
};
WallLines wall_lines(int k);

struct ReduceOutcome {
    enum class Kind { EulerHaven, CliqueRepresentation, Exhausted };
    Kind kind = Kind::Exhausted;
    // EulerHaven
    int bound = 0;  // 4 or 5
    Digraph subgraph;
    EulerMultiplicity multiplicity;
    HavenCertificate certificate;
    // CliqueRepresentation
    std::optional<Representation> representation;
};

/// Staged bounded search: a small eulerianizable subdigraph with a haven of
/// order >= h+1, or a clique representation, or honest exhaustion. X must be
/// linked. Defined alongside the linkage machinery it drives.
ReduceOutcome reduce_to_eulerian(const Digraph& d, const std::vector<VertexId>& x, int h,
                                 long budget);

}  // namespace digrid

#endif
