#ifndef DIGRID_COMBINATORICS_HPP
#define DIGRID_COMBINATORICS_HPP

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "digrid/digraph.hpp"

namespace digrid {

/// Longest increasing-or-decreasing subsequence of distinct values; ties
/// resolved toward increasing, then the lexicographically least index set.
/// Length is at least ceil(sqrt(len)) for nonempty input.
std::vector<int> longest_monotone_subsequence(const std::vector<int>& seq);

/// Vertex set of size k inducing an acyclic (= transitive) subtournament, or
/// nullopt after exhausting all k-subsets. Throws if the input digraph is not
/// a tournament.
std::optional<std::vector<VertexId>> transitive_subtournament(const Digraph& t, int k);

/// Complete graph on vertices 0..n-1 with a label set on every unordered
/// pair; no pair may carry either of its own ends.
struct LabeledClique {
    int n = 0;
    std::map<std::pair<int, int>, std::set<int>> labels;  // keys (i,j) with i<j

    const std::set<int>& label(int i, int j) const;
    bool valid(std::string* why = nullptr) const;
};

struct CleanClique {
    std::vector<int> verts;
};
struct LabelCover {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> verts;
};
struct SearchExhausted {
    long candidates = 0;
};

using CliqueOutcome = std::variant<CleanClique, LabelCover, SearchExhausted>;

/// Clean clique of size n (no inside edge labeled by an inside vertex), else
/// m1 edges and m2 vertices with every vertex labeling every edge, else
/// honest exhaustion. Clean branch searched first, lexicographically.
CliqueOutcome clean_clique_or_cover(const LabeledClique& lc, int n, int m1, int m2,
                                    long budget = 2'000'000);

}  // namespace digrid

#endif
