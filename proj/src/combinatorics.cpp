#include "digrid/combinatorics.hpp"

#include <algorithm>
#include <functional>

namespace digrid {

namespace {

// Longest strictly monotone subsequence under cmp, lexicographically least
// index sequence among the longest.
std::vector<int> best_indices(const std::vector<int>& seq, bool increasing) {
    const int n = static_cast<int>(seq.size());
    std::vector<int> len(n, 1), nxt(n, -1);
    auto better = [&](int a, int b) { return increasing ? a < b : a > b; };
    for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j)
            if (better(seq[i], seq[j]) && len[j] + 1 > len[i]) {
                len[i] = len[j] + 1;
                nxt[i] = j;
            }
    int best = 0;
    for (int i = 0; i < n; ++i)
        if (len[i] > len[best]) best = i;
    // lexicographically least start among maxima; chain links already prefer
    // the earliest extension of maximal length
    for (int i = 0; i < n; ++i)
        if (len[i] == len[best]) {
            best = i;
            break;
        }
    std::vector<int> idx;
    for (int i = best; i != -1; i = nxt[i]) idx.push_back(i);
    return idx;
}

}  // namespace

std::vector<int> longest_monotone_subsequence(const std::vector<int>& seq) {
    if (seq.empty()) return {};
    auto inc = best_indices(seq, true);
    auto dec = best_indices(seq, false);
    const auto& pick = inc.size() >= dec.size() ? inc : dec;
    std::vector<int> out;
    for (int i : pick) out.push_back(seq[i]);
    return out;
}

std::optional<std::vector<VertexId>> transitive_subtournament(const Digraph& t, int k) {
    const auto& vs = t.vertices();
    const int n = static_cast<int>(vs.size());
    // tournament: exactly one arc per unordered pair, no loops
    std::map<std::pair<VertexId, VertexId>, int> arcs;
    for (const Edge& e : t.edges()) {
        if (e.tail == e.head) throw std::invalid_argument("tournament has a loop");
        arcs[{e.tail, e.head}]++;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int ab = arcs.count({vs[i], vs[j]}) ? arcs[{vs[i], vs[j]}] : 0;
            int ba = arcs.count({vs[j], vs[i]}) ? arcs[{vs[j], vs[i]}] : 0;
            if (ab + ba != 1)
                throw std::invalid_argument("not a tournament: pair " + std::to_string(vs[i]) +
                                            "," + std::to_string(vs[j]));
        }
    if (k <= 0) return std::vector<VertexId>{};
    if (k > n) return std::nullopt;

    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int start) -> bool {
        if (static_cast<int>(pick.size()) == k) {
            Digraph sub = t.induced(std::vector<VertexId>(pick.begin(), pick.end()));
            for (const auto& comp : strong_components(sub))
                if (comp.size() > 1) return false;
            return true;
        }
        for (int i = start; i < n; ++i) {
            pick.push_back(vs[i]);
            if (rec(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    if (rec(0)) return std::vector<VertexId>(pick.begin(), pick.end());
    return std::nullopt;
}

const std::set<int>& LabeledClique::label(int i, int j) const {
    static const std::set<int> empty;
    auto it = labels.find({std::min(i, j), std::max(i, j)});
    return it == labels.end() ? empty : it->second;
}

bool LabeledClique::valid(std::string* why) const {
    for (const auto& [e, ls] : labels) {
        auto [i, j] = e;
        if (i >= j || i < 0 || j >= n) {
            if (why) *why = "bad edge key";
            return false;
        }
        if (ls.count(i) || ls.count(j)) {
            if (why) *why = "edge labeled by its own end";
            return false;
        }
        for (int l : ls)
            if (l < 0 || l >= n) {
                if (why) *why = "label outside the vertex set";
                return false;
            }
    }
    return true;
}

CliqueOutcome clean_clique_or_cover(const LabeledClique& lc, int n, int m1, int m2,
                                    long budget) {
    std::string why;
    if (!lc.valid(&why)) throw std::invalid_argument("labeled clique invalid: " + why);
    long candidates = 0;
    bool exhausted = false;
    auto tick = [&] {
        if (++candidates > budget) exhausted = true;
        return !exhausted;
    };

    // clean branch first, lexicographic subsets of size n
    if (n >= 0 && n <= lc.n) {
        std::vector<int> pick;
        std::function<bool(int)> rec = [&](int start) -> bool {
            if (static_cast<int>(pick.size()) == n) return true;
            for (int v = start; v < lc.n; ++v) {
                if (!tick()) return false;
                bool ok = true;
                for (int u : pick) {
                    const auto& l = lc.label(u, v);
                    for (int w : pick)
                        if (l.count(w)) ok = false;
                    if (l.count(u) || l.count(v)) ok = false;
                }
                for (int u : pick)
                    for (int w : pick)
                        if (u < w && lc.label(u, w).count(v)) ok = false;
                if (!ok) continue;
                pick.push_back(v);
                if (rec(v + 1)) return true;
                pick.pop_back();
                if (exhausted) return false;
            }
            return false;
        };
        if (rec(0)) return CleanClique{pick};
        if (exhausted) return SearchExhausted{candidates};
    }

    // cover branch: lexicographic m2-subsets of vertices, then the first m1
    // edges labeled by all of them
    if (m1 > 0 && m2 > 0) {
        std::vector<std::pair<int, int>> all_edges;
        for (const auto& [e, ls] : lc.labels)
            if (!ls.empty()) all_edges.push_back(e);
        std::vector<int> verts;
        std::vector<std::pair<int, int>> edges_out;
        std::function<bool(int)> rec = [&](int start) -> bool {
            if (static_cast<int>(verts.size()) == m2) {
                edges_out.clear();
                for (const auto& e : all_edges) {
                    if (!tick()) return false;
                    bool all = true;
                    for (int v : verts)
                        if (!lc.labels.at(e).count(v)) all = false;
                    if (all) edges_out.push_back(e);
                    if (static_cast<int>(edges_out.size()) == m1) return true;
                }
                return false;
            }
            for (int v = start; v < lc.n; ++v) {
                if (!tick()) return false;
                verts.push_back(v);
                if (rec(v + 1)) return true;
                verts.pop_back();
                if (exhausted) return false;
            }
            return false;
        };
        if (rec(0)) return LabelCover{edges_out, verts};
        if (exhausted) return SearchExhausted{candidates};
    }
    return SearchExhausted{candidates};
}

}  // namespace digrid
