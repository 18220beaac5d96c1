#ifndef LLL_MATCHING_HPP
#define LLL_MATCHING_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/instance.hpp"
#include "lll/rational.hpp"
#include "lll/rng.hpp"

namespace lll {

/** Undirected edge with canonical orientation u < v. */
struct Edge {
    int u = -1, v = -1;
    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {
        if (a == b) throw input_error("self-loop edge");
    }
    bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
    bool operator<(const Edge& o) const { return u != o.u ? u < o.u : v < o.v; }
    std::string str() const { return std::to_string(u) + "-" + std::to_string(v); }
};

using EdgeList = std::vector<Edge>; // kept sorted

/** Perfect matching stored as a partner map over [0, nverts). */
using Matching = std::vector<int>;

EdgeList matching_edges(const Matching& m);
Matching matching_from_edges(int nverts, const EdgeList& edges);
bool is_matching(const EdgeList& edges);

/** Host graphs on which single-edge resampling stays inside the matching
    space: complete graphs K_{2n} and disjoint unions of complete bipartite
    blocks (permutation spaces). Both satisfy the closure condition that any
    4-path u'-u-v-v' over distinct vertices closes with the edge {u',v'}. */
class HostGraph {
public:
    enum class Kind { complete, blocks };

    static HostGraph complete(int nverts);
    /** Blocks of sizes m_i; block i occupies vertices [base, base+2m):
        left side first, then right side. */
    static HostGraph bipartite_blocks(const std::vector<int>& sizes);

    Kind kind() const { return kind_; }
    int nverts() const { return nverts_; }
    bool has_edge(int u, int v) const;
    int block_of(int v) const { return block_.at(static_cast<size_t>(v)); }
    bool left_side(int v) const; // blocks only
    const std::vector<int>& block_sizes() const { return sizes_; }
    std::string describe() const;

    EdgeList all_edges() const;

    /** All perfect matchings, ids assigned by sorted-edge-list order. */
    std::vector<Matching> enumerate_perfect_matchings(size_t cap = kDefaultEnumCap) const;

private:
    Kind kind_ = Kind::complete;
    int nverts_ = 0;
    std::vector<int> block_;  // block id per vertex (complete: all 0)
    std::vector<int> sizes_;  // blocks only
    std::vector<int> side_;   // 0 = left, 1 = right (blocks only)
};

/** Single-edge re-pairing: connect e = {u,v}, re-pair their old partners.
    Identity when e already lies in sigma. */
Matching psi_step(const HostGraph& g, const Edge& e, const Matching& sigma);

/** Left-to-right fold of psi_step over the sorted edges of M. */
Matching hat_psi(const HostGraph& g, const EdgeList& m, const Matching& sigma);

/** Exchange the matched pairs (u,v) and (u',v') into {u,u'}, {v,v'}.
    The degenerate pick (u',v') = (v,u) returns sigma unchanged. */
Matching swap_pairs(const HostGraph& g, const Matching& sigma, std::pair<int, int> uv,
                    std::pair<int, int> upvp);

/** Directed matched pairs (u',v') whose swap with (u,v) stays a perfect
    matching of g. Sorted for reproducibility. */
std::vector<std::pair<int, int>> swap_neighbors(const HostGraph& g, const Matching& sigma,
                                                std::pair<int, int> uv);

/** One draw from the resampling distribution of the flaw "M is matched",
    via backward stepping; also the exhaustive support with probabilities. */
Matching sample_matching_action(const HostGraph& g, const EdgeList& m, const Matching& sigma, Rng& rng);
std::vector<std::pair<Matching, Rat>> matching_action_support(const HostGraph& g, const EdgeList& m,
                                                              const Matching& sigma,
                                                              size_t cap = kDefaultEnumCap);

/** Flaws "all edges of M are matched" over an enumerable host. */
struct MatchingInstanceSpec {
    HostGraph host;
    std::vector<EdgeList> flaw_patterns;
    size_t cap = kDefaultEnumCap;
};

struct BuiltInstance {
    EnumeratedInstance inst;
    DependencyGraph dep;
    std::vector<Matching> states; // id -> matching
};

BuiltInstance build_matching_instance(const MatchingInstanceSpec& spec);

/** Dependency rule for matching flaws: related when the union is not a
    matching, plus a loop on every flaw. */
bool matching_flaws_related(const EdgeList& a, const EdgeList& b);

/** Uniform perfect matching of the host (pair lowest free vertex at random). */
Matching sample_uniform_matching(const HostGraph& g, Rng& rng);

/** Number of perfect matchings (double factorial / product of factorials). */
Rat count_perfect_matchings(const HostGraph& g);

} // namespace lll

#endif
