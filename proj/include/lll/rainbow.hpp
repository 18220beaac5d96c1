#ifndef LLL_RAINBOW_HPP
#define LLL_RAINBOW_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/matching.hpp"
#include "lll/rational.hpp"
#include "lll/rng.hpp"

namespace lll {

/** Edge-colored complete graph K_{2n}. */
struct ColoredGraph {
    int n = 0;                 // half the vertex count
    std::map<Edge, int> color; // every edge of K_{2n} mapped to a color id
    int q = 0;                 // size of the largest color class

    int nverts() const { return 2 * n; }
    int color_of(const Edge& e) const;
    int color_count() const;
    /** Edges grouped by color id, each group sorted. */
    std::map<int, EdgeList> classes() const;
};

/** Builds a coloring from explicit [u, v, color] triples; every edge of
    K_{2n} must appear exactly once. */
ColoredGraph make_colored_graph(int n, const std::vector<std::array<int, 3>>& edges);

/** Seeded random coloring in which every class has size exactly q
    (requires q to divide the edge count n*(2n-1)). */
ColoredGraph random_coloring(int n, int q, uint64_t seed);

/** Generative model whose flaws are the vertex-disjoint same-colored edge
    pairs contained in the current perfect matching. States are partner maps
    and are never tabulated, so K_40 and beyond stay cheap. A flawless state
    is exactly a rainbow matching: a perfect matching cannot contain two
    edges sharing a vertex, so distinct-or-adjacent same-colored edges never
    coexist in one state. */
class RainbowInstance {
public:
    using State = Matching;

    explicit RainbowInstance(ColoredGraph g);

    const ColoredGraph& graph() const { return g_; }
    const HostGraph& host() const { return host_; }
    int flaw_count() const { return static_cast<int>(flaws_.size()); }
    const EdgeList& flaw_edges(int f) const { return flaws_.at(static_cast<size_t>(f)); }
    std::string flaw_label(int f) const;

    bool flaw_holds(int f, const State& s) const;
    std::vector<int> flaws_list(const State& s) const; // sorted ascending
    State sample_initial(Rng& rng) const;              // uniform perfect matching
    State sample_action(int f, const State& s, Rng& rng) const;
    bool action_contains(int f, const State& from, const State& to) const;

    /** Union-not-a-matching relation over flaw ids, with a loop on every
        flaw. Candidate pairs are generated through a shared-vertex index:
        flaws on disjoint vertex sets always union to a matching. */
    DependencyGraph dependency() const;

private:
    ColoredGraph g_;
    HostGraph host_;
    std::vector<EdgeList> flaws_;               // two disjoint same-colored edges, sorted
    std::map<std::pair<Edge, Edge>, int> id_;   // sorted pair -> flaw id
};

/** Closed-form certificate for a coloring: mu = 3/(4n^2) and
    theta = (1 + (2n-1)(q-1)mu)^4 / ((2n-3)(2n-1)mu), with the step bound
    T_seq = |F| log(1+mu) / log(1/theta) for a uniform initial matching and
    the round bound T_par = log(|F| mu) / log(1/theta). */
struct RainbowParams {
    int n = 0;
    int q = 0;
    size_t flaw_count = 0;
    double gamma = 0.0; // q / n
    Rat mu = Rat(0);
    Rat theta = Rat(1);
    long a_f = 0;       // action-support size (2n-3)(2n-1)
    double t_seq = 0.0;
    double t_par = 0.0;
    bool certified = false; // theta < 1
};

/** Evaluates the certificate; params are returned even when theta >= 1
    (certified stays false). Requires n >= 2. */
RainbowParams compute_params(const ColoredGraph& g);

struct TrialRow {
    size_t trial = 0;
    uint64_t seed = 0;
    std::string strategy;
    size_t steps = 0;
    size_t rounds = 0; // 0 in sequential mode
    bool terminated = false;
};

struct TailEntry {
    int r = 0;
    double empirical = 0.0; // fraction of trials with metric >= T + r
    double bound = 0.0;     // theta^r
};

struct ExperimentStats {
    RainbowParams params;
    bool rounds_mode = false;
    std::vector<TrialRow> rows;
    double mean_steps = 0.0;
    size_t max_steps = 0;
    double mean_rounds = 0.0;
    size_t max_rounds = 0;
    bool all_terminated = true;
    std::vector<TailEntry> tail; // metric vs T_seq (steps) or T_par (rounds)
};

struct ExperimentOptions {
    bool rounds_mode = false;
    int jobs = 1;
    bool force = false; // run even without a certificate
    size_t max_steps = 1000000;
    size_t max_rounds = 100000;
    int tail_range = 10;
};

/** Seeded Monte Carlo over independent trials (merged deterministically, so
    the jobs count never changes the rows). Every terminating trial is checked
    to end in a rainbow perfect matching; a non-rainbow final state throws.
    Without a certificate (theta >= 1) the run refuses unless forced. */
ExperimentStats run_rainbow_experiment(const ColoredGraph& g, size_t trials, uint64_t seed,
                                       const std::string& strategy_spec,
                                       const ExperimentOptions& opt = {});

/** Per-trial rows as CSV (trial, seed, strategy, steps, rounds, terminated). */
std::string trial_rows_csv(const std::vector<TrialRow>& rows);
inline std::string experiment_csv(const ExperimentStats& stats) { return trial_rows_csv(stats.rows); }

/** Explicit tabulation of a small coloring (states = all perfect matchings),
    with the same flaw ids as RainbowInstance. For exhaustive checks only;
    the state count grows as (2n-1)!!. */
BuiltInstance tabulate_coloring(const ColoredGraph& g, size_t cap = kDefaultEnumCap);

} // namespace lll

#endif
