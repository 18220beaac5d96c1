#ifndef LLL_STABLE_HPP
#define LLL_STABLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "lll/conditions.hpp"
#include "lll/depgraph.hpp"
#include "lll/engine.hpp"
#include "lll/instance.hpp"

namespace lll {

/** Greedy segmentation of a flaw word. A new segment opens whenever the next
    flaw is related to something in the current segment; otherwise the flaw
    joins the current segment, which is valid only if the previous segment's
    closed neighborhood covers it (the first segment accepts anything). */
struct PartitionResult {
    bool ok = false;
    std::vector<std::vector<int>> segments; // in word order, valid when ok
    size_t fail_index = 0;                  // 1-based position of the offending flaw
};

PartitionResult partition_stable(const DependencyGraph& dep, const Word& word);

/** True iff the greedy partition succeeds and every segment is strictly
    increasing under the priority order (order[f] = rank; empty = identity). */
bool is_pi_stable(const DependencyGraph& dep, const std::vector<int>& order, const Word& word);

/** Can some valid trajectory of the instance address exactly this flaw
    sequence (starting from any state)? */
bool word_realizable(const EnumeratedInstance& inst, const Word& word);

/** Forward or reversed realizability: the witness condition attached to
    sorted-word sets used by the counting bound. */
bool word_has_walk_witness(const EnumeratedInstance& inst, const Word& word);

/** All sorted stable words with first segment `root`, of length in
    [t, max_len]. Segment sets are independent, non-empty, and contained in
    the closed neighborhood of their predecessor; each segment is listed in
    increasing priority order. With a witness instance, words that no
    trajectory can realize (forward or reversed) are dropped; pass nullptr to
    enumerate the unfiltered superset. Throws capability_error past `cap`. */
std::vector<Word> enumerate_stab_pi(const EnumeratedInstance* witness, const DependencyGraph& dep,
                                    const std::vector<int>& order, const std::vector<int>& root,
                                    size_t t, size_t max_len, size_t cap = kDefaultEnumCap);

/** All sequences (I_1 = root, I_2, ..., I_s) of independent sets with
    I_{r+1} a non-empty subset of the open neighborhood of I_r, and total
    size in [t, max_size]. These need no realizability witness. */
std::vector<std::vector<std::vector<int>>> enumerate_strongly_stable(
    const DependencyGraph& dep, const std::vector<int>& root, size_t t, size_t max_size,
    size_t cap = kDefaultEnumCap);

/** Truncated check of the geometric counting bound: the charge sum over the
    enumerated family rooted at R with size >= t must stay below
    mu(R) * theta^t. Sound to assert on the truncation since terms are
    positive; `tail_bound` reports the bound on what truncation discarded. */
struct StabCountingReport {
    std::vector<int> root;
    size_t t = 0;
    size_t max_len = 0;
    bool strong = false; // sequence mode (no witness) vs sorted-word mode
    size_t enumerated = 0;
    Rat partial_sum = Rat(0);
    Rat bound = Rat(0); // mu(R) * theta^t
    double tail_bound = 0.0;
    bool ok = false;
};

StabCountingReport verify_stab_counting(const EnumeratedInstance* witness, const DependencyGraph& dep,
                                        const std::vector<int>& order, const LllParams& params,
                                        const std::vector<int>& root, size_t t, size_t max_len,
                                        bool strong, size_t cap = kDefaultEnumCap);

// --- occurrence-tagged flaws and the precedence DAG of a trajectory ---

struct NamedFlaw {
    int flaw = -1;
    int occurrence = 0; // 1-based count of this flaw from the left
    bool operator==(const NamedFlaw& o) const { return flaw == o.flaw && occurrence == o.occurrence; }
    bool operator<(const NamedFlaw& o) const {
        return flaw != o.flaw ? flaw < o.flaw : occurrence < o.occurrence;
    }
};
using NamedWord = std::vector<NamedFlaw>;

NamedWord name_word(const Word& word);

/** Precedence DAG over the occurrence-tagged flaws of a word: an edge runs
    from an earlier position to every later related position. In anchor mode
    (anchor = flaw id) the kept set holds the positions that reach the
    rightmost anchor occurrence, and depth counts the longest path to it
    (anchor depth 1). In full mode (no anchor) every position is kept and
    depth is the longest path to a sink plus one. */
struct WalkDag {
    NamedWord nodes;                   // node i = position i of the word
    std::vector<std::vector<int>> succ; // edges to later related positions
    std::vector<char> kept;             // membership in the tracked set
    std::vector<int> depth;             // 0 outside the tracked set
    int anchor_pos = -1;                // rightmost anchor position, -1 in full mode
    int max_depth = 0;
};

WalkDag build_walk_dag(const DependencyGraph& dep, const Word& word, std::optional<int> anchor);

/** Depth-layered canonical word of a trajectory: layers s..1 of the DAG's
    kept set, each layer sorted in decreasing priority order. Invariant under
    swaps of adjacent unrelated steps. */
NamedWord stab_of_walk(const DependencyGraph& dep, const std::vector<int>& order, const Word& word,
                       std::optional<int> anchor);

Word flatten(const NamedWord& named);

/** Longest run of pairwise-consecutively-related flaws (as a subsequence). */
size_t longest_chain(const DependencyGraph& dep, const Word& word);

/** 1-based position of the rightmost adjacent pair (f, g) that is unrelated
    and out of order: f outside the kept set before a kept g, or both kept
    but ordered against the layered canonical word. 0 when none exists. */
size_t rightmost_swappable(const DependencyGraph& dep, const std::vector<int>& order, const Word& word,
                           std::optional<int> anchor);

/** Swap steps pos and pos+1 (0-based) of a walk in place. The middle state is
    reconstructed through the unique backward step of the trailing flaw;
    requires the two flaws to be unrelated. Throws capability_error when the
    backward step is undefined or ambiguous, property_violation when the
    swapped steps do not form a valid trajectory. */
void apply_walk_swap(const EnumeratedInstance& inst, const DependencyGraph& dep, Walk& tau, size_t pos);

// --- forward canonicalization (sorting a word / trajectory) ---

struct CanonWordResult {
    Word word;
    std::vector<size_t> swaps; // 0-based left positions, in application order
};

/** Sort a word into its unique sorted stable form by swapping adjacent
    unrelated flaws: each flaw moves left to the rightmost segment related to
    it, then segments are put in increasing priority order. */
CanonWordResult forward_canonicalize_word(const DependencyGraph& dep, const std::vector<int>& order,
                                          Word word);

struct CanonWalkResult {
    Walk walk;
    std::vector<size_t> swaps;
};

/** Same rewriting applied to a trajectory, realizing every swap on the state
    sequence via apply_walk_swap. */
CanonWalkResult forward_canonicalize_walk(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                          const std::vector<int>& order, Walk tau);

// --- backward canonicalization (round-synchronized swapping over a set) ---

struct BackwardAudit {
    std::vector<Walk> outputs; // same order as the inputs
    size_t rounds = 0;
    size_t swap_count = 0;
    bool injective = false;  // outputs pairwise distinct
    bool prefix_ok = false;  // each output starts with its layered canonical word
    bool anchored_ok = false; // anchor mode: reversed prefix is sorted stable with root {anchor}
    bool groups_prefix_free = false; // outputs sharing a canonical word are prefix-free
};

/** Synchronized rewriting of a set of walks that follow one deterministic
    strategy: per round, find the maximal rightmost-swappable position k over
    the set and swap exactly the walks whose rightmost swappable pair sits at
    k. Terminates when no walk has a swappable pair; audits the prefix
    decomposition and injectivity. Throws input_error when the input set is
    invalid (prefix of another walk, strategy divergence, missing anchor). */
BackwardAudit backward_canonicalize_set(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                        const std::vector<int>& order, std::vector<Walk> walks,
                                        std::optional<int> anchor, size_t max_rounds = 1000000);

// --- exhaustive unrolling of the walk distribution ---

struct BadSet {
    std::vector<Walk> walks;
    std::vector<Rat> probs;
    Rat total = Rat(0);
};

/** All walks of length exactly t that start in the initial support and follow
    the given deterministic strategy; probs are the exact walk probabilities,
    and total equals Pr[the run takes at least t steps]. */
BadSet enumerate_bad(const EnumeratedInstance& inst, const Strategy& strat, size_t t,
                     size_t cap = kDefaultEnumCap);

/** All walks consisting of the steps of rounds 1..s-1 of the round-based
    walk (lowest-priority-first within a round) plus the first step of round
    s; total equals Pr[the run takes at least s rounds]. */
BadSet enumerate_bad_parallel(const EnumeratedInstance& inst, const DependencyGraph& dep,
                              const std::vector<int>& order, size_t s, size_t cap = kDefaultEnumCap);

} // namespace lll

#endif
