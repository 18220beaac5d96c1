#ifndef LLL_INSTANCE_HPP
#define LLL_INSTANCE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/errors.hpp"
#include "lll/flawset.hpp"
#include "lll/rational.hpp"
#include "lll/rng.hpp"

namespace lll {

using Word = std::vector<int>; // flaw indices, left to right

/** Fully tabulated resampling instance: an explicit state space with a
    stationary measure omega, an initial measure, per-state flaw sets, and for
    every (flaw, state with that flaw) the resampling distribution. */
class EnumeratedInstance {
public:
    using State = int;

    std::string name;
    /** When true, probabilities are authoritative rationals and equality
        checks are exact; otherwise checks use float tolerances. */
    bool exact = true;

    std::vector<Rat> omega;      // stationary measure, one per state, > 0
    std::vector<Rat> omega_init; // initial measure, >= 0
    std::vector<FlawSet> present;
    std::vector<std::string> flaw_names;  // optional labels
    std::vector<std::string> state_names; // optional labels

    // actions[f][s]: outcomes (state, probability); empty unless flaw f holds at s
    std::vector<std::vector<std::vector<std::pair<int, Rat>>>> actions;

    static constexpr double kSumTolerance = 1e-9;

    size_t state_count() const { return omega.size(); }
    int flaw_count() const { return static_cast<int>(actions.size()); }

    const std::vector<std::pair<int, Rat>>& action(int f, int s) const;
    bool flaw_holds(int f, int s) const { return present.at(static_cast<size_t>(s)).test(f); }
    std::vector<int> flaws_list(State s) const { return present.at(static_cast<size_t>(s)).to_vector(); }

    /** rho(s2 | f, s); zero when s2 is not in the action's support. */
    Rat rho(int f, int s, int s2) const;
    bool action_contains(int f, State s, State s2) const { return sgn(rho(f, s, s2)) > 0; }

    /** Total stationary mass of the states where flaw f holds. */
    Rat flaw_measure(int f) const;

    std::string flaw_label(int f) const;
    std::string state_label(int s) const;

    /** Structural validation; throws input_error with the offending detail. */
    void validate() const;

    /** States where f holds, ascending. */
    std::vector<int> states_with(int f) const;

    /** Unique s with s2 in the support of the f-action at s, when the
        instance is atomic for this (f, s2); two sources -> property_violation. */
    std::optional<int> atomic_preimage(int f, int s2) const;

    // --- generative contract (shared with on-the-fly models) ---
    State sample_initial(Rng& rng) const;
    State sample_action(int f, State s, Rng& rng) const;

private:
    bool near_one(const Rat& q) const;
};

/** One recorded trajectory: a start state and (flaw, next state) steps. */
struct Walk {
    int start = 0;
    std::vector<std::pair<int, int>> steps;

    size_t length() const { return steps.size(); }
    Word word() const {
        Word w;
        w.reserve(steps.size());
        for (auto& st : steps) w.push_back(st.first);
        return w;
    }
    std::vector<int> states() const {
        std::vector<int> out{start};
        for (auto& st : steps) out.push_back(st.second);
        return out;
    }
    int final_state() const { return steps.empty() ? start : steps.back().second; }
    bool operator==(const Walk& o) const { return start == o.start && steps == o.steps; }
    bool operator<(const Walk& o) const {
        return start != o.start ? start < o.start : steps < o.steps;
    }
};

/** Throws property_violation on the first invalid step. With require_support,
    also requires positive initial mass at the start state. */
void validate_walk(const EnumeratedInstance& inst, const Walk& walk, bool require_support);

/** Probability of observing the walk: initial mass times the step densities. */
Rat walk_probability(const EnumeratedInstance& inst, const Walk& walk);

/** Product of per-flaw charges along a word. */
Rat lambda_of_word(const Word& word, const std::vector<Rat>& lambda);

inline Word reversed(Word w) {
    std::reverse(w.begin(), w.end());
    return w;
}

} // namespace lll

#endif
