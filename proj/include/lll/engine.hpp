#ifndef LLL_ENGINE_HPP
#define LLL_ENGINE_HPP

#include <memory>
#include <string>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/errors.hpp"
#include "lll/instance.hpp"
#include "lll/rng.hpp"

namespace lll {

/** Flaw-selection rule. A strategy may keep per-run state; begin_run resets it
    and hands randomized strategies their own child stream. Deterministic
    strategies must be pure functions of the observed history, which clone()
    preserves so exhaustive unrolling can branch mid-run. */
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual void begin_run(Rng rng) { (void)rng; }
    /** Pick one of `present` (sorted ascending, non-empty). */
    virtual int select(const std::vector<int>& present, size_t step) = 0;
    virtual std::unique_ptr<Strategy> clone() const = 0;
    virtual bool deterministic() const = 0;
    virtual std::string name() const = 0;
};

/** Lowest flaw in a fixed priority order (default: index order). */
std::unique_ptr<Strategy> make_first_present_strategy(std::vector<int> order = {});

/** Round-structured rule: keeps addressing flaws outside Gamma+ of the
    current round's set, starting a new round when none remain; ties broken by
    the priority order. Produces round-sorted ("pi-stable") walks. */
std::unique_ptr<Strategy> make_pi_stable_strategy(const DependencyGraph& dep, std::vector<int> order = {});

/** Uniform choice among the present flaws, from a split child stream. */
std::unique_ptr<Strategy> make_uniform_random_strategy();

/** Replays a fixed script; runs past its end are property violations. */
std::unique_ptr<Strategy> make_scripted_strategy(std::vector<int> script);

std::unique_ptr<Strategy> make_strategy(const std::string& spec, const DependencyGraph& dep);

struct RoundInfo {
    size_t first_step = 0;
    std::vector<int> flaws;
};

template <class M>
struct RunOutcome {
    using State = typename M::State;
    uint64_t seed = 0;
    std::string strategy;
    bool terminated = false; // reached a flawless state
    size_t steps = 0;
    State start{};
    State final_state{};
    bool recorded = false;
    std::vector<std::pair<int, State>> trace; // (flaw, state after)
    std::vector<RoundInfo> rounds;            // parallel runs only
};

struct RunOptions {
    size_t max_steps = 10000000;
    bool record = true;
    bool validate = true; // replay-check the recorded trajectory
};

struct ParallelOptions {
    size_t max_rounds = 1000000;
    size_t max_steps = 10000000;
    bool record = true;
    bool validate = true;
};

namespace detail {

template <class M>
void replay_check(const M& model, const RunOutcome<M>& out) {
    typename M::State cur = out.start;
    for (const auto& [f, next] : out.trace) {
        auto present = model.flaws_list(cur);
        bool held = false;
        for (int g : present) held |= (g == f);
        if (!held) throw property_violation("replay: addressed flaw was not present");
        if (!model.action_contains(f, cur, next))
            throw property_violation("replay: step left the action support");
        cur = next;
    }
}

inline int checked_pick(Strategy& strat, const std::vector<int>& present, size_t step) {
    int f = strat.select(present, step);
    for (int g : present)
        if (g == f) return f;
    throw property_violation("strategy selected a flaw that is not addressable");
}

} // namespace detail

/** One run of the sequential random walk: sample an initial state, then
    repeatedly address a present flaw chosen by the strategy until flawless
    (terminated) or the step budget runs out. */
template <class M>
RunOutcome<M> run_sequential(const M& model, Strategy& strat, uint64_t seed, const RunOptions& opt = {}) {
    Rng rng(seed);
    strat.begin_run(rng.split(0x5374726174ull)); // label: "Strat"
    RunOutcome<M> out;
    out.seed = seed;
    out.strategy = strat.name();
    out.recorded = opt.record;
    typename M::State cur = model.sample_initial(rng);
    out.start = cur;
    for (;;) {
        auto present = model.flaws_list(cur);
        if (present.empty()) {
            out.terminated = true;
            break;
        }
        if (out.steps >= opt.max_steps) break;
        int f = detail::checked_pick(strat, present, out.steps);
        typename M::State next = model.sample_action(f, cur, rng);
        if (opt.record) out.trace.emplace_back(f, next);
        cur = next;
        ++out.steps;
    }
    out.final_state = cur;
    if (opt.record && opt.validate) detail::replay_check(model, out);
    return out;
}

/** One run of the round-based walk: per round, greedily grow an independent
    set I by addressing flaws outside Gamma+(I). Asserts the shrinking
    property: every flaw addressed in a round was present when the round
    began (otherwise the dependency graph is not a causality graph). */
template <class M>
RunOutcome<M> run_parallel(const M& model, const DependencyGraph& dep, Strategy& picker, uint64_t seed,
                           const ParallelOptions& opt = {}) {
    if (dep.size() != static_cast<uint32_t>(model.flaw_count()))
        throw input_error("dependency graph size does not match the flaw count");
    Rng rng(seed);
    picker.begin_run(rng.split(0x5374726174ull));
    RunOutcome<M> out;
    out.seed = seed;
    out.strategy = picker.name();
    out.recorded = opt.record;
    typename M::State cur = model.sample_initial(rng);
    out.start = cur;
    for (;;) {
        auto present = model.flaws_list(cur);
        if (present.empty()) {
            out.terminated = true;
            break;
        }
        if (out.rounds.size() >= opt.max_rounds || out.steps >= opt.max_steps) break;
        RoundInfo round;
        round.first_step = out.steps;
        FlawSet at_round_start(static_cast<uint32_t>(model.flaw_count()));
        for (int f : present) at_round_start.set(f);
        FlawSet blocked(static_cast<uint32_t>(model.flaw_count())); // Gamma+(I)
        for (;;) {
            std::vector<int> candidates;
            for (int f : model.flaws_list(cur))
                if (!blocked.test(f)) candidates.push_back(f);
            if (candidates.empty()) break;
            int f = detail::checked_pick(picker, candidates, out.steps);
            if (!at_round_start.test(f))
                throw property_violation(
                    "shrinking property violated: round addressed a flaw that appeared mid-round "
                    "(the graph is not a causality graph)");
            typename M::State next = model.sample_action(f, cur, rng);
            if (opt.record) out.trace.emplace_back(f, next);
            cur = next;
            ++out.steps;
            round.flaws.push_back(f);
            blocked |= dep.gamma(f, true);
            if (out.steps >= opt.max_steps) break;
        }
        out.rounds.push_back(std::move(round));
    }
    out.final_state = cur;
    if (opt.record && opt.validate) detail::replay_check(model, out);
    return out;
}

inline Walk to_walk(const RunOutcome<EnumeratedInstance>& out) {
    if (!out.recorded) throw input_error("run was not recorded");
    Walk w;
    w.start = out.start;
    w.steps = out.trace;
    return w;
}

} // namespace lll

#endif
