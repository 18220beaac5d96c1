#include <cmath>
#include <set>

#include <doctest.h>

#include "lll/engine.hpp"
#include "lll/matching.hpp"
#include "lll/stable.hpp"
#include "lll/variable_model.hpp"

using namespace lll;

namespace {

// Three perfect matchings of K_4; flaws are the single edges 0-1, 2-3, 0-2.
// State ids: 0 = {01,23} (flaws 0,1), 1 = {02,13} (flaw 2), 2 = {03,12} (flawless).
BuiltInstance k4_three_edges() {
    MatchingInstanceSpec spec;
    spec.host = HostGraph::complete(4);
    spec.flaw_patterns = {{Edge(0, 1)}, {Edge(2, 3)}, {Edge(0, 2)}};
    return build_matching_instance(spec);
}

// One variable with four values; the flaw "x = 0" survives each resample with
// probability 1/4, so conditional step counts are geometric.
BuiltVariableModel loop_toy() {
    VariableModelSpec spec;
    spec.domains = {4};
    spec.flaws.push_back({{0}, {{0}}, "x=0"});
    return build_variable_model(spec);
}

// Both values of the single binary variable are bad: the walk never ends.
BuiltVariableModel never_done() {
    VariableModelSpec spec;
    spec.domains = {2};
    spec.flaws.push_back({{0}, {{0}, {1}}, "always"});
    return build_variable_model(spec);
}

} // namespace

TEST_CASE("sequential runs are reproducible per seed and replay-validate") {
    BuiltInstance built = k4_three_edges();
    auto strat = make_uniform_random_strategy();
    bool any_difference = false;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto a = run_sequential(built.inst, *strat, seed); // validates the trace itself
        auto b = run_sequential(built.inst, *strat, seed);
        CHECK(a.start == b.start);
        CHECK(a.trace == b.trace);
        CHECK(a.terminated);
        Walk w = to_walk(a);
        validate_walk(built.inst, w, true);
        CHECK(sgn(walk_probability(built.inst, w)) > 0);
        if (seed > 0) {
            auto prev = run_sequential(built.inst, *strat, seed - 1);
            any_difference |= !(prev.trace == a.trace && prev.start == a.start);
        }
    }
    CHECK(any_difference);
}

TEST_CASE("golden trace: uniform_random on K_4, seed 14") {
    BuiltInstance built = k4_three_edges();
    auto strat = make_uniform_random_strategy();
    auto out = run_sequential(built.inst, *strat, 14);
    CHECK(out.start == 1);
    CHECK(out.steps == 4);
    CHECK(out.terminated);
    std::vector<std::pair<int, int>> want{{2, 0}, {1, 0}, {1, 1}, {2, 2}};
    CHECK(out.trace == want);
    CHECK(out.final_state == 2);
}

TEST_CASE("first_present picks the lowest rank") {
    auto plain = make_first_present_strategy();
    CHECK(plain->select({2, 5, 7}, 0) == 2);
    CHECK(plain->deterministic());
    // order[f] = rank: flaw 1 has rank 0, so it wins
    auto ranked = make_first_present_strategy({2, 0, 1});
    CHECK(ranked->select({0, 1, 2}, 0) == 1);
    CHECK(ranked->select({0, 2}, 1) == 2);
}

TEST_CASE("scripted strategy replays its script and then refuses") {
    auto s = make_scripted_strategy({1, 0});
    CHECK(s->select({0, 1}, 0) == 1);
    CHECK(s->select({0, 3}, 1) == 0);
    CHECK_THROWS_AS(s->select({0}, 2), property_violation);
    // a cloned copy starts from the same position after begin_run
    auto t = make_scripted_strategy({1, 0});
    t->begin_run(Rng(0));
    CHECK(t->select({1}, 0) == 1);
    CHECK_THROWS_AS(make_scripted_strategy({}), input_error);
    // the engine rejects a pick that is not addressable
    auto bad = make_scripted_strategy({3});
    CHECK_THROWS_AS(detail::checked_pick(*bad, {0, 1}, 0), property_violation);
}

TEST_CASE("uniform_random covers the present set and is seed-deterministic") {
    auto s = make_uniform_random_strategy();
    CHECK_FALSE(s->deterministic());
    s->begin_run(Rng(5));
    std::vector<int> first;
    int tally[3] = {0, 0, 0};
    for (size_t i = 0; i < 300; ++i) {
        int pick = s->select({0, 1, 2}, i);
        first.push_back(pick);
        ++tally[pick];
    }
    for (int f = 0; f < 3; ++f) CHECK(tally[f] > 60); // expect 100 each
    s->begin_run(Rng(5));
    for (size_t i = 0; i < 300; ++i) CHECK(s->select({0, 1, 2}, i) == first[i]);
}

TEST_CASE("make_strategy parses specs") {
    DependencyGraph dep(3);
    CHECK(make_strategy("first_present", dep)->name() == "first_present");
    CHECK(make_strategy("pi_stable", dep)->name() == "pi_stable");
    CHECK(make_strategy("uniform_random", dep)->name() == "uniform_random");
    CHECK(make_strategy("scripted:1,2", dep)->deterministic());
    CHECK_THROWS_AS(make_strategy("nope", dep), input_error);
    CHECK_THROWS_AS(make_strategy("scripted:x", dep), input_error);
}

TEST_CASE("pi_stable sequential walks produce round-sorted words") {
    BuiltInstance built = k4_three_edges();
    auto strat = make_pi_stable_strategy(built.dep);
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto out = run_sequential(built.inst, *strat, seed);
        CHECK(out.terminated);
        CHECK(is_pi_stable(built.dep, {}, to_walk(out).word()));
    }
}

TEST_CASE("parallel rounds are independent, sorted, and stable") {
    BuiltInstance built = k4_three_edges();
    auto picker = make_first_present_strategy();
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto out = run_parallel(built.inst, built.dep, *picker, seed);
        CHECK(out.terminated);
        Word word;
        std::vector<FlawSet> round_sets;
        for (const RoundInfo& round : out.rounds) {
            CHECK_FALSE(round.flaws.empty());
            FlawSet set(built.dep.size());
            for (size_t i = 0; i < round.flaws.size(); ++i) {
                if (i) CHECK(round.flaws[i - 1] < round.flaws[i]); // lowest-first picker
                set.set(round.flaws[i]);
                word.push_back(round.flaws[i]);
            }
            CHECK(built.dep.is_independent(set));
            round_sets.push_back(set);
        }
        for (size_t r = 1; r < round_sets.size(); ++r) {
            // each round lies inside the closed neighborhood of its predecessor
            FlawSet closed = built.dep.gamma(round_sets[r - 1], true);
            bool inside = true;
            round_sets[r].for_each([&](int f) { inside &= closed.test(f); });
            CHECK(inside);
        }
        CHECK(word == to_walk(out).word());
        CHECK(is_pi_stable(built.dep, {}, word));
    }
}

TEST_CASE("golden parallel run: first_present on K_4, seed 5") {
    BuiltInstance built = k4_three_edges();
    auto picker = make_first_present_strategy();
    auto out = run_parallel(built.inst, built.dep, *picker, 5);
    CHECK(out.start == 1);
    CHECK(out.steps == 1);
    CHECK(out.rounds.size() == 1);
    CHECK(out.terminated);
    std::vector<std::pair<int, int>> want{{2, 2}};
    CHECK(out.trace == want);
}

TEST_CASE("a wrong dependency graph trips the shrinking check") {
    BuiltInstance built = k4_three_edges();
    DependencyGraph empty(built.dep.size()); // drops every edge the oracle needs
    auto picker = make_first_present_strategy();
    bool tripped = false;
    for (uint64_t seed = 0; seed < 50 && !tripped; ++seed) {
        try {
            run_parallel(built.inst, empty, *picker, seed);
        } catch (const property_violation&) {
            tripped = true;
        }
    }
    CHECK(tripped);
}

TEST_CASE("geometric tail on the single-loop toy") {
    BuiltVariableModel built = loop_toy();
    auto strat = make_first_present_strategy();
    const size_t trials = 20000;
    double step_sum = 0;
    size_t at_least_two = 0;
    for (uint64_t seed = 0; seed < trials; ++seed) {
        RunOptions opt;
        opt.record = false;
        auto out = run_sequential(built.inst, *strat, seed, opt);
        CHECK(out.terminated);
        step_sum += static_cast<double>(out.steps);
        at_least_two += out.steps >= 2;
    }
    // E[steps] = sum_t Pr[steps >= t] = sum_t 4^-t = 1/3, sd = 2/3
    const double mean = step_sum / trials;
    CHECK(std::abs(mean - 1.0 / 3.0) < 3.0 * (2.0 / 3.0) / std::sqrt(trials));
    // Pr[steps >= 2] = 1/16
    const double p2 = 1.0 / 16.0;
    const double freq = static_cast<double>(at_least_two) / trials;
    CHECK(std::abs(freq - p2) < 3.0 * std::sqrt(p2 * (1 - p2) / trials));
}

TEST_CASE("step caps report non-termination") {
    BuiltVariableModel built = never_done();
    auto strat = make_first_present_strategy();
    RunOptions opt;
    opt.max_steps = 5;
    auto out = run_sequential(built.inst, *strat, 3, opt);
    CHECK_FALSE(out.terminated);
    CHECK(out.steps == 5);
    CHECK(out.trace.size() == 5);

    ParallelOptions popt;
    popt.max_rounds = 4;
    auto pout = run_parallel(built.inst, built.dep, *strat, 3, popt);
    CHECK_FALSE(pout.terminated);
    CHECK(pout.rounds.size() == 4);
}

TEST_CASE("run_parallel wants a matching dependency graph") {
    BuiltInstance built = k4_three_edges();
    DependencyGraph small(1);
    auto picker = make_first_present_strategy();
    CHECK_THROWS_AS(run_parallel(built.inst, small, *picker, 0), input_error);
}
