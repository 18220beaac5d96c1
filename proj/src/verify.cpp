#include "lll/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "lll/parallel.hpp"

namespace lll {

namespace {

constexpr double kProductTolerance = 1e-12;

std::string walk2_str(const EnumeratedInstance& inst, int f, int g, int s1, int s3) {
    return "f=" + inst.flaw_label(f) + " g=" + inst.flaw_label(g) + " endpoints (" + inst.state_label(s1) +
           " -> " + inst.state_label(s3) + ")";
}

struct TwoStep {
    int mid;
    Rat p1, p2;
};

/** Kuhn's augmenting-path matching; returns true when every left node is matched. */
bool saturates(const std::vector<std::vector<int>>& adj, size_t nright) {
    std::vector<int> match_right(nright, -1);
    std::vector<char> used;
    std::function<bool(int)> try_match = [&](int u) -> bool {
        for (int v : adj[static_cast<size_t>(u)]) {
            if (used[static_cast<size_t>(v)]) continue;
            used[static_cast<size_t>(v)] = 1;
            if (match_right[static_cast<size_t>(v)] < 0 || try_match(match_right[static_cast<size_t>(v)])) {
                match_right[static_cast<size_t>(v)] = u;
                return true;
            }
        }
        return false;
    };
    for (size_t u = 0; u < adj.size(); ++u) {
        used.assign(nright, 0);
        if (!try_match(static_cast<int>(u))) return false;
    }
    return true;
}

CheckResult check_commutativity(const EnumeratedInstance& inst, const DependencyGraph& dep, bool strong,
                                int jobs) {
    if (dep.size() != static_cast<uint32_t>(inst.flaw_count()))
        throw input_error("dependency graph size does not match the flaw count");
    CheckResult res;
    res.check = strong ? "strong" : "weak";

    const int nf = inst.flaw_count();
    std::vector<std::pair<int, int>> pairs;
    for (int f = 0; f < nf; ++f)
        for (int g = 0; g < nf; ++g)
            if (f != g && !dep.adjacent(f, g)) pairs.emplace_back(f, g);

    std::mutex mu;
    size_t total_groups = 0;
    parallel_for(pairs.size(), jobs, [&](size_t pi) {
        auto [f, g] = pairs[pi];
        // two-step walks through f then g (domain) and g then f (codomain),
        // grouped by shared endpoints
        std::map<std::pair<int, int>, std::pair<std::vector<TwoStep>, std::vector<TwoStep>>> groups;
        auto collect = [&](int a, int b, bool domain) {
            for (int s1 : inst.states_with(a))
                for (const auto& [s2, p1] : inst.action(a, s1)) {
                    if (!inst.flaw_holds(b, s2)) continue;
                    for (const auto& [s3, p2] : inst.action(b, s2)) {
                        auto& grp = groups[{s1, s3}];
                        (domain ? grp.first : grp.second).push_back({s2, p1, p2});
                    }
                }
        };
        collect(f, g, true);
        collect(g, f, false);

        size_t local_groups = 0;
        std::vector<std::string> local_witnesses;
        for (const auto& [key, grp] : groups) {
            const auto& dom = grp.first;
            const auto& cod = grp.second;
            if (dom.empty()) continue;
            ++local_groups;
            std::vector<std::vector<int>> adj(dom.size());
            for (size_t i = 0; i < dom.size(); ++i)
                for (size_t j = 0; j < cod.size(); ++j) {
                    bool edge;
                    if (!strong) {
                        edge = true;
                    } else {
                        Rat a = dom[i].p1 * dom[i].p2;
                        Rat b = cod[j].p1 * cod[j].p2;
                        edge = inst.exact ? (a == b) : std::abs(to_double(a) - to_double(b)) <= kProductTolerance;
                    }
                    if (edge) adj[i].push_back(static_cast<int>(j));
                }
            if (!saturates(adj, cod.size()))
                local_witnesses.push_back(walk2_str(inst, f, g, key.first, key.second) + ": " +
                                          std::to_string(dom.size()) + " walks cannot be matched into " +
                                          std::to_string(cod.size()) + " swapped walks");
        }
        std::lock_guard<std::mutex> lock(mu);
        total_groups += local_groups;
        for (auto& w : local_witnesses) res.fail(w);
    });
    res.cases_checked = total_groups;
    return res;
}

} // namespace

CheckResult check_atomicity(const EnumeratedInstance& inst) {
    CheckResult res;
    res.check = "atomicity";
    for (int f = 0; f < inst.flaw_count(); ++f) {
        std::map<int, std::vector<int>> sources;
        for (int s : inst.states_with(f))
            for (const auto& [s2, p] : inst.action(f, s)) {
                (void)p;
                sources[s2].push_back(s);
            }
        for (const auto& [s2, srcs] : sources) {
            ++res.cases_checked;
            if (srcs.size() > 1) {
                std::string w = "flaw " + inst.flaw_label(f) + " reaches " + inst.state_label(s2) + " from";
                for (int s : srcs) w += " " + inst.state_label(s);
                res.fail(w);
            }
        }
    }
    return res;
}

CheckResult check_causality_graph(const EnumeratedInstance& inst, const DependencyGraph& dep) {
    if (dep.size() != static_cast<uint32_t>(inst.flaw_count()))
        throw input_error("dependency graph size does not match the flaw count");
    CheckResult res;
    res.check = "causality";
    for (int f = 0; f < inst.flaw_count(); ++f) {
        FlawSet gam = dep.gamma(f, false);
        for (int s : inst.states_with(f)) {
            FlawSet allowed = inst.present[static_cast<size_t>(s)];
            allowed.reset(f);
            allowed |= gam;
            for (const auto& [s2, p] : inst.action(f, s)) {
                (void)p;
                ++res.cases_checked;
                FlawSet extra = inst.present[static_cast<size_t>(s2)] - allowed;
                if (extra.any())
                    res.fail("addressing " + inst.flaw_label(f) + " at " + inst.state_label(s) +
                             " introduced " + inst.flaw_label(extra.first()) + " at " + inst.state_label(s2) +
                             " outside Gamma(" + inst.flaw_label(f) + ")");
            }
        }
    }
    return res;
}

DependencyGraph infer_minimal_causality(const EnumeratedInstance& inst) {
    DependencyGraph dep(static_cast<uint32_t>(inst.flaw_count()));
    for (int f = 0; f < inst.flaw_count(); ++f)
        for (int s : inst.states_with(f)) {
            FlawSet tolerated = inst.present[static_cast<size_t>(s)];
            tolerated.reset(f);
            for (const auto& [s2, p] : inst.action(f, s)) {
                (void)p;
                FlawSet forced = inst.present[static_cast<size_t>(s2)] - tolerated;
                forced.for_each([&](int g) { dep.add_edge(f, g); });
            }
        }
    return dep;
}

CheckResult check_weak_commutativity(const EnumeratedInstance& inst, const DependencyGraph& dep, int jobs) {
    return check_commutativity(inst, dep, false, jobs);
}

CheckResult check_strong_commutativity(const EnumeratedInstance& inst, const DependencyGraph& dep, int jobs) {
    return check_commutativity(inst, dep, true, jobs);
}

CheckResult check_regenerating(const EnumeratedInstance& inst) {
    CheckResult res;
    res.check = "regenerating";
    const size_t ns = inst.state_count();
    for (int f = 0; f < inst.flaw_count(); ++f) {
        Rat mass = inst.flaw_measure(f);
        std::vector<Rat> inflow(ns, Rat(0));
        for (int s : inst.states_with(f))
            for (const auto& [s2, p] : inst.action(f, s)) inflow[static_cast<size_t>(s2)] += p * inst.omega[static_cast<size_t>(s)];
        for (size_t s2 = 0; s2 < ns; ++s2) {
            ++res.cases_checked;
            Rat lhs = inflow[s2] / mass;
            bool equal = inst.exact ? (lhs == inst.omega[s2])
                                    : std::abs(to_double(lhs) - to_double(inst.omega[s2])) <=
                                          EnumeratedInstance::kSumTolerance;
            if (!equal)
                res.fail("flaw " + inst.flaw_label(f) + " regenerates mass " + rat_str(lhs) + " at " +
                         inst.state_label(static_cast<int>(s2)) + ", stationary is " + rat_str(inst.omega[s2]));
        }
    }
    return res;
}

std::vector<Rat> minimal_lambda(const EnumeratedInstance& inst) {
    const size_t ns = inst.state_count();
    std::vector<Rat> lambda(static_cast<size_t>(inst.flaw_count()), Rat(0));
    for (int f = 0; f < inst.flaw_count(); ++f) {
        std::vector<Rat> charge(ns, Rat(0));
        for (int s : inst.states_with(f))
            for (const auto& [s2, p] : inst.action(f, s))
                charge[static_cast<size_t>(s2)] += p * inst.omega[static_cast<size_t>(s)] / inst.omega[static_cast<size_t>(s2)];
        Rat best(0);
        for (const Rat& c : charge)
            if (c > best) best = c;
        lambda[static_cast<size_t>(f)] = best;
    }
    return lambda;
}

VerificationReport verify_all(const EnumeratedInstance& inst, const DependencyGraph& dep,
                              const std::vector<std::string>& checks, int jobs) {
    auto wanted = [&](const std::string& c) {
        return checks.empty() || std::find(checks.begin(), checks.end(), c) != checks.end();
    };
    VerificationReport rep;
    if (wanted("atomicity")) rep.results.push_back(check_atomicity(inst));
    if (wanted("causality")) rep.results.push_back(check_causality_graph(inst, dep));
    if (wanted("weak")) rep.results.push_back(check_weak_commutativity(inst, dep, jobs));
    if (wanted("strong")) rep.results.push_back(check_strong_commutativity(inst, dep, jobs));
    if (wanted("regenerating")) rep.results.push_back(check_regenerating(inst));
    if (rep.results.empty()) throw input_error("no known checks selected");
    return rep;
}

} // namespace lll
