#ifndef LLL_VERIFY_HPP
#define LLL_VERIFY_HPP

#include <string>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/instance.hpp"
#include "lll/rational.hpp"

namespace lll {

struct CheckResult {
    std::string check;
    bool ok = true;
    size_t cases_checked = 0;
    std::vector<std::string> witnesses; // first few counterexamples
    size_t witness_cap = 10;

    void fail(const std::string& w) {
        ok = false;
        if (witnesses.size() < witness_cap) witnesses.push_back(w);
    }
};

/** Every (flaw, target state) pair has at most one source state. */
CheckResult check_atomicity(const EnumeratedInstance& inst);

/** Addressing f at sigma only introduces flaws inside Gamma(f):
    F_{sigma'} is contained in (F_sigma - {f}) union Gamma(f). */
CheckResult check_causality_graph(const EnumeratedInstance& inst, const DependencyGraph& dep);

/** Smallest symmetric relation that passes check_causality_graph. */
DependencyGraph infer_minimal_causality(const EnumeratedInstance& inst);

/** Existence of an injective endpoint-preserving map sending every
    two-step walk through unrelated f then g to one through g then f.
    With `strong`, the mapped walk must also carry the same probability
    product. Grouped by (f, g, endpoints); each group solves a bipartite
    saturating-matching problem. */
CheckResult check_weak_commutativity(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                     int jobs = 1);
CheckResult check_strong_commutativity(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                       int jobs = 1);

/** Resampling any flaw from its conditional stationary measure regenerates
    the stationary measure exactly. */
CheckResult check_regenerating(const EnumeratedInstance& inst);

/** Tightest per-flaw charges: lambda_f = max over target states of the
    flow-in/flow-out ratio sum. */
std::vector<Rat> minimal_lambda(const EnumeratedInstance& inst);

struct VerificationReport {
    std::vector<CheckResult> results;
    bool all_ok() const {
        for (const auto& r : results)
            if (!r.ok) return false;
        return true;
    }
    const CheckResult* find(const std::string& check) const {
        for (const auto& r : results)
            if (r.check == check) return &r;
        return nullptr;
    }
};

/** Runs the named checks ("atomicity", "causality", "weak", "strong",
    "regenerating"); empty selection = all of them. */
VerificationReport verify_all(const EnumeratedInstance& inst, const DependencyGraph& dep,
                              const std::vector<std::string>& checks = {}, int jobs = 1);

} // namespace lll

#endif
