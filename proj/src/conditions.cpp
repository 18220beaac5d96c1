#include "lll/conditions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "lll/parallel.hpp"

namespace lll {

namespace {

void check_sizes(const DependencyGraph& dep, const std::vector<Rat>& v, const char* what) {
    if (v.size() != dep.size()) throw input_error(std::string(what) + " vector size mismatch");
}

void check_positive(const std::vector<Rat>& v, const char* what) {
    for (const Rat& x : v)
        if (sgn(x) <= 0) throw input_error(std::string(what) + " entries must be positive");
}

} // namespace

std::vector<Rat> evaluate_cluster_theta(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                                        const std::vector<Rat>& mu, size_t cap, int jobs) {
    check_sizes(dep, lambda, "lambda");
    check_sizes(dep, mu, "mu");
    check_positive(lambda, "lambda");
    check_positive(mu, "mu");
    std::vector<Rat> theta(dep.size(), Rat(0));
    parallel_for(dep.size(), jobs, [&](size_t f) {
        Rat sum(0);
        dep.for_each_independent_subset(dep.gamma(static_cast<int>(f), false), cap, [&](const FlawSet& s) {
            Rat prod(1);
            s.for_each([&](int g) { prod *= mu[static_cast<size_t>(g)]; });
            sum += prod;
        });
        theta[f] = lambda[f] / mu[f] * sum;
    });
    return theta;
}

std::vector<Rat> evaluate_symmetric_theta(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                                          const std::vector<Rat>& mu) {
    check_sizes(dep, lambda, "lambda");
    check_sizes(dep, mu, "mu");
    check_positive(lambda, "lambda");
    check_positive(mu, "mu");
    std::vector<Rat> theta(dep.size(), Rat(0));
    for (uint32_t f = 0; f < dep.size(); ++f) {
        Rat prod(1);
        dep.gamma(static_cast<int>(f), false).for_each([&](int g) { prod *= Rat(1) + mu[static_cast<size_t>(g)]; });
        theta[f] = lambda[f] / mu[f] * prod;
    }
    return theta;
}

ShearerTable shearer_q(const DependencyGraph& dep, const std::vector<Rat>& p, size_t cap) {
    check_sizes(dep, p, "p");
    check_positive(p, "p");
    if (dep.size() > 64) throw capability_error("Shearer tables support at most 64 flaws");
    std::unordered_map<uint64_t, Rat> q;
    dep.for_each_independent_subset(dep.all_flaws(), cap, [&](const FlawSet& ind) {
        Rat pI(1);
        ind.for_each([&](int f) { pI *= p[static_cast<size_t>(f)]; });
        const std::vector<int> elems = ind.to_vector();
        const size_t k = elems.size();
        for (uint64_t sub = 0; sub < (uint64_t{1} << k); ++sub) {
            uint64_t mask = 0;
            int removed = 0;
            for (size_t b = 0; b < k; ++b) {
                if (sub & (uint64_t{1} << b))
                    mask |= uint64_t{1} << elems[b];
                else
                    ++removed;
            }
            Rat& slot = q[mask];
            if (removed % 2)
                slot -= pI;
            else
                slot += pI;
        }
    });
    return ShearerTable(dep.size(), std::move(q));
}

ShearerTable shearer_q_parallel(const DependencyGraph& dep, const std::vector<Rat>& p, size_t cap,
                                int jobs) {
    check_sizes(dep, p, "p");
    check_positive(p, "p");
    if (dep.size() > 64) throw capability_error("Shearer tables support at most 64 flaws");
    std::vector<uint64_t> ind_masks;
    std::vector<Rat> ind_p;
    dep.for_each_independent_subset(dep.all_flaws(), cap, [&](const FlawSet& ind) {
        ind_masks.push_back(ind.mask64());
        Rat pI(1);
        ind.for_each([&](int f) { pI *= p[static_cast<size_t>(f)]; });
        ind_p.push_back(pI);
    });
    // set-major: each row S sums over its independent supersets independently
    std::vector<Rat> qv(ind_masks.size(), Rat(0));
    parallel_for(ind_masks.size(), jobs, [&](size_t si) {
        uint64_t s = ind_masks[si];
        int bits_s = std::popcount(s);
        Rat acc(0);
        for (size_t ii = 0; ii < ind_masks.size(); ++ii) {
            uint64_t i = ind_masks[ii];
            if ((s & i) != s) continue;
            if ((std::popcount(i) - bits_s) % 2)
                acc -= ind_p[ii];
            else
                acc += ind_p[ii];
        }
        qv[si] = acc;
    });
    std::unordered_map<uint64_t, Rat> q;
    for (size_t si = 0; si < ind_masks.size(); ++si) q[ind_masks[si]] = qv[si];
    return ShearerTable(dep.size(), std::move(q));
}

ShearerVerdict check_shearer(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                             const std::vector<Rat>& p, const Rat& theta, size_t cap) {
    check_sizes(dep, lambda, "lambda");
    if (sgn(theta) <= 0) throw input_error("theta must be positive");
    ShearerVerdict verdict;
    ShearerTable table = shearer_q(dep, p, cap);
    verdict.q_empty = table.q_empty();
    for (const auto& [mask, qs] : table.entries())
        if (sgn(qs) < 0) {
            verdict.reason = "q_S negative at mask " + std::to_string(mask) + " (q = " + rat_str(qs) + ")";
            return verdict;
        }
    if (sgn(verdict.q_empty) <= 0) {
        verdict.reason = "q_empty is not positive (q = " + rat_str(verdict.q_empty) + ")";
        return verdict;
    }
    for (uint32_t f = 0; f < dep.size(); ++f)
        if (lambda[f] > theta * p[f]) {
            verdict.reason = "lambda exceeds theta*p at flaw " + std::to_string(f);
            return verdict;
        }
    verdict.ok = true;
    verdict.reason = "inside the Shearer region with margin theta";
    return verdict;
}

std::string to_string(BoundVariant v) {
    switch (v) {
        case BoundVariant::seq_a: return "seq_a";
        case BoundVariant::seq_b: return "seq_b";
        case BoundVariant::seq_c: return "seq_c";
        case BoundVariant::parallel: return "parallel";
    }
    return "?";
}

BoundReport bound_T(const EnumeratedInstance& inst, const DependencyGraph& dep, const LllParams& params,
                    BoundVariant variant, size_t cap) {
    if (dep.size() != static_cast<uint32_t>(inst.flaw_count()))
        throw input_error("dependency graph size does not match the flaw count");
    check_sizes(dep, params.weights, "weights");
    if (params.theta >= 1 || sgn(params.theta) <= 0)
        throw capability_error("no convergence certificate: theta must be in (0,1), got " +
                               rat_str(params.theta));

    BoundReport rep;
    rep.variant = variant;

    Rat gamma(0);
    for (size_t s = 0; s < inst.state_count(); ++s) {
        if (sgn(inst.omega_init[s]) == 0) continue;
        Rat ratio = inst.omega_init[s] / inst.omega[s];
        if (ratio > gamma) gamma = ratio;
    }
    if (sgn(gamma) <= 0) throw input_error("initial measure has empty support");
    rep.gamma_init = to_double(gamma);

    ShearerTable table;
    const bool shearer = params.mode == LllParams::Mode::shearer;
    if (shearer) {
        table = shearer_q(dep, params.weights, cap);
        if (sgn(table.q_empty()) <= 0) throw capability_error("q_empty not positive; outside Shearer region");
    }
    auto weight_of = [&](const FlawSet& r) -> Rat {
        if (shearer) return table.q(r) / table.q_empty();
        Rat prod(1);
        r.for_each([&](int f) { prod *= params.weights[static_cast<size_t>(f)]; });
        return prod;
    };

    Rat wsum(0);
    bool truncated = false;
    if (variant == BoundVariant::parallel) {
        for (uint32_t f = 0; f < dep.size(); ++f) {
            FlawSet single(dep.size());
            single.set(static_cast<int>(f));
            wsum += weight_of(single);
        }
    } else {
        std::set<std::vector<int>> roots;
        std::vector<FlawSet> root_sets;
        auto add_root = [&](const FlawSet& r) {
            if (roots.insert(r.to_vector()).second) root_sets.push_back(r);
        };
        try {
            if (variant == BoundVariant::seq_c) {
                dep.for_each_independent_subset(dep.all_flaws(), cap, add_root);
            } else {
                for (size_t s = 0; s < inst.state_count(); ++s) {
                    if (sgn(inst.omega_init[s]) == 0) continue;
                    dep.for_each_independent_subset(inst.present[s], cap, add_root);
                    if (root_sets.size() > cap) throw capability_error("root enumeration cap exceeded");
                }
            }
        } catch (const capability_error&) {
            truncated = true;
        }
        for (const FlawSet& r : root_sets) wsum += weight_of(r);
        if (truncated && !shearer) {
            // geometric closure: the full sum is at most prod_f (1 + mu_f)
            Rat closure(1);
            for (const Rat& m : params.weights) closure *= Rat(1) + m;
            if (closure > wsum) wsum = closure;
        } else if (truncated) {
            throw capability_error("root enumeration cap exceeded in Shearer mode");
        }
    }
    rep.truncated = truncated;
    if (sgn(wsum) <= 0) throw input_error("weight sum is not positive");
    rep.log_weight_sum = rat_log(wsum);

    double log_inv_theta = -rat_log(params.theta);
    double numer = std::log(rep.gamma_init) + rep.log_weight_sum;
    rep.T = std::max(0.0, numer / log_inv_theta);
    return rep;
}

} // namespace lll
