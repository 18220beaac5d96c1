#ifndef LLL_CONDITIONS_HPP
#define LLL_CONDITIONS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/instance.hpp"
#include "lll/rational.hpp"

namespace lll {

/** Convergence certificate: per-flaw charges lambda, weights (mu in the
    cluster/symmetric regimes, p in the Shearer regime) and the contraction
    ratio theta they certify. */
struct LllParams {
    enum class Mode { cluster, symmetric, shearer };
    Mode mode = Mode::cluster;
    std::vector<Rat> lambda;
    std::vector<Rat> weights;
    Rat theta = Rat(1);
};

/** Per-flaw ratio (lambda_f/mu_f) * sum over independent subsets of Gamma(f)
    of the mu-product. theta is the max entry; < 1 certifies convergence. */
std::vector<Rat> evaluate_cluster_theta(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                                        const std::vector<Rat>& mu, size_t cap = kDefaultEnumCap,
                                        int jobs = 1);

/** Weaker but cheaper: (lambda_f/mu_f) * prod over Gamma(f) of (1+mu_g). */
std::vector<Rat> evaluate_symmetric_theta(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                                          const std::vector<Rat>& mu);

/** Signed independent-set sums q_S(p): for each independent S, the sum over
    independent supersets I of (-1)^{|I|-|S|} p^I. Dependent sets vanish. */
class ShearerTable {
public:
    ShearerTable() = default;
    ShearerTable(uint32_t nflaws, std::unordered_map<uint64_t, Rat> q) : n_(nflaws), q_(std::move(q)) {}
    Rat q(uint64_t mask) const {
        auto it = q_.find(mask);
        return it == q_.end() ? Rat(0) : it->second;
    }
    Rat q(const FlawSet& s) const { return q(s.mask64()); }
    Rat q_empty() const { return q(uint64_t{0}); }
    const std::unordered_map<uint64_t, Rat>& entries() const { return q_; }
    uint32_t flaw_count() const { return n_; }

private:
    uint32_t n_ = 0;
    std::unordered_map<uint64_t, Rat> q_;
};

/** Serial reference: accumulate over independent sets I into all subsets. */
ShearerTable shearer_q(const DependencyGraph& dep, const std::vector<Rat>& p,
                       size_t cap = kDefaultEnumCap);
/** Same table, computed set-major so rows parallelize; exact-equal result. */
ShearerTable shearer_q_parallel(const DependencyGraph& dep, const std::vector<Rat>& p,
                                size_t cap = kDefaultEnumCap, int jobs = 0);

struct ShearerVerdict {
    bool ok = false;
    std::string reason;
    Rat q_empty = Rat(0);
};

/** Shearer-region membership at vector p with margin theta:
    all q_S >= 0, q_empty > 0, and lambda_f <= theta * p_f. */
ShearerVerdict check_shearer(const DependencyGraph& dep, const std::vector<Rat>& lambda,
                             const std::vector<Rat>& p, const Rat& theta, size_t cap = kDefaultEnumCap);

enum class BoundVariant { seq_a, seq_b, seq_c, parallel };

struct BoundReport {
    BoundVariant variant = BoundVariant::seq_c;
    double gamma_init = 1.0; // max omega_init/omega
    double log_weight_sum = 0.0;
    double T = 0.0;
    bool truncated = false;  // weight sum hit the cap; upper bound used
};

/** Step bound T = (log gamma_init + log sum of weights) / log(1/theta).
    seq_a / seq_b sum mu(R) over independent subsets of flaw sets reachable at
    start; seq_c over all independent sets; parallel sums single-flaw weights.
    In Shearer mode mu(R) = q_R/q_empty. Requires theta < 1. */
BoundReport bound_T(const EnumeratedInstance& inst, const DependencyGraph& dep, const LllParams& params,
                    BoundVariant variant, size_t cap = kDefaultEnumCap);

std::string to_string(BoundVariant v);

} // namespace lll

#endif
