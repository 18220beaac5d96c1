#ifndef LLL_RNG_HPP
#define LLL_RNG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lll/errors.hpp"

namespace lll {

/** Counter-based pseudo-random generator ("splitmix64/v1").

    Output i is a fixed bijective mix of (seed + i*gamma), so streams are
    reproducible across platforms and splittable: child streams are keyed by
    hashing a label into the parent seed. Intentionally not std::* based --
    the standard distributions are not bit-reproducible across libraries. */
class Rng {
public:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static const char* name() { return "splitmix64/v1"; }

    explicit Rng(uint64_t seed = 0) : seed_(seed), state_(seed) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    /** Uniform in [0, n) without modulo bias (rejection on the top range). */
    uint64_t below(uint64_t n) {
        if (n == 0) throw input_error("Rng::below(0)");
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        for (;;) {
            uint64_t x = next_u64();
            if (x < limit) return x % n;
        }
    }

    /** Uniform double in [0,1) with 53 random bits. */
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /** Independent child stream; deterministic in (seed, label). */
    Rng split(uint64_t label) const { return Rng(mix(seed_ ^ mix(label + kGamma))); }

    /** Fisher-Yates shuffle of an index range. */
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    uint64_t seed_;
    uint64_t state_;
};

} // namespace lll

#endif
