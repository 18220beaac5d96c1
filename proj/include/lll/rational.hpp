#ifndef LLL_RATIONAL_HPP
#define LLL_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "lll/errors.hpp"

namespace lll {

/** Exact rational number. All probabilities and measures inside the library
    are carried as rationals so that equality checks on exact instances are
    exact; doubles only appear at the reporting boundary. */
using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }

/** Exact conversion: every finite double is a dyadic rational. */
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw input_error("rat_from_double: non-finite value");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline Rat rat_from_int64(long long n) {
    mpq_class q;
    mpq_set_si(q.get_mpq_t(), static_cast<long>(n), 1u);
    return q;
}

inline Rat rat(long long num, long long den) {
    if (den == 0) throw input_error("rational with zero denominator");
    Rat q = rat_from_int64(num) / rat_from_int64(den);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
    Rat out(1);
    Rat b = base;
    while (e) {
        if (e & 1) out *= b;
        b *= b;
        e >>= 1;
    }
    return out;
}

/** log of a positive rational, robust to values far outside double range. */
inline double rat_log(const Rat& q) {
    if (sgn(q) <= 0) throw input_error("rat_log: non-positive argument");
    signed long nexp = 0, dexp = 0;
    double nm = mpz_get_d_2exp(&nexp, q.get_num().get_mpz_t());
    double dm = mpz_get_d_2exp(&dexp, q.get_den().get_mpz_t());
    return std::log(nm) - std::log(dm) + (static_cast<double>(nexp) - dexp) * std::log(2.0);
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

/** Parse "3/4", "7", "0.25" (decimal strings are exact). */
Rat rat_parse(const std::string& text);

} // namespace lll

#endif
