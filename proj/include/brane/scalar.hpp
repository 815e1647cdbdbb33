#pragma once

#include <gmpxx.h>

#include <cmath>

namespace brane {

/// Exact arbitrary-precision rational used by the identity checks.
using Rational = mpq_class;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

/// Numerator/denominator pair, canonicalized.
inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace brane
