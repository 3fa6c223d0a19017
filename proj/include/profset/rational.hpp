#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "profset/money.hpp"

namespace profset {

/// Exact arbitrary-precision rational. Allocation probabilities and
/// expected-mode margins are never materialized as floats.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational to_rational(Money m) { return Rational(m.minor_units); }

/// Floor of an exact rational (denominator is kept positive by the library).
inline BigInt rational_floor(const Rational& q) {
    BigInt n = numerator(q);
    BigInt d = denominator(q);
    BigInt quot = n / d;
    if (n % d != 0 && n < 0) --quot;
    return quot;
}

/// Rounds to the nearest minor unit, ties toward positive infinity:
/// round(q) = floor(q + 1/2).
inline Money round_to_money(const Rational& q) {
    BigInt r = rational_floor(q + Rational(1, 2));
    return Money{static_cast<std::int64_t>(r)};
}

inline std::string to_string(const Rational& q) {
    return q.str();
}

} // namespace profset
