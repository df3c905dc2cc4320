#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lrswap {

// Exact rational scalar. GMP keeps every result of arithmetic canonical
// (lowest terms, positive denominator); values built from a raw
// numerator/denominator pair must go through make_rational.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

// Accepts "a", "a/b", and plain decimals such as "0.3" or "-1.25e-2".
// Decimals are converted exactly (0.3 -> 3/10), never through a double.
Rational parse_rational(std::string_view text);

// Exact value of the shortest decimal that round-trips to v.
Rational rational_from_double(double v);

// "a/b", or "a" when the denominator is 1.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double v) { return v; }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double v) { return v == 0.0; }

inline Rational abs_value(const Rational& r) { return abs(r); }
inline double abs_value(double v) { return v < 0 ? -v : v; }

}  // namespace lrswap
