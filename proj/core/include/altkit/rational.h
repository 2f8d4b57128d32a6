#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace altkit {

// Exact rational backed by GMP. mpq_class keeps values in lowest terms with a
// positive denominator as long as every value enters through the helpers
// below (or through arithmetic on canonical values).
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p", and decimal literals such as "-1.25" or "3e-2".
// Decimal literals are converted exactly (1.1 becomes 11/10, not the nearest
// double). Throws InvalidArgument on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

// Exact conversion of a finite double.
Rational rational_from_double(double x);

Integer factorial(unsigned k);

inline int sign(const Rational& q) { return sgn(q); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace altkit
