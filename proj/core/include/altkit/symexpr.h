#pragma once

// Exact algebra and calculus on log-power expressions
//
//   f(x) = sum_t c_t * x^{alpha_t} * (ln x)^{m_t}
//
// with rational c_t, rational alpha_t and integer m_t >= 0. The class is
// closed under addition, multiplication and differentiation, and it contains
// every function family handled by altkit (power systems, ln(x)p(x) + q(x),
// x^i ln(x) q(x), and all of their derivatives).

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "altkit/rational.h"

namespace altkit {

struct LogPowTerm {
  Rational coeff;
  Rational alpha;
  unsigned logpow = 0;

  friend bool operator==(const LogPowTerm&, const LogPowTerm&) = default;
};

// Immutable, always canonical: terms sorted by (alpha, logpow) ascending,
// keys unique, no zero coefficients. The empty term list is the zero function.
class LogPowExpr {
 public:
  LogPowExpr() = default;

  // Merges like terms and drops cancellations; input order is irrelevant.
  static LogPowExpr from_terms(std::vector<LogPowTerm> terms);
  static LogPowExpr constant(const Rational& c);
  // c * x^alpha * (ln x)^logpow
  static LogPowExpr monomial(const Rational& alpha, unsigned logpow = 0,
                             const Rational& coeff = 1);
  // sum_k coeffs[k] * x^k
  static LogPowExpr polynomial(std::span<const Rational> ascending);

  const std::vector<LogPowTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // No ln factors anywhere.
  bool is_pure_power() const;
  // Pure power with every exponent a nonnegative integer.
  bool is_polynomial() const;
  // Ascending coefficients of a polynomial expression; throws InvalidArgument
  // otherwise. The zero expression yields an empty vector.
  std::vector<Rational> polynomial_coefficients() const;
  // Highest power of ln x present (0 for the zero expression).
  unsigned max_logpow() const;

  // Smallest and largest x-exponent; require a nonzero expression.
  const Rational& min_alpha() const;
  const Rational& max_alpha() const;

  friend bool operator==(const LogPowExpr&, const LogPowExpr&) = default;

 private:
  explicit LogPowExpr(std::vector<LogPowTerm> canonical) : terms_(std::move(canonical)) {}
  std::vector<LogPowTerm> terms_;
};

LogPowExpr add(const LogPowExpr& a, const LogPowExpr& b);
LogPowExpr scale(const LogPowExpr& a, const Rational& c);
LogPowExpr multiply(const LogPowExpr& a, const LogPowExpr& b);
// Multiplies by x^beta.
LogPowExpr shift_power(const LogPowExpr& a, const Rational& beta);

LogPowExpr differentiate(const LogPowExpr& f);
LogPowExpr differentiate_n(const LogPowExpr& f, unsigned n);

// Floating-point value at x > 0. Polynomial expressions are evaluated in exact
// rational arithmetic first (every finite double is rational), so e.g.
// x^2 - 1 at 1 is exactly 0. Throws DomainError for x <= 0 or non-finite x.
double evaluate(const LogPowExpr& f, double x);
// Exact value for polynomial expressions; nullopt when f has ln factors or
// non-integer/negative exponents.
std::optional<Rational> evaluate_exact(const LogPowExpr& f, const Rational& x);

// Exact structural equality of canonical forms.
bool equal(const LogPowExpr& a, const LogPowExpr& b);

inline LogPowExpr operator+(const LogPowExpr& a, const LogPowExpr& b) { return add(a, b); }
inline LogPowExpr operator-(const LogPowExpr& a) { return scale(a, -1); }
inline LogPowExpr operator-(const LogPowExpr& a, const LogPowExpr& b) { return add(a, -b); }
inline LogPowExpr operator*(const LogPowExpr& a, const LogPowExpr& b) { return multiply(a, b); }
inline LogPowExpr operator*(const Rational& c, const LogPowExpr& a) { return scale(a, c); }

// Human-readable form, e.g. "2*x^2*ln(x) - 3*x + 1/2".
std::string to_string(const LogPowExpr& f);

// JSON array of {"coeff":"p/q","alpha":"p/q","logpow":k}.
nlohmann::json to_json(const LogPowExpr& f);
LogPowExpr expr_from_json(const nlohmann::json& j);

// Open interval (lo, hi); a missing endpoint means -inf / +inf.
class Interval {
 public:
  Interval(std::optional<Rational> lo, std::optional<Rational> hi);

  static Interval positive_reals() { return Interval(Rational(0), std::nullopt); }
  static Interval above_one() { return Interval(Rational(1), std::nullopt); }

  const std::optional<Rational>& lo() const { return lo_; }
  const std::optional<Rational>& hi() const { return hi_; }

  bool contains(const Rational& x) const;
  bool contains(double x) const;
  bool is_subset_of(const Interval& other) const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  std::optional<Rational> lo_;
  std::optional<Rational> hi_;
};

std::string to_string(const Interval& iv);
// ["lo","hi"] with "-inf"/"inf" for missing endpoints.
nlohmann::json to_json(const Interval& iv);
Interval interval_from_json(const nlohmann::json& j);

}  // namespace altkit
