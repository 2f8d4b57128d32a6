#pragma once

// Root counting for log-power expressions on an interval: symbolic upper
// bounds (Descartes, Budan-Fourier, Rolle-style derivative chains) and a
// brute-force numeric oracle that observes sign changes. Roots are always
// counted as distinct points; multiplicity is ignored.

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "altkit/symexpr.h"

namespace altkit {

// Strict sign changes in the sequence after deleting zeros.
unsigned sign_variations(std::span<const Rational> coeffs);

// Sign variations of the ascending coefficients of a polynomial: an upper
// bound on its positive roots with the same parity as the true count.
// Throws InvalidArgument if poly is not a polynomial.
unsigned descartes_bound(const LogPowExpr& poly);

// V(lo) - V(hi), where V(t) counts sign variations of
// (p(t), p'(t), ..., p^(deg)(t)); bounds the roots in (lo, hi].
// Infinite endpoints use the limiting signs of the derivative sequence.
unsigned budan_fourier_bound(const LogPowExpr& poly, const Interval& interval);

struct ChainStep {
  unsigned order = 0;
  std::string reason;
};

struct ChainBound {
  std::optional<unsigned> bound;
  std::vector<ChainStep> chain;
};

struct ChainOptions {
  unsigned max_depth = 16;
  // Count roots of a terminal power sum by its sign variations instead of
  // its degree. Sharper, but no longer uniform over a function family.
  bool use_descartes = false;
};

// Searches for the smallest k such that D^k f (possibly rescaled by positive
// powers x^beta along the way) has a decidable root count b, and returns
// b + k. A stage is decidable when it is x^beta times a power sum (degree
// bound) or has all coefficients of one sign with every term positive on the
// interval (no roots). nullopt if nothing is decided within max_depth.
ChainBound derivative_chain_bound(const LogPowExpr& f, const Interval& interval,
                                  const ChainOptions& options = {});

struct AlternatingCoefficient {
  unsigned j = 0;
  int sign = 1;  // (-1)^(N-1+j)
  Rational c;    // > 0
  Rational a;    // coefficient of x^j in p
};

// D^N(p(x) ln x) = x^-N * sum_j sign_j * c_j * a_j * x^j
struct AlternatingForm {
  unsigned power = 0;
  std::vector<AlternatingCoefficient> coeffs;
};

// Computes D^N(p ln x) symbolically for p in Pi_{N-1} (ascending
// coefficients, at most N of them), extracts each c_j from unit probes
// p = x^j and checks the factorization against the given p. Throws
// VerificationError if the result is not x^-N times a polynomial, if any
// c_j <= 0, or if the factored form does not reproduce D^N(p ln x).
AlternatingForm extract_alternating_form(std::span<const Rational> p_coeffs, unsigned N);

struct OracleOptions {
  unsigned grid_points = 4096;
  // Absolute bracket width on x after bisection.
  double tol = 1e-10;
  // +inf is clamped to horizon; a lower endpoint of 0 is clamped to 1/horizon.
  double horizon = 1e4;
};

struct RootBracket {
  double lo = 0;
  double hi = 0;
};

struct NumericRoots {
  unsigned count = 0;
  std::vector<RootBracket> brackets;
};

// Scans a geometric grid for sign changes and bisects each bracket. Samples
// whose sign is not resolvable against the rounding error of the evaluation
// are skipped, so the count is a lower bound on the number of distinct roots
// (tangential roots can be missed; spurious ones are not produced).
// Throws DomainError when the interval reaches x <= 0 other than (0, ...).
NumericRoots numeric_count_roots(const LogPowExpr& f, const Interval& interval,
                                 const OracleOptions& options = {});

struct RootCountReport {
  LogPowExpr expr;
  Interval interval = Interval::positive_reals();
  std::optional<unsigned> bound;
  std::vector<ChainStep> bound_chain;
  unsigned observed = 0;
  std::vector<RootBracket> observed_roots;

  bool consistent() const { return !bound || observed <= *bound; }
};

RootCountReport count_roots(const LogPowExpr& f, const Interval& interval,
                            const ChainOptions& chain = {}, const OracleOptions& oracle = {});

nlohmann::json to_json(const RootCountReport& report);
nlohmann::json to_json(const AlternatingForm& form);

}  // namespace altkit
