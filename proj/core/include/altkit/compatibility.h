#pragma once

// k-compatibility certificates and the root bounds they imply for
//
//   F_{m,n} = { p + F q : p in Pi_m, q in Pi_n }.
//
// F is k-compatible with Pi_n of degree l on I when D^k(F q) = F~ q~ for
// every q in Pi_n, with F~ monotone and nonvanishing on I and q~ having at
// most l roots on I. If k > m, members of F_{m,n} then have at most k + l
// roots.

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "altkit/symexpr.h"

namespace altkit {

struct CompatibilityProbe {
  unsigned t = 0;                     // probe q = x^t
  LogPowExpr derivative;              // D^k(F x^t)
  std::vector<Rational> quotient;     // q~_t, ascending coefficients
  bool factorization_exact = false;   // derivative == F~ * q~_t
};

struct CompatibilityCertificate {
  LogPowExpr F;
  unsigned k = 0;
  unsigned n = 0;
  unsigned l = 0;
  LogPowExpr tilde_F;  // single term x^beta
  Interval interval = Interval::positive_reals();
  std::vector<CompatibilityProbe> probes;
};

struct CompatibilityOptions {
  // Bound q~ by Descartes' rule over same-sign coefficient vectors instead of
  // by degree. Only applies when every q~_t is a monomial.
  bool same_sign_descartes = false;
};

struct CompatibilityResult {
  std::optional<CompatibilityCertificate> certificate;
  std::string failure;  // set iff certificate is empty

  explicit operator bool() const { return certificate.has_value(); }
};

CompatibilityResult check_compatibility(const LogPowExpr& F, unsigned k, unsigned n,
                                        const Interval& interval,
                                        const CompatibilityOptions& options = {});

// q~ for an arbitrary q in Pi_n under a certificate: D^k(F q) / F~.
std::vector<Rational> transformed_quotient(const CompatibilityCertificate& cert,
                                           std::span<const Rational> q);

struct UnisolvenceBound {
  unsigned m = 0;
  unsigned n = 0;
  unsigned k = 0;
  unsigned l = 0;
  unsigned bound = 0;       // k + l
  bool unisolvent = false;  // k + l < m + n + 2
};

// Requires k > m (throws InvalidArgument otherwise).
UnisolvenceBound unisolvence_bound(unsigned m, unsigned n, unsigned k, unsigned l);

// Root bound for {p + x^i ln(x) q : p in Pi_m, q in Pi_n} on (1, inf):
// 2n+i when m < n+i, m+n+1 when i = 0 and m > n, nullopt otherwise.
std::optional<unsigned> refined_mixed_bound(unsigned i, unsigned m, unsigned n);

// The refinement behind the 2n+i bound, for q = sum_j q[j] x^j of degree n:
//   D^(n+i)(x^i ln(x) q) = x^-n G,   D^n G = A ln x + B.
struct MixedRefinement {
  LogPowExpr derivative;  // D^(n+i)(x^i ln(x) q)
  LogPowExpr G;
  LogPowExpr DnG;
  Rational ln_coeff;      // A
  Rational constant;      // B
  // A and B share the sign of the leading coefficient of q, so D^n G has no
  // roots on (1, inf).
  bool definite = false;
};

// Throws InvalidArgument if q is empty or its last coefficient is zero.
MixedRefinement mixed_refinement(unsigned i, std::span<const Rational> q);

nlohmann::json to_json(const CompatibilityCertificate& cert);
nlohmann::json to_json(const UnisolvenceBound& b);

}  // namespace altkit
