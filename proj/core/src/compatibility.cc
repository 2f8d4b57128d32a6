#include "altkit/compatibility.h"

#include <algorithm>

#include "altkit/errors.h"
#include "altkit/rootcount.h"
#include "altkit/systems.h"

namespace altkit {

namespace {

// Rank of a set of coefficient vectors (padded with zeros) over Q.
std::size_t rank(std::vector<std::vector<Rational>> rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  for (auto& r : rows) r.resize(width, Rational(0));
  std::size_t rk = 0;
  for (std::size_t col = 0; col < width && rk < rows.size(); ++col) {
    std::size_t piv = rk;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rk], rows[piv]);
    for (std::size_t i = rk + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      Rational f = rows[i][col] / rows[rk][col];
      for (std::size_t j = col; j < width; ++j) rows[i][j] -= f * rows[rk][j];
    }
    ++rk;
  }
  return rk;
}

CompatibilityResult fail(std::string why) { return {std::nullopt, std::move(why)}; }

}  // namespace

CompatibilityResult check_compatibility(const LogPowExpr& F, unsigned k, unsigned n,
                                        const Interval& interval,
                                        const CompatibilityOptions& options) {
  if (F.is_zero()) return fail("F is identically zero");
  if (!interval.is_subset_of(Interval::positive_reals())) {
    return fail("interval " + to_string(interval) +
                " leaves (0, inf), where log-power functions are smooth");
  }

  std::vector<LogPowExpr> derivs;
  std::optional<Rational> beta;
  for (unsigned t = 0; t <= n; ++t) {
    LogPowExpr h = differentiate_n(F * LogPowExpr::monomial(Rational(t)), k);
    if (h.max_logpow() > 0) {
      return fail("D^" + std::to_string(k) + "(F x^" + std::to_string(t) + ") = " +
                  to_string(h) + " keeps ln terms; not compatible at this k");
    }
    if (!h.is_zero() && (!beta || h.min_alpha() < *beta)) beta = h.min_alpha();
    derivs.push_back(std::move(h));
  }
  if (!beta) return fail("D^" + std::to_string(k) + "(F q) vanishes for every q in Pi_n");

  CompatibilityCertificate cert;
  cert.F = F;
  cert.k = k;
  cert.n = n;
  cert.interval = interval;
  cert.tilde_F = LogPowExpr::monomial(*beta);

  std::vector<std::vector<Rational>> quotients;
  unsigned degree = 0;
  bool all_monomials = true;
  for (unsigned t = 0; t <= n; ++t) {
    LogPowExpr q = shift_power(derivs[t], -*beta);
    if (!q.is_polynomial()) {
      return fail("D^" + std::to_string(k) + "(F x^" + std::to_string(t) + ") / x^(" +
                  to_string(*beta) + ") = " + to_string(q) + " is not a polynomial");
    }
    CompatibilityProbe probe;
    probe.t = t;
    probe.derivative = derivs[t];
    probe.quotient = q.polynomial_coefficients();
    probe.factorization_exact = equal(derivs[t], cert.tilde_F * q);
    if (!probe.factorization_exact) return fail("factorization check failed at t=" + std::to_string(t));
    if (!q.is_zero()) degree = std::max(degree, static_cast<unsigned>(probe.quotient.size() - 1));
    all_monomials = all_monomials && q.size() == 1;
    quotients.push_back(probe.quotient);
    cert.probes.push_back(std::move(probe));
  }
  if (rank(quotients) != n + 1) {
    return fail("q -> q~ is not injective on Pi_" + std::to_string(n) +
                ": some nonzero q has q~ identically zero");
  }

  cert.l = degree;
  if (options.same_sign_descartes && all_monomials) {
    std::vector<Rational> combined(degree + 1, Rational(0));
    for (const auto& q : quotients) {
      for (std::size_t j = 0; j < q.size(); ++j) combined[j] += q[j];
    }
    // Distinct degrees keep each coefficient's sign fixed for same-sign q.
    std::vector<std::size_t> degrees;
    for (const auto& q : quotients) degrees.push_back(q.size() - 1);
    std::sort(degrees.begin(), degrees.end());
    if (std::adjacent_find(degrees.begin(), degrees.end()) == degrees.end()) {
      cert.l = sign_variations(combined);
    }
  }
  return {std::move(cert), {}};
}

std::vector<Rational> transformed_quotient(const CompatibilityCertificate& cert,
                                           std::span<const Rational> q) {
  if (q.size() > cert.n + 1) {
    throw InvalidArgument("q has degree above n=" + std::to_string(cert.n));
  }
  std::vector<Rational> out;
  for (std::size_t t = 0; t < q.size(); ++t) {
    const auto& qt = cert.probes[t].quotient;
    if (out.size() < qt.size()) out.resize(qt.size(), Rational(0));
    for (std::size_t j = 0; j < qt.size(); ++j) out[j] += q[t] * qt[j];
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

UnisolvenceBound unisolvence_bound(unsigned m, unsigned n, unsigned k, unsigned l) {
  if (k <= m) {
    throw InvalidArgument("the compatibility bound needs k > m (k=" + std::to_string(k) +
                          ", m=" + std::to_string(m) + ")");
  }
  UnisolvenceBound b{m, n, k, l, k + l, false};
  // l < n - (k - m) + 2, rearranged to stay in unsigned arithmetic.
  b.unisolvent = l + k < n + m + 2;
  return b;
}

std::optional<unsigned> refined_mixed_bound(unsigned i, unsigned m, unsigned n) {
  return root_bound(FunctionSystemSpec::mixed(i, m, n));
}

MixedRefinement mixed_refinement(unsigned i, std::span<const Rational> q) {
  if (q.empty() || q.back() == 0) {
    throw InvalidArgument("mixed refinement needs q with a nonzero leading coefficient");
  }
  const auto n = static_cast<unsigned>(q.size() - 1);
  std::vector<LogPowTerm> terms;
  for (unsigned j = 0; j <= n; ++j) terms.push_back({q[j], Rational(i + j), 1});
  LogPowExpr f = LogPowExpr::from_terms(std::move(terms));

  MixedRefinement r;
  r.derivative = differentiate_n(f, n + i);
  r.G = shift_power(r.derivative, Rational(n));
  r.DnG = differentiate_n(r.G, n);
  for (const auto& t : r.DnG.terms()) {
    if (t.alpha == 0 && t.logpow == 1) {
      r.ln_coeff = t.coeff;
    } else if (t.alpha == 0 && t.logpow == 0) {
      r.constant = t.coeff;
    } else {
      throw VerificationError("D^n G = " + to_string(r.DnG) + " is not of the form A ln x + B");
    }
  }
  const int s = sign(q.back());
  // ln x > 0 on (1, inf), so B = 0 still leaves no roots.
  r.definite = sign(r.ln_coeff) == s && sign(r.constant) != -s;
  return r;
}

nlohmann::json to_json(const CompatibilityCertificate& cert) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : cert.probes) {
    nlohmann::json q = nlohmann::json::array();
    for (const auto& c : p.quotient) q.push_back(to_string(c));
    probes.push_back({{"t", p.t},
                      {"derivative", to_string(p.derivative)},
                      {"q_tilde", q},
                      {"exact", p.factorization_exact}});
  }
  return {{"F", to_json(cert.F)},
          {"F_text", to_string(cert.F)},
          {"k", cert.k},
          {"n", cert.n},
          {"l", cert.l},
          {"tilde_F", to_json(cert.tilde_F)},
          {"tilde_F_text", to_string(cert.tilde_F)},
          {"interval", to_json(cert.interval)},
          {"probes", probes}};
}

nlohmann::json to_json(const UnisolvenceBound& b) {
  return {{"m", b.m}, {"n", b.n}, {"k", b.k}, {"l", b.l}, {"bound", b.bound},
          {"unisolvent", b.unisolvent}};
}

}  // namespace altkit
