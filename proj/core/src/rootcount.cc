#include "altkit/rootcount.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <numeric>

#include "altkit/errors.h"

namespace altkit {

unsigned sign_variations(std::span<const Rational> coeffs) {
  unsigned changes = 0;
  int last = 0;
  for (const auto& c : coeffs) {
    int s = sign(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

unsigned descartes_bound(const LogPowExpr& poly) {
  std::vector<Rational> coeffs = poly.polynomial_coefficients();
  return sign_variations(coeffs);
}

namespace {

// Derivative sequence p, p', ..., p^(deg) as ascending coefficient vectors.
std::vector<std::vector<Rational>> derivative_sequence(std::vector<Rational> p) {
  std::vector<std::vector<Rational>> seq;
  while (!p.empty()) {
    seq.push_back(p);
    std::vector<Rational> dp;
    for (std::size_t k = 1; k < p.size(); ++k) dp.push_back(p[k] * static_cast<unsigned long>(k));
    p = std::move(dp);
  }
  return seq;
}

Rational horner(const std::vector<Rational>& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

unsigned variations_at(const std::vector<std::vector<Rational>>& seq, const Rational& t) {
  std::vector<Rational> values;
  values.reserve(seq.size());
  for (const auto& d : seq) values.push_back(horner(d, t));
  return sign_variations(values);
}

}  // namespace

unsigned budan_fourier_bound(const LogPowExpr& poly, const Interval& interval) {
  std::vector<Rational> p = poly.polynomial_coefficients();
  if (p.empty()) throw InvalidArgument("Budan-Fourier bound of the zero polynomial");
  auto seq = derivative_sequence(std::move(p));
  const unsigned degree = static_cast<unsigned>(seq.size() - 1);
  // Every derivative shares the leading sign at +inf; signs alternate at -inf.
  unsigned v_lo = interval.lo() ? variations_at(seq, *interval.lo()) : degree;
  unsigned v_hi = interval.hi() ? variations_at(seq, *interval.hi()) : 0;
  return v_lo >= v_hi ? v_lo - v_hi : 0;
}

namespace {

struct Decision {
  unsigned roots;
  std::string reason;
};

std::string stage_name(unsigned k) { return "h" + std::to_string(k); }

// Root count of a stage expression, if it can be read off directly.
std::optional<Decision> decide(const LogPowExpr& h, const Interval& iv, unsigned k,
                               const ChainOptions& opts) {
  if (h.is_zero()) return std::nullopt;
  const Rational shift = h.min_alpha();
  LogPowExpr g = shift_power(h, -shift);
  const std::string prefix = stage_name(k) + " = x^(" + to_string(shift) + ") * (" +
                             to_string(g) + ")";

  const int s = sign(g.terms().front().coeff);
  bool same_sign = std::all_of(g.terms().begin(), g.terms().end(),
                               [&](const LogPowTerm& t) { return sign(t.coeff) == s; });
  bool has_log = g.max_logpow() > 0;
  bool has_plain = std::any_of(g.terms().begin(), g.terms().end(),
                               [](const LogPowTerm& t) { return t.logpow == 0; });
  bool log_positive = !has_log || (iv.lo() && *iv.lo() >= 1);
  if (same_sign && has_plain && log_positive) {
    return Decision{0, prefix + ": every term has the same sign and is positive on " +
                           to_string(iv) + ", so no roots"};
  }
  if (!g.is_pure_power()) return std::nullopt;

  bool integral = std::all_of(g.terms().begin(), g.terms().end(),
                              [](const LogPowTerm& t) { return is_integer(t.alpha); });
  std::vector<Rational> coeffs;
  for (const auto& t : g.terms()) coeffs.push_back(t.coeff);
  const unsigned variations = sign_variations(coeffs);
  if (integral) {
    unsigned degree = static_cast<unsigned>(g.max_alpha().get_num().get_ui());
    if (opts.use_descartes && variations < degree) {
      return Decision{variations, prefix + ": " + std::to_string(variations) +
                                      " sign variations (Descartes)"};
    }
    return Decision{degree, prefix + ": polynomial of degree " + std::to_string(degree) +
                                ", at most " + std::to_string(degree) + " roots"};
  }
  // Generalized Descartes rule for real exponents.
  unsigned bound = opts.use_descartes ? variations : static_cast<unsigned>(g.size() - 1);
  return Decision{bound, prefix + ": power sum with " + std::to_string(g.size()) +
                             " terms, at most " + std::to_string(bound) + " positive roots"};
}

class ChainSearch {
 public:
  ChainSearch(const Interval& iv, const ChainOptions& opts) : iv_(iv), opts_(opts) {}

  void visit(const LogPowExpr& h, unsigned k) {
    if (best_ && k >= *best_) return;
    if (h.is_zero()) return;
    std::string key = to_json(shift_power(h, -h.min_alpha())).dump();
    if (auto it = seen_.find(key); it != seen_.end() && it->second <= k) return;
    seen_[key] = k;

    if (auto d = decide(h, iv_, k, opts_)) {
      if (!best_ || k + d->roots < *best_) {
        best_ = k + d->roots;
        best_chain_ = path_;
        best_chain_.push_back({k, d->reason});
      }
      if (d->roots <= 1) return;
    }
    if (k >= opts_.max_depth) return;

    path_.push_back({k, "roots(" + stage_name(k) + ") <= roots(" + stage_name(k + 1) +
                            ") + 1 with " + stage_name(k + 1) + " = D " + stage_name(k)});
    visit(differentiate(h), k + 1);
    path_.pop_back();

    const Rational& shift = h.min_alpha();
    if (shift != 0) {
      Rational beta = -shift;
      path_.push_back({k, "roots(" + stage_name(k) + ") <= roots(" + stage_name(k + 1) +
                              ") + 1 with " + stage_name(k + 1) + " = D(x^(" + to_string(beta) +
                              ") * " + stage_name(k) + "), x^(" + to_string(beta) +
                              ") > 0 on the interval"});
      visit(differentiate(shift_power(h, beta)), k + 1);
      path_.pop_back();
    }
  }

  ChainBound result() const { return {best_, best_chain_}; }

 private:
  const Interval& iv_;
  const ChainOptions& opts_;
  std::optional<unsigned> best_;
  std::vector<ChainStep> best_chain_;
  std::vector<ChainStep> path_;
  std::map<std::string, unsigned> seen_;
};

}  // namespace

ChainBound derivative_chain_bound(const LogPowExpr& f, const Interval& interval,
                                  const ChainOptions& options) {
  if (f.is_zero()) {
    return {std::nullopt, {{0, "f is identically zero: every point is a root"}}};
  }
  ChainSearch search(interval, options);
  search.visit(f, 0);
  ChainBound out = search.result();
  if (!out.bound) {
    out.chain = {{options.max_depth, "no decidable stage within depth " +
                                         std::to_string(options.max_depth)}};
  }
  return out;
}

AlternatingForm extract_alternating_form(std::span<const Rational> p_coeffs, unsigned N) {
  if (N < 2) throw InvalidArgument("alternating form needs N >= 2");
  if (p_coeffs.size() > N) {
    throw InvalidArgument("p must lie in Pi_{N-1}: at most " + std::to_string(N) +
                          " coefficients, got " + std::to_string(p_coeffs.size()));
  }
  const Rational x_pow_minus_n = -Rational(N);

  AlternatingForm form;
  form.power = N;
  for (unsigned j = 0; j < N; ++j) {
    LogPowExpr probe = differentiate_n(LogPowExpr::monomial(Rational(j), 1), N);
    if (probe.size() != 1 || probe.terms()[0].logpow != 0 ||
        probe.terms()[0].alpha != x_pow_minus_n + j) {
      throw VerificationError("D^" + std::to_string(N) + "(x^" + std::to_string(j) +
                              " ln x) = " + to_string(probe) + " is not a multiple of x^" +
                              std::to_string(static_cast<int>(j) - static_cast<int>(N)));
    }
    int expected_sign = ((N - 1 + j) % 2 == 0) ? 1 : -1;
    Rational c = probe.terms()[0].coeff * expected_sign;
    if (c <= 0) {
      throw VerificationError("c_" + std::to_string(j) + " = " + to_string(c) + " for N=" +
                              std::to_string(N) + " is not positive");
    }
    Rational a = j < p_coeffs.size() ? p_coeffs[j] : Rational(0);
    form.coeffs.push_back({j, expected_sign, c, a});
  }

  // The factored form must reproduce D^N(p ln x) for this particular p.
  std::vector<LogPowTerm> p_ln;
  for (std::size_t j = 0; j < p_coeffs.size(); ++j) {
    p_ln.push_back({p_coeffs[j], Rational(static_cast<long>(j)), 1});
  }
  LogPowExpr direct = differentiate_n(LogPowExpr::from_terms(std::move(p_ln)), N);
  std::vector<LogPowTerm> factored;
  for (const auto& e : form.coeffs) {
    factored.push_back({e.c * e.a * e.sign, x_pow_minus_n + e.j, 0});
  }
  LogPowExpr rebuilt = LogPowExpr::from_terms(std::move(factored));
  if (!equal(direct, rebuilt)) {
    throw VerificationError("D^" + std::to_string(N) + "(p ln x) = " + to_string(direct) +
                            " does not match the alternating form " + to_string(rebuilt));
  }
  return form;
}

namespace {

// Evaluates g(x) = x^(-min alpha) f(x), which has the sign of f on x > 0,
// together with an a-priori bound on its rounding error. Exponents are put on
// a common grid 1/L so each ln-power group is a polynomial in t = x^(1/L).
class SignEvaluator {
 public:
  explicit SignEvaluator(const LogPowExpr& f) {
    const Rational shift = f.min_alpha();
    Integer lcm = 1;
    for (const auto& t : f.terms()) {
      Rational e = t.alpha - shift;
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
      max_logpow_ = std::max(max_logpow_, t.logpow);
    }
    Rational span = (f.max_alpha() - shift) * lcm;
    horner_ = lcm.fits_ulong_p() && span <= 512;
    if (horner_) {
      lcm_ = static_cast<double>(lcm.get_ui());
      unit_ = lcm == 1;
      degree_ = static_cast<unsigned>(span.get_num().get_ui());
      groups_.assign(max_logpow_ + 1, std::vector<double>(degree_ + 1, 0.0));
      for (const auto& t : f.terms()) {
        Rational idx = (t.alpha - shift) * lcm;
        groups_[t.logpow][idx.get_num().get_ui()] = t.coeff.get_d();
      }
    } else {
      for (const auto& t : f.terms()) {
        direct_.push_back({t.coeff.get_d(), Rational(t.alpha - shift).get_d(), t.logpow});
      }
      degree_ = static_cast<unsigned>(direct_.size());
    }
    slack_ = (4.0 * degree_ + 2.0 * max_logpow_ + 8.0 + 2.0 * f.size()) * DBL_EPSILON;
  }

  // Returns +1, -1, or 0 when the sign is not resolvable.
  int sign_at(double x) const {
    const double lx = std::log(x);
    double value = 0;
    double magnitude = 0;
    if (horner_) {
      const double t = unit_ ? x : std::exp(lx / lcm_);
      double lx_pow = 1;
      for (unsigned m = 0; m <= max_logpow_; ++m) {
        const auto& g = groups_[m];
        double v = 0;
        double w = 0;
        for (auto it = g.rbegin(); it != g.rend(); ++it) {
          v = v * t + *it;
          w = w * t + std::fabs(*it);
        }
        value += v * lx_pow;
        magnitude += w * std::fabs(lx_pow);
        lx_pow *= lx;
      }
    } else {
      for (const auto& term : direct_) {
        double v = term.coeff * std::exp(term.exponent * lx);
        if (term.logpow > 0) v *= std::pow(lx, static_cast<double>(term.logpow));
        value += v;
        magnitude += std::fabs(v);
      }
    }
    if (!std::isfinite(value) || std::fabs(value) <= slack_ * magnitude) return 0;
    return value > 0 ? 1 : -1;
  }

 private:
  struct DirectTerm {
    double coeff;
    double exponent;
    unsigned logpow;
  };

  bool horner_ = true;
  bool unit_ = true;
  double lcm_ = 1;
  unsigned degree_ = 0;
  unsigned max_logpow_ = 0;
  double slack_ = 0;
  std::vector<std::vector<double>> groups_;
  std::vector<DirectTerm> direct_;
};

}  // namespace

NumericRoots numeric_count_roots(const LogPowExpr& f, const Interval& interval,
                                 const OracleOptions& options) {
  if (f.is_zero()) throw InvalidArgument("the zero expression has infinitely many roots");
  if (options.grid_points < 2) throw InvalidArgument("numeric oracle needs grid_points >= 2");
  if (!(options.horizon > 1) || !(options.tol > 0)) {
    throw InvalidArgument("numeric oracle needs horizon > 1 and tol > 0");
  }
  if (!interval.lo() || *interval.lo() < 0) {
    throw DomainError("log-power expressions are only defined for x > 0; interval " +
                      to_string(interval) + " reaches x <= 0");
  }
  const double hi = interval.hi() ? interval.hi()->get_d() : options.horizon;
  double lo = interval.lo()->get_d();
  if (lo == 0) lo = std::min(1.0 / options.horizon, hi / 2);
  if (!(hi > lo)) {
    throw InvalidArgument("oracle horizon " + std::to_string(options.horizon) +
                          " does not exceed the interval's lower end");
  }

  SignEvaluator eval(f);
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  const unsigned n = options.grid_points;

  NumericRoots out;
  double last_x = 0;
  int last_sign = 0;
  for (unsigned i = 0; i < n; ++i) {
    double x = (i == 0) ? lo
               : (i + 1 == n)
                   ? hi
                   : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / (n - 1));
    int s = eval.sign_at(x);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      double a = last_x;
      double b = x;
      for (int iter = 0; iter < 200 && b - a > options.tol; ++iter) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        int sm = eval.sign_at(mid);
        if (sm == 0) break;
        (sm == last_sign ? a : b) = mid;
      }
      out.brackets.push_back({a, b});
    }
    last_x = x;
    last_sign = s;
  }
  out.count = static_cast<unsigned>(out.brackets.size());
  return out;
}

RootCountReport count_roots(const LogPowExpr& f, const Interval& interval,
                            const ChainOptions& chain, const OracleOptions& oracle) {
  RootCountReport report;
  report.expr = f;
  report.interval = interval;
  ChainBound cb = derivative_chain_bound(f, interval, chain);
  report.bound = cb.bound;
  report.bound_chain = std::move(cb.chain);
  NumericRoots observed = numeric_count_roots(f, interval, oracle);
  report.observed = observed.count;
  report.observed_roots = std::move(observed.brackets);
  return report;
}

nlohmann::json to_json(const RootCountReport& report) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& step : report.bound_chain) {
    chain.push_back({{"order", step.order}, {"reason", step.reason}});
  }
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& b : report.observed_roots) roots.push_back({b.lo, b.hi});
  return {{"expr", to_json(report.expr)},
          {"expr_text", to_string(report.expr)},
          {"interval", to_json(report.interval)},
          {"bound", report.bound ? nlohmann::json(*report.bound) : nlohmann::json("unknown")},
          {"bound_chain", chain},
          {"observed", report.observed},
          {"observed_roots", roots},
          {"consistent", report.consistent()}};
}

nlohmann::json to_json(const AlternatingForm& form) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& e : form.coeffs) {
    coeffs.push_back(
        {{"j", e.j}, {"sign", e.sign}, {"c", to_string(e.c)}, {"a", to_string(e.a)}});
  }
  return {{"power", form.power}, {"coeffs", coeffs}};
}

}  // namespace altkit
