#include "altkit/symexpr.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "altkit/errors.h"

namespace altkit {

namespace {

bool key_less(const LogPowTerm& a, const LogPowTerm& b) {
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.logpow < b.logpow;
}

bool same_key(const LogPowTerm& a, const LogPowTerm& b) {
  return a.alpha == b.alpha && a.logpow == b.logpow;
}

std::string exponent_string(const Rational& alpha) {
  if (is_integer(alpha) && alpha >= 0) return to_string(alpha);
  return "(" + to_string(alpha) + ")";
}

}  // namespace

LogPowExpr LogPowExpr::from_terms(std::vector<LogPowTerm> terms) {
  for (auto& t : terms) {
    t.coeff.canonicalize();
    t.alpha.canonicalize();
  }
  std::sort(terms.begin(), terms.end(), key_less);
  std::vector<LogPowTerm> merged;
  merged.reserve(terms.size());
  for (auto& t : terms) {
    if (!merged.empty() && same_key(merged.back(), t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const LogPowTerm& t) { return t.coeff == 0; });
  return LogPowExpr(std::move(merged));
}

LogPowExpr LogPowExpr::constant(const Rational& c) { return monomial(0, 0, c); }

LogPowExpr LogPowExpr::monomial(const Rational& alpha, unsigned logpow, const Rational& coeff) {
  if (coeff == 0) return LogPowExpr();
  return from_terms({LogPowTerm{coeff, alpha, logpow}});
}

LogPowExpr LogPowExpr::polynomial(std::span<const Rational> ascending) {
  std::vector<LogPowTerm> terms;
  terms.reserve(ascending.size());
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    terms.push_back({ascending[k], Rational(static_cast<long>(k)), 0});
  }
  return from_terms(std::move(terms));
}

bool LogPowExpr::is_pure_power() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const LogPowTerm& t) { return t.logpow == 0; });
}

bool LogPowExpr::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const LogPowTerm& t) {
    return t.logpow == 0 && is_integer(t.alpha) && t.alpha >= 0;
  });
}

std::vector<Rational> LogPowExpr::polynomial_coefficients() const {
  if (!is_polynomial()) {
    throw InvalidArgument("expression is not a polynomial: " + to_string(*this));
  }
  if (terms_.empty()) return {};
  std::vector<Rational> out(terms_.back().alpha.get_num().get_ui() + 1, Rational(0));
  for (const auto& t : terms_) out[t.alpha.get_num().get_ui()] = t.coeff;
  return out;
}

unsigned LogPowExpr::max_logpow() const {
  unsigned m = 0;
  for (const auto& t : terms_) m = std::max(m, t.logpow);
  return m;
}

const Rational& LogPowExpr::min_alpha() const {
  if (terms_.empty()) throw InvalidArgument("min_alpha of the zero expression");
  return terms_.front().alpha;
}

const Rational& LogPowExpr::max_alpha() const {
  if (terms_.empty()) throw InvalidArgument("max_alpha of the zero expression");
  return terms_.back().alpha;
}

LogPowExpr add(const LogPowExpr& a, const LogPowExpr& b) {
  std::vector<LogPowTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return LogPowExpr::from_terms(std::move(terms));
}

LogPowExpr scale(const LogPowExpr& a, const Rational& c) {
  if (c == 0) return LogPowExpr();
  std::vector<LogPowTerm> terms = a.terms();
  for (auto& t : terms) t.coeff *= c;
  return LogPowExpr::from_terms(std::move(terms));
}

LogPowExpr multiply(const LogPowExpr& a, const LogPowExpr& b) {
  std::vector<LogPowTerm> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) {
      terms.push_back({s.coeff * t.coeff, s.alpha + t.alpha, s.logpow + t.logpow});
    }
  }
  return LogPowExpr::from_terms(std::move(terms));
}

LogPowExpr shift_power(const LogPowExpr& a, const Rational& beta) {
  std::vector<LogPowTerm> terms = a.terms();
  for (auto& t : terms) t.alpha += beta;
  return LogPowExpr::from_terms(std::move(terms));
}

// D(c x^a ln^m x) = c*a x^{a-1} ln^m x + c*m x^{a-1} ln^{m-1} x
LogPowExpr differentiate(const LogPowExpr& f) {
  std::vector<LogPowTerm> terms;
  terms.reserve(2 * f.size());
  for (const auto& t : f.terms()) {
    Rational shifted = t.alpha - 1;
    if (t.alpha != 0) terms.push_back({t.coeff * t.alpha, shifted, t.logpow});
    if (t.logpow > 0) terms.push_back({t.coeff * t.logpow, shifted, t.logpow - 1});
  }
  return LogPowExpr::from_terms(std::move(terms));
}

LogPowExpr differentiate_n(const LogPowExpr& f, unsigned n) {
  LogPowExpr out = f;
  for (unsigned i = 0; i < n && !out.is_zero(); ++i) out = differentiate(out);
  return out;
}

std::optional<Rational> evaluate_exact(const LogPowExpr& f, const Rational& x) {
  if (!f.is_polynomial()) return std::nullopt;
  Rational acc = 0;
  std::vector<Rational> coeffs = f.polynomial_coefficients();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double evaluate(const LogPowExpr& f, double x) {
  if (!std::isfinite(x) || x <= 0) {
    throw DomainError("log-power expressions are defined for x > 0 only, got " +
                      std::to_string(x));
  }
  if (f.is_polynomial()) return evaluate_exact(f, rational_from_double(x))->get_d();
  const double lx = std::log(x);
  double sum = 0;
  for (const auto& t : f.terms()) {
    double v = t.coeff.get_d() * std::pow(x, t.alpha.get_d());
    if (t.logpow > 0) v *= std::pow(lx, static_cast<double>(t.logpow));
    sum += v;
  }
  return sum;
}

bool equal(const LogPowExpr& a, const LogPowExpr& b) { return a == b; }

std::string to_string(const LogPowExpr& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const LogPowTerm& t = *it;
    Rational mag = abs(t.coeff);
    if (first) {
      if (t.coeff < 0) os << "-";
    } else {
      os << (t.coeff < 0 ? " - " : " + ");
    }
    first = false;

    std::vector<std::string> factors;
    bool bare = t.alpha == 0 && t.logpow == 0;
    if (mag != 1 || bare) factors.push_back(to_string(mag));
    if (t.alpha == 1) {
      factors.push_back("x");
    } else if (t.alpha != 0) {
      factors.push_back("x^" + exponent_string(t.alpha));
    }
    if (t.logpow == 1) {
      factors.push_back("ln(x)");
    } else if (t.logpow > 1) {
      factors.push_back("ln(x)^" + std::to_string(t.logpow));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

nlohmann::json to_json(const LogPowExpr& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : f.terms()) {
    arr.push_back({{"coeff", to_string(t.coeff)},
                   {"alpha", to_string(t.alpha)},
                   {"logpow", t.logpow}});
  }
  return arr;
}

namespace {

Rational rational_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("term is missing '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  throw InvalidArgument(std::string("'") + key + "' must be a \"p/q\" string or an integer");
}

}  // namespace

LogPowExpr expr_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("log-power expression must be a JSON array of terms");
  std::vector<LogPowTerm> terms;
  for (const auto& item : j) {
    if (!item.is_object()) throw InvalidArgument("each term must be a JSON object");
    unsigned logpow = 0;
    if (item.contains("logpow")) {
      const auto& lp = item.at("logpow");
      if (!lp.is_number_integer() || lp.get<long long>() < 0) {
        throw InvalidArgument("'logpow' must be a nonnegative integer");
      }
      logpow = static_cast<unsigned>(lp.get<long long>());
    }
    terms.push_back({rational_field(item, "coeff"), rational_field(item, "alpha"), logpow});
  }
  return LogPowExpr::from_terms(std::move(terms));
}

Interval::Interval(std::optional<Rational> lo, std::optional<Rational> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ && hi_ && !(*lo_ < *hi_)) {
    throw InvalidArgument("interval requires lo < hi, got (" + to_string(*lo_) + ", " +
                          to_string(*hi_) + ")");
  }
}

bool Interval::contains(const Rational& x) const {
  return (!lo_ || *lo_ < x) && (!hi_ || x < *hi_);
}

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  if (std::isinf(x)) return false;
  return contains(rational_from_double(x));
}

bool Interval::is_subset_of(const Interval& other) const {
  bool lo_ok = !other.lo_ || (lo_ && *lo_ >= *other.lo_);
  bool hi_ok = !other.hi_ || (hi_ && *hi_ <= *other.hi_);
  return lo_ok && hi_ok;
}

std::string to_string(const Interval& iv) {
  return "(" + (iv.lo() ? to_string(*iv.lo()) : std::string("-inf")) + ", " +
         (iv.hi() ? to_string(*iv.hi()) : std::string("inf")) + ")";
}

nlohmann::json to_json(const Interval& iv) {
  return nlohmann::json::array({iv.lo() ? to_string(*iv.lo()) : std::string("-inf"),
                                iv.hi() ? to_string(*iv.hi()) : std::string("inf")});
}

Interval interval_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw InvalidArgument("interval must be a two-element array [lo, hi]");
  }
  auto endpoint = [](const nlohmann::json& e, bool upper) -> std::optional<Rational> {
    std::string s = e.is_string() ? e.get<std::string>() : e.dump();
    if (s == "inf" || s == "+inf" || s == "-inf") {
      bool neg = s == "-inf";
      if (neg == upper) throw InvalidArgument("infinite endpoint on the wrong side: " + s);
      return std::nullopt;
    }
    return parse_rational(s);
  };
  return Interval(endpoint(j.at(0), false), endpoint(j.at(1), true));
}

}  // namespace altkit
