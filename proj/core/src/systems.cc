#include "altkit/systems.h"

#include <algorithm>
#include <set>

#include "altkit/errors.h"

namespace altkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

LogPowExpr x_pow(long k, unsigned logpow = 0) { return LogPowExpr::monomial(Rational(k), logpow); }

void validate(const SystemKind& kind) {
  std::visit(Overloaded{
                 [](const PowerSystem& s) {
                   if (s.n < 1) throw InvalidArgument("power system needs n >= 1");
                 },
                 [](const LogPolySystem& s) {
                   if (s.n < 1) throw InvalidArgument("logpoly system needs n >= 1");
                 },
                 [](const MixedSystem&) {},
                 [](const GeneralLnSystem& s) {
                   if (s.m <= s.n) {
                     throw InvalidArgument("general_ln system needs m > n, got m=" +
                                           std::to_string(s.m) + ", n=" + std::to_string(s.n));
                   }
                 },
                 [](const CustomSystem& s) {
                   if (s.basis.empty()) throw InvalidArgument("custom system needs a nonempty basis");
                 },
             },
             kind);
}

unsigned json_uint(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("spec is missing '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 100000) {
    throw InvalidArgument(std::string("'") + key + "' must be a nonnegative integer");
  }
  return static_cast<unsigned>(v.get<long long>());
}

Rational json_rational(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("spec is missing '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  throw InvalidArgument(std::string("'") + key + "' must be a \"p/q\" string or an integer");
}

}  // namespace

Interval default_interval(const SystemKind& kind) {
  if (std::holds_alternative<PowerSystem>(kind) || std::holds_alternative<CustomSystem>(kind)) {
    return Interval::positive_reals();
  }
  return Interval::above_one();
}

FunctionSystemSpec::FunctionSystemSpec(SystemKind kind, std::optional<Interval> interval)
    : kind_(std::move(kind)), interval_(default_interval(kind_)) {
  validate(kind_);
  if (interval) {
    if (!interval->is_subset_of(interval_)) {
      throw InvalidArgument("interval " + to_string(*interval) + " is not inside the " +
                            kind_name() + " domain " + to_string(interval_));
    }
    interval_ = *interval;
  }
}

FunctionSystemSpec FunctionSystemSpec::power(const Rational& r, unsigned n) {
  return FunctionSystemSpec(PowerSystem{r, n});
}
FunctionSystemSpec FunctionSystemSpec::log_poly(unsigned n) {
  return FunctionSystemSpec(LogPolySystem{n});
}
FunctionSystemSpec FunctionSystemSpec::mixed(unsigned i, unsigned m, unsigned n) {
  return FunctionSystemSpec(MixedSystem{i, m, n});
}
FunctionSystemSpec FunctionSystemSpec::general_ln(unsigned m, unsigned n) {
  return FunctionSystemSpec(GeneralLnSystem{m, n});
}
FunctionSystemSpec FunctionSystemSpec::custom(std::vector<LogPowExpr> basis,
                                              std::optional<Interval> interval) {
  return FunctionSystemSpec(CustomSystem{std::move(basis)}, std::move(interval));
}

std::string FunctionSystemSpec::kind_name() const {
  return std::visit(Overloaded{
                        [](const PowerSystem&) { return std::string("power"); },
                        [](const LogPolySystem&) { return std::string("logpoly"); },
                        [](const MixedSystem&) { return std::string("mixed"); },
                        [](const GeneralLnSystem&) { return std::string("general_ln"); },
                        [](const CustomSystem&) { return std::string("custom"); },
                    },
                    kind_);
}

std::size_t FunctionSystemSpec::dimension() const {
  return std::visit(Overloaded{
                        [](const PowerSystem& s) -> std::size_t { return s.n; },
                        [](const LogPolySystem& s) -> std::size_t { return 2 * s.n; },
                        [](const MixedSystem& s) -> std::size_t { return s.m + s.n + 2; },
                        [](const GeneralLnSystem& s) -> std::size_t { return s.m + s.n + 2; },
                        [](const CustomSystem& s) -> std::size_t { return s.basis.size(); },
                    },
                    kind_);
}

FunctionSystemSpec FunctionSystemSpec::with_interval(const Interval& iv) const {
  return FunctionSystemSpec(kind_, iv);
}

std::vector<LogPowExpr> basis(const FunctionSystemSpec& spec) {
  std::vector<LogPowExpr> out;
  out.reserve(spec.dimension());
  std::visit(Overloaded{
                 [&](const PowerSystem& s) {
                   for (unsigned j = 0; j < s.n; ++j) {
                     out.push_back(LogPowExpr::monomial(s.r + j));
                   }
                 },
                 [&](const LogPolySystem& s) {
                   for (unsigned k = 0; k < s.n; ++k) out.push_back(x_pow(k));
                   for (unsigned k = 0; k < s.n; ++k) out.push_back(x_pow(k, 1));
                 },
                 [&](const MixedSystem& s) {
                   for (unsigned k = 0; k <= s.m; ++k) out.push_back(x_pow(k));
                   for (unsigned k = 0; k <= s.n; ++k) out.push_back(x_pow(s.i + k, 1));
                 },
                 [&](const GeneralLnSystem& s) {
                   for (unsigned k = 0; k <= s.m; ++k) out.push_back(x_pow(k));
                   for (unsigned k = 0; k <= s.n; ++k) out.push_back(x_pow(k, 1));
                 },
                 [&](const CustomSystem& s) { out = s.basis; },
             },
             spec.kind());
  return out;
}

std::optional<unsigned> root_bound(const FunctionSystemSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PowerSystem& s) -> std::optional<unsigned> { return s.n - 1; },
          [](const LogPolySystem& s) -> std::optional<unsigned> { return 2 * s.n - 1; },
          [](const MixedSystem& s) -> std::optional<unsigned> {
            if (s.m < s.n + s.i) return 2 * s.n + s.i;
            if (s.i == 0 && s.m > s.n) return s.m + s.n + 1;
            return std::nullopt;
          },
          [](const GeneralLnSystem& s) -> std::optional<unsigned> { return s.m + s.n + 1; },
          [](const CustomSystem&) -> std::optional<unsigned> { return std::nullopt; },
      },
      spec.kind());
}

std::string root_bound_reason(const FunctionSystemSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PowerSystem&) -> std::string {
            return "power system: f = x^r * (polynomial of degree <= n-1), so at most n-1 roots";
          },
          [](const LogPolySystem&) -> std::string {
            return "logpoly system: D^n f = x^-n * (alternating-coefficient polynomial of degree "
                   "<= n-1); n further Rolle steps give at most 2n-1 roots";
          },
          [](const MixedSystem& s) -> std::string {
            if (s.m < s.n + s.i) {
              return "mixed system with m < n+i: D^(n+i) f = x^-n * G with D^n G of constant "
                     "sign on (1, inf), so at most 2n+i roots";
            }
            if (s.i == 0 && s.m > s.n) {
              return "mixed system with i = 0, m > n: ln x is (n+1)-compatible with Pi_n of "
                     "degree n, so at most m+n+1 roots";
            }
            return "mixed system with m >= n+i: no bound known";
          },
          [](const GeneralLnSystem&) -> std::string {
            return "general_ln system (m > n): ln x is (n+1)-compatible with Pi_n of degree n, "
                   "so at most m+n+1 roots";
          },
          [](const CustomSystem&) -> std::string {
            return "custom system: no family bound; use derivative_chain_bound on members";
          },
      },
      spec.kind());
}

LogPowExpr member(const FunctionSystemSpec& spec, std::span<const Rational> coeffs) {
  std::vector<LogPowExpr> b = basis(spec);
  if (coeffs.size() != b.size()) {
    throw InvalidArgument("expected " + std::to_string(b.size()) + " coefficients for a " +
                          spec.kind_name() + " system, got " + std::to_string(coeffs.size()));
  }
  std::vector<LogPowTerm> terms;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& t : b[j].terms()) terms.push_back({t.coeff * coeffs[j], t.alpha, t.logpow});
  }
  return LogPowExpr::from_terms(std::move(terms));
}

LogPowExpr sharpness_witness(const FunctionSystemSpec& spec, std::span<const Rational> roots) {
  const auto* power = std::get_if<PowerSystem>(&spec.kind());
  if (power == nullptr) {
    throw InvalidArgument("sharpness_witness needs a power system, got " + spec.kind_name());
  }
  if (roots.size() + 1 != power->n) {
    throw InvalidArgument("power system with n=" + std::to_string(power->n) + " needs " +
                          std::to_string(power->n - 1) + " roots, got " +
                          std::to_string(roots.size()));
  }
  std::set<Rational> seen;
  for (const auto& r : roots) {
    if (!spec.interval().contains(r)) {
      throw InvalidArgument("root " + to_string(r) + " lies outside " + to_string(spec.interval()));
    }
    if (!seen.insert(r).second) throw InvalidArgument("duplicate root " + to_string(r));
  }
  LogPowExpr f = LogPowExpr::monomial(power->r);
  for (const auto& r : roots) {
    f = f * (LogPowExpr::monomial(1) - LogPowExpr::constant(r));
  }
  return f;
}

nlohmann::json to_json(const FunctionSystemSpec& spec) {
  nlohmann::json j = std::visit(
      Overloaded{
          [](const PowerSystem& s) -> nlohmann::json {
            return {{"kind", "power"}, {"r", to_string(s.r)}, {"n", s.n}};
          },
          [](const LogPolySystem& s) -> nlohmann::json { return {{"kind", "logpoly"}, {"n", s.n}}; },
          [](const MixedSystem& s) -> nlohmann::json {
            return {{"kind", "mixed"}, {"i", s.i}, {"m", s.m}, {"n", s.n}};
          },
          [](const GeneralLnSystem& s) -> nlohmann::json {
            return {{"kind", "general_ln"}, {"m", s.m}, {"n", s.n}};
          },
          [](const CustomSystem& s) -> nlohmann::json {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& f : s.basis) arr.push_back(to_json(f));
            return {{"kind", "custom"}, {"basis", arr}};
          },
      },
      spec.kind());
  j["interval"] = to_json(spec.interval());
  return j;
}

FunctionSystemSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InvalidArgument("system spec must be an object with a string 'kind'");
  }
  std::optional<Interval> iv;
  if (j.contains("interval")) iv = interval_from_json(j.at("interval"));

  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    return FunctionSystemSpec(PowerSystem{json_rational(j, "r"), json_uint(j, "n")}, iv);
  }
  if (kind == "logpoly") return FunctionSystemSpec(LogPolySystem{json_uint(j, "n")}, iv);
  if (kind == "mixed") {
    return FunctionSystemSpec(MixedSystem{json_uint(j, "i"), json_uint(j, "m"), json_uint(j, "n")},
                              iv);
  }
  if (kind == "general_ln") {
    return FunctionSystemSpec(GeneralLnSystem{json_uint(j, "m"), json_uint(j, "n")}, iv);
  }
  if (kind == "custom") {
    if (!j.contains("basis") || !j.at("basis").is_array()) {
      throw InvalidArgument("custom spec needs a 'basis' array");
    }
    std::vector<LogPowExpr> b;
    for (const auto& f : j.at("basis")) b.push_back(expr_from_json(f));
    return FunctionSystemSpec(CustomSystem{std::move(b)}, iv);
  }
  throw InvalidArgument("unknown system kind '" + kind + "'");
}

}  // namespace altkit
