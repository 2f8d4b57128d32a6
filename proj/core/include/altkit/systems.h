#pragma once

// Named function families and their theoretical root-count bounds.
//
//   power       {x^r, x^{r+1}, ..., x^{r+n-1}}                   on (0, inf)
//   logpoly     {1, ..., x^{n-1}, ln x, ..., x^{n-1} ln x}       on (1, inf)
//   mixed       {1, ..., x^m, x^i ln x, ..., x^{i+n} ln x}       on (1, inf)
//   general_ln  {1, ..., x^m, ln x, ..., x^n ln x}, m > n        on (1, inf)
//   custom      any list of log-power expressions                on (0, inf)
//
// Member coefficient vectors always list the polynomial part first
// (ascending degree), then the ln part (ascending degree).

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "altkit/symexpr.h"

namespace altkit {

struct PowerSystem {
  Rational r;
  unsigned n = 1;
};

struct LogPolySystem {
  unsigned n = 1;
};

struct MixedSystem {
  unsigned i = 0;
  unsigned m = 0;
  unsigned n = 0;
};

struct GeneralLnSystem {
  unsigned m = 1;
  unsigned n = 0;
};

struct CustomSystem {
  std::vector<LogPowExpr> basis;
};

using SystemKind =
    std::variant<PowerSystem, LogPolySystem, MixedSystem, GeneralLnSystem, CustomSystem>;

class FunctionSystemSpec {
 public:
  // Validates parameters. A missing interval selects the family default;
  // a supplied interval must lie inside that default.
  explicit FunctionSystemSpec(SystemKind kind, std::optional<Interval> interval = std::nullopt);

  static FunctionSystemSpec power(const Rational& r, unsigned n);
  static FunctionSystemSpec log_poly(unsigned n);
  static FunctionSystemSpec mixed(unsigned i, unsigned m, unsigned n);
  static FunctionSystemSpec general_ln(unsigned m, unsigned n);
  static FunctionSystemSpec custom(std::vector<LogPowExpr> basis,
                                   std::optional<Interval> interval = std::nullopt);

  const SystemKind& kind() const { return kind_; }
  const Interval& interval() const { return interval_; }
  // "power", "logpoly", "mixed", "general_ln" or "custom".
  std::string kind_name() const;
  // Number of basis functions.
  std::size_t dimension() const;

  FunctionSystemSpec with_interval(const Interval& iv) const;

 private:
  SystemKind kind_;
  Interval interval_;
};

Interval default_interval(const SystemKind& kind);

std::vector<LogPowExpr> basis(const FunctionSystemSpec& spec);

// Upper bound on the number of distinct roots of any nonzero member on the
// spec's interval; nullopt where no bound is known (custom systems, and mixed
// systems with m >= n+i other than the i = 0, m > n case).
std::optional<unsigned> root_bound(const FunctionSystemSpec& spec);
// One-line justification of root_bound, e.g. for CLI output.
std::string root_bound_reason(const FunctionSystemSpec& spec);

// sum_j coeffs[j] * basis_j. Throws InvalidArgument on a length mismatch.
LogPowExpr member(const FunctionSystemSpec& spec, std::span<const Rational> coeffs);

// x^r * prod_j (x - roots[j]) for a power system with n-1 distinct roots in
// its interval: a member attaining the bound n-1.
LogPowExpr sharpness_witness(const FunctionSystemSpec& spec, std::span<const Rational> roots);

// {"kind":"power","r":"1/2","n":4}, {"kind":"logpoly","n":3},
// {"kind":"mixed","i":1,"m":2,"n":2}, {"kind":"general_ln","m":3,"n":1},
// {"kind":"custom","basis":[[...], ...]}, each with optional "interval".
nlohmann::json to_json(const FunctionSystemSpec& spec);
FunctionSystemSpec spec_from_json(const nlohmann::json& j);

}  // namespace altkit
