#include "altkit/alternant.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "altkit/errors.h"

namespace altkit {

struct LuCache {
  std::once_flag once;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

struct AlternantAccess {
  static const std::vector<double>& values(const AlternantMatrix& a) { return a.values_; }
  static const std::vector<Rational>& exact_values(const AlternantMatrix& a) {
    return a.exact_values_;
  }

  static const Eigen::PartialPivLU<Eigen::MatrixXd>& lu(const AlternantMatrix& a) {
    std::call_once(a.lu_->once, [&] {
      const auto n = static_cast<Eigen::Index>(a.size());
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a.entry(i, j);
      }
      a.lu_->lu.compute(m);
    });
    return a.lu_->lu;
  }

  static void fill(AlternantMatrix& a) {
    std::vector<LogPowExpr> b = basis(a.system_);
    const std::size_t n = a.size();
    a.exact_ = std::all_of(b.begin(), b.end(), [](const LogPowExpr& f) { return f.is_polynomial(); });
    a.values_.resize(n * n);
    if (a.exact_) a.exact_values_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = a.nodes_[i].get_d();
      for (std::size_t j = 0; j < n; ++j) {
        if (a.exact_) {
          a.exact_values_[i * n + j] = *evaluate_exact(b[j], a.nodes_[i]);
          a.values_[i * n + j] = a.exact_values_[i * n + j].get_d();
        } else {
          a.values_[i * n + j] = evaluate(b[j], x);
        }
      }
    }
    a.lu_ = std::make_shared<LuCache>();
  }
};

namespace {

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix exact_rows(const AlternantMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a.exact_entry(i, j);
  }
  return m;
}

// Fraction-free elimination; every division is exact.
Rational bareiss_determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  Rational prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Gauss-Jordan with exact pivots; nullopt when singular.
std::optional<std::vector<Rational>> exact_solve(RationalMatrix m, std::vector<Rational> rhs) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t r = k;
    while (r < n && m[r][k] == 0) ++r;
    if (r == n) return std::nullopt;
    std::swap(m[k], m[r]);
    std::swap(rhs[k], rhs[r]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      Rational factor = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= factor * m[k][j];
      rhs[i] -= factor * rhs[k];
    }
  }
  for (std::size_t k = 0; k < n; ++k) rhs[k] /= m[k][k];
  return rhs;
}

}  // namespace

AlternantMatrix build_matrix_unchecked(const FunctionSystemSpec& spec,
                                       std::span<const Rational> nodes) {
  if (nodes.size() != spec.dimension()) {
    throw InvalidArgument("a " + spec.kind_name() + " system of dimension " +
                          std::to_string(spec.dimension()) + " needs that many nodes, got " +
                          std::to_string(nodes.size()));
  }
  std::vector<Rational> xs(nodes.begin(), nodes.end());
  for (auto& x : xs) x.canonicalize();
  AlternantMatrix a(spec, std::move(xs));
  AlternantAccess::fill(a);
  return a;
}

AlternantMatrix build_matrix(const FunctionSystemSpec& spec, std::span<const Rational> raw) {
  std::vector<Rational> nodes(raw.begin(), raw.end());
  for (auto& x : nodes) x.canonicalize();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!spec.interval().contains(nodes[i])) {
      throw InvalidArgument("node " + to_string(nodes[i]) + " lies outside " +
                            to_string(spec.interval()));
    }
    if (i > 0 && nodes[i] == nodes[i - 1]) {
      throw InvalidArgument("duplicate node " + to_string(nodes[i]));
    }
    if (i > 0 && nodes[i] < nodes[i - 1]) {
      throw InvalidArgument("nodes must be strictly increasing");
    }
  }
  return build_matrix_unchecked(spec, nodes);
}

Determinant determinant(const AlternantMatrix& a) {
  Determinant d;
  if (a.exact()) {
    d.exact = bareiss_determinant(exact_rows(a));
    d.value = d.exact->get_d();
  } else {
    d.value = a.size() == 0 ? 1.0 : AlternantAccess::lu(a).determinant();
  }
  return d;
}

namespace {

// For a basis x^beta * p_j with polynomial p_j, row i of A is x_i^beta > 0
// times row i of [p_j(x_i)], so the latter decides invertibility exactly.
std::optional<Rational> factored_exact_determinant(const AlternantMatrix& a) {
  std::vector<LogPowExpr> b = basis(a.system());
  std::optional<Rational> beta;
  for (const auto& f : b) {
    if (f.is_zero()) return Rational(0);
    if (!f.is_pure_power()) return std::nullopt;
    if (!beta || f.min_alpha() < *beta) beta = f.min_alpha();
  }
  if (!beta) return std::nullopt;
  const std::size_t n = a.size();
  RationalMatrix m(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    LogPowExpr p = shift_power(b[j], -*beta);
    if (!p.is_polynomial()) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) m[i][j] = *evaluate_exact(p, a.nodes()[i]);
  }
  return bareiss_determinant(std::move(m));
}

}  // namespace

InvertibilityVerdict is_invertible(const AlternantMatrix& a, double rel_threshold) {
  InvertibilityVerdict v;
  v.determinant = determinant(a);
  if (a.exact()) {
    v.method = "exact";
    v.invertible = *v.determinant.exact != 0;
    return v;
  }
  if (auto d = factored_exact_determinant(a)) {
    v.method = "exact";
    v.invertible = *d != 0;
    if (v.invertible) {
      double rcond = AlternantAccess::lu(a).rcond();
      if (rcond > 0) v.condition_estimate = 1.0 / rcond;
    }
    return v;
  }
  v.method = "partial-pivot-LU";
  v.threshold = rel_threshold;
  const std::size_t n = a.size();
  const auto& lu = AlternantAccess::lu(a);
  // Compare in log space: both sides easily leave double range for n ~ 10.
  double log_det = 0;
  double log_scale = 0;
  bool zero = false;
  for (std::size_t i = 0; i < n; ++i) {
    double u = std::fabs(lu.matrixLU()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    if (u == 0 || !std::isfinite(u)) zero = true;
    if (!zero) log_det += std::log(u);
    double row_max = 0;
    for (std::size_t j = 0; j < n; ++j) row_max = std::max(row_max, std::fabs(a.entry(i, j)));
    if (row_max == 0) zero = true;
    if (!zero) log_scale += std::log(row_max);
  }
  v.row_scale = std::exp(log_scale);
  v.invertible = !zero && log_det > std::log(rel_threshold) + log_scale;
  if (!zero) {
    double rcond = lu.rcond();
    if (rcond > 0) v.condition_estimate = 1.0 / rcond;
  }
  return v;
}

Interpolant solve_interpolation(const FunctionSystemSpec& spec, std::span<const Rational> nodes,
                                std::span<const Rational> values, double rel_threshold) {
  AlternantMatrix a = build_matrix(spec, nodes);
  if (values.size() != nodes.size()) {
    throw InvalidArgument("got " + std::to_string(values.size()) + " values for " +
                          std::to_string(nodes.size()) + " nodes");
  }
  const std::size_t n = a.size();
  Interpolant out;
  if (a.exact()) {
    auto sol = exact_solve(exact_rows(a), std::vector<Rational>(values.begin(), values.end()));
    if (!sol) throw SingularMatrix("alternant matrix is exactly singular");
    out.exact = true;
    out.expr = member(spec, *sol);
    for (const auto& c : *sol) out.coeffs.push_back(c.get_d());
    out.exact_coeffs = std::move(sol);
    out.residual = 0;
    return out;
  }

  InvertibilityVerdict verdict = is_invertible(a, rel_threshold);
  if (!verdict.invertible) {
    std::ostringstream msg;
    msg << "alternant matrix is singular to relative threshold " << rel_threshold;
    throw SingularMatrix(msg.str());
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd rhs(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    rhs(i) = values[i].get_d();
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = a.entry(i, j);
  }
  const auto& lu = AlternantAccess::lu(a);
  Eigen::VectorXd sol = lu.solve(rhs);
  sol += lu.solve(rhs - m * sol);  // one step of iterative refinement
  out.residual = (m * sol - rhs).lpNorm<Eigen::Infinity>();

  std::vector<Rational> coeffs;
  for (Eigen::Index j = 0; j < dim; ++j) {
    out.coeffs.push_back(sol(j));
    coeffs.push_back(rational_from_double(sol(j)));
  }
  out.expr = member(spec, coeffs);
  return out;
}

nlohmann::json to_json(const AlternantMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.exact()) {
        row.push_back(to_string(a.exact_entry(i, j)));
      } else {
        row.push_back(a.entry(i, j));
      }
    }
    rows.push_back(row);
  }
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& x : a.nodes()) nodes.push_back(to_string(x));
  return {{"system", to_json(a.system())}, {"nodes", nodes}, {"exact", a.exact()},
          {"entries", rows}};
}

nlohmann::json to_json(const Determinant& d) {
  nlohmann::json j = {{"value", d.value}};
  if (d.exact) j["exact"] = to_string(*d.exact);
  return j;
}

nlohmann::json to_json(const InvertibilityVerdict& v) {
  nlohmann::json j = {{"invertible", v.invertible},
                      {"determinant", to_json(v.determinant)},
                      {"method", v.method}};
  if (v.method != "exact") {
    j["threshold"] = v.threshold;
    j["row_scale"] = v.row_scale;
  }
  j["condition_estimate"] =
      v.condition_estimate ? nlohmann::json(*v.condition_estimate) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const Interpolant& p) {
  nlohmann::json j = {{"coeffs", p.coeffs},
                      {"expr", to_json(p.expr)},
                      {"expr_text", to_string(p.expr)},
                      {"residual", p.residual},
                      {"exact", p.exact}};
  if (p.exact_coeffs) {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& c : *p.exact_coeffs) ex.push_back(to_string(c));
    j["exact_coeffs"] = ex;
  }
  return j;
}

std::string to_csv(const AlternantMatrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << "node";
  for (std::size_t j = 0; j < a.size(); ++j) os << ",g" << j;
  os << "\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << to_string(a.nodes()[i]);
    for (std::size_t j = 0; j < a.size(); ++j) {
      os << ",";
      if (a.exact()) {
        os << to_string(a.exact_entry(i, j));
      } else {
        os << a.entry(i, j);
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace altkit
