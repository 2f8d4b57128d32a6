#pragma once

// Alternant matrices A(G, X) = [g_j(x_i)]: construction, determinants,
// invertibility verdicts and interpolation solves.

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "altkit/systems.h"

namespace altkit {

struct LuCache;

struct Determinant {
  double value = 0;
  // Set when the matrix was assembled exactly.
  std::optional<Rational> exact;
};

struct InvertibilityVerdict {
  bool invertible = false;
  Determinant determinant;
  // Reciprocal of the LU-based 1-norm reciprocal-condition estimate.
  std::optional<double> condition_estimate;
  std::string method;  // "exact" or "partial-pivot-LU"
  // Float path only: invertible iff |det| > threshold * row_scale.
  double threshold = 0;
  double row_scale = 0;
};

class AlternantMatrix {
 public:
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Rational>& nodes() const { return nodes_; }
  const FunctionSystemSpec& system() const { return system_; }
  // True when every basis function is a polynomial with nonnegative integer
  // exponents, in which case entries are exact rationals.
  bool exact() const { return exact_; }

  double entry(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  // Requires exact().
  const Rational& exact_entry(std::size_t i, std::size_t j) const {
    return exact_values_[i * size() + j];
  }

 private:
  friend AlternantMatrix build_matrix_unchecked(const FunctionSystemSpec&,
                                                std::span<const Rational>);
  friend struct AlternantAccess;

  AlternantMatrix(FunctionSystemSpec system, std::vector<Rational> nodes)
      : system_(std::move(system)), nodes_(std::move(nodes)) {}

  FunctionSystemSpec system_;
  std::vector<Rational> nodes_;
  bool exact_ = false;
  std::vector<double> values_;
  std::vector<Rational> exact_values_;
  // LU factorization, computed on first use and shared between copies.
  std::shared_ptr<LuCache> lu_;
};

// Rejects repeated or unsorted nodes, nodes outside the system interval and a
// node count different from the system dimension.
AlternantMatrix build_matrix(const FunctionSystemSpec& spec, std::span<const Rational> nodes);
// Only checks the node count; for deliberately degenerate test matrices.
AlternantMatrix build_matrix_unchecked(const FunctionSystemSpec& spec,
                                       std::span<const Rational> nodes);

// Bareiss elimination on the exact path; partial-pivot LU otherwise.
Determinant determinant(const AlternantMatrix& a);

InvertibilityVerdict is_invertible(const AlternantMatrix& a, double rel_threshold = 1e-10);

struct Interpolant {
  std::vector<double> coeffs;
  std::optional<std::vector<Rational>> exact_coeffs;
  LogPowExpr expr;
  // max_i |(A a - v)_i|
  double residual = 0;
  bool exact = false;
};

// Solves A(G, X) a = values and returns the member with coefficients a.
// Throws SingularMatrix when the matrix fails is_invertible(rel_threshold).
Interpolant solve_interpolation(const FunctionSystemSpec& spec, std::span<const Rational> nodes,
                                std::span<const Rational> values, double rel_threshold = 1e-10);

nlohmann::json to_json(const AlternantMatrix& a);
nlohmann::json to_json(const Determinant& d);
nlohmann::json to_json(const InvertibilityVerdict& v);
nlohmann::json to_json(const Interpolant& p);
// One row per node: node value followed by the entries.
std::string to_csv(const AlternantMatrix& a);

}  // namespace altkit
