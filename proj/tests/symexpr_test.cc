#include <gtest/gtest.h>

#include <cmath>

#include "altkit/errors.h"
#include "altkit/symexpr.h"

namespace altkit {
namespace {

LogPowExpr x_pow(int k, unsigned m = 0, Rational c = 1) { return LogPowExpr::monomial(k, m, c); }

TEST(LogPowExpr, CanonicalFormMergesAndDropsZeros) {
  auto f = LogPowExpr::from_terms({{2, 1, 0}, {3, 0, 1}, {-2, 1, 0}, {1, 0, 1}});
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.terms()[0], (LogPowTerm{4, 0, 1}));
  EXPECT_TRUE(LogPowExpr::from_terms({{1, 2, 0}, {-1, 2, 0}}).is_zero());
}

TEST(LogPowExpr, TermsSortedByExponentThenLogPower) {
  auto f = LogPowExpr::from_terms({{1, 2, 0}, {1, 0, 1}, {1, 0, 0}, {1, Rational(-1, 2), 3}});
  std::vector<std::pair<Rational, unsigned>> keys;
  for (const auto& t : f.terms()) keys.emplace_back(t.alpha, t.logpow);
  std::vector<std::pair<Rational, unsigned>> want{
      {Rational(-1, 2), 3}, {0, 0}, {0, 1}, {2, 0}};
  EXPECT_EQ(keys, want);
}

TEST(LogPowExpr, DerivativeOfXSquaredLnX) {
  // D(x^2 ln x) = 2x ln x + x
  auto d = differentiate(x_pow(2, 1));
  EXPECT_EQ(d, x_pow(1, 1, 2) + x_pow(1));
}

TEST(LogPowExpr, DerivativeOfLnX) {
  EXPECT_EQ(differentiate(x_pow(0, 1)), x_pow(-1));
  EXPECT_EQ(differentiate_n(x_pow(0, 1), 2), x_pow(-2, 0, -1));
}

TEST(LogPowExpr, ConstantsDifferentiateToZero) {
  EXPECT_TRUE(differentiate(LogPowExpr::constant(7)).is_zero());
  EXPECT_TRUE(differentiate(LogPowExpr()).is_zero());
}

TEST(LogPowExpr, PolynomialHelpers) {
  std::vector<Rational> c{1, 0, -3};
  auto p = LogPowExpr::polynomial(c);
  EXPECT_TRUE(p.is_polynomial());
  EXPECT_TRUE(p.is_pure_power());
  EXPECT_EQ(p.polynomial_coefficients(), c);
  EXPECT_FALSE(x_pow(-1).is_polynomial());
  EXPECT_TRUE(x_pow(-1).is_pure_power());
  EXPECT_FALSE(x_pow(1, 1).is_pure_power());
  EXPECT_THROW(x_pow(1, 1).polynomial_coefficients(), InvalidArgument);
}

TEST(LogPowExpr, MultiplyAddsExponentsAndLogPowers) {
  auto f = x_pow(1, 1) * x_pow(2, 2, 3);
  EXPECT_EQ(f, x_pow(3, 3, 3));
  auto g = (x_pow(1) + LogPowExpr::constant(1)) * (x_pow(1) - LogPowExpr::constant(1));
  EXPECT_EQ(g, x_pow(2) - LogPowExpr::constant(1));
}

TEST(LogPowExpr, ShiftPower) {
  EXPECT_EQ(shift_power(x_pow(2, 1), Rational(-3)), x_pow(-1, 1));
}

TEST(LogPowExpr, EvaluateMatchesDirectFormula) {
  auto f = x_pow(2, 1, 2) - x_pow(1, 0, 3) + LogPowExpr::constant(Rational(1, 2));
  for (double x : {0.3, 1.0, 2.5, 17.0}) {
    EXPECT_NEAR(evaluate(f, x), 2 * x * x * std::log(x) - 3 * x + 0.5, 1e-12 * (1 + x * x));
  }
  EXPECT_NEAR(evaluate(LogPowExpr::monomial(Rational(1, 2)), 9.0), 3.0, 1e-15);
}

TEST(LogPowExpr, EvaluatePolynomialIsExactAtRoots) {
  std::vector<Rational> c{-1, 0, 1};
  EXPECT_EQ(evaluate(LogPowExpr::polynomial(c), 1.0), 0.0);
}

TEST(LogPowExpr, EvaluateRejectsNonPositive) {
  EXPECT_THROW(evaluate(x_pow(1), 0.0), DomainError);
  EXPECT_THROW(evaluate(x_pow(1), -2.0), DomainError);
}

TEST(LogPowExpr, EvaluateExact) {
  std::vector<Rational> c{1, 2, 3};
  EXPECT_EQ(*evaluate_exact(LogPowExpr::polynomial(c), Rational(1, 2)), Rational(11, 4));
  EXPECT_FALSE(evaluate_exact(x_pow(1, 1), 2).has_value());
}

TEST(LogPowExpr, ToString) {
  auto f = x_pow(2, 1, 2) - x_pow(1, 0, 3) + LogPowExpr::constant(Rational(1, 2));
  EXPECT_EQ(to_string(f), "2*x^2*ln(x) - 3*x + 1/2");
  EXPECT_EQ(to_string(LogPowExpr()), "0");
}

TEST(LogPowExpr, JsonRoundTrip) {
  auto f = x_pow(2, 1, 2) + LogPowExpr::monomial(Rational(-1, 3), 2, Rational(5, 7));
  EXPECT_EQ(expr_from_json(to_json(f)), f);
  EXPECT_EQ(expr_from_json(nlohmann::json::parse(to_json(f).dump())), f);
}

TEST(LogPowExpr, MinMaxAlpha) {
  auto f = x_pow(3) + x_pow(-2, 1);
  EXPECT_EQ(f.min_alpha(), -2);
  EXPECT_EQ(f.max_alpha(), 3);
  EXPECT_EQ(f.max_logpow(), 1u);
}

TEST(LogPowExpr, AdditiveInverseAndMerge) {
  EXPECT_TRUE((x_pow(1, 1) + x_pow(1, 1, -1)).is_zero());
  EXPECT_EQ(x_pow(2, 0, 2) + (x_pow(2, 0, 3) + x_pow(1)), x_pow(2, 0, 5) + x_pow(1));
  auto f = x_pow(0, 1) + x_pow(1, 1);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.terms()[0], (LogPowTerm{1, 0, 1}));
  EXPECT_EQ(f.terms()[1], (LogPowTerm{1, 1, 1}));
}

TEST(LogPowExpr, Scale) {
  EXPECT_TRUE(scale(x_pow(1) + LogPowExpr::constant(1), 0).is_zero());
  EXPECT_EQ(scale(x_pow(1, 1), -2), x_pow(1, 1, -2));
  EXPECT_EQ(scale(LogPowExpr::monomial(Rational(1, 2)), Rational(1, 3)),
            LogPowExpr::monomial(Rational(1, 2), 0, Rational(1, 3)));
}

TEST(LogPowExpr, DerivativeExamples) {
  EXPECT_EQ(differentiate(x_pow(1, 1)), x_pow(0, 1) + LogPowExpr::constant(1));
  EXPECT_EQ(differentiate_n(x_pow(2, 1), 3), x_pow(-1, 0, 2));
  // ((x + 1) ln x)'' = 1/x - 1/x^2
  EXPECT_EQ(differentiate_n(x_pow(1, 1) + x_pow(0, 1), 2), x_pow(-1) - x_pow(-2));
  EXPECT_EQ(differentiate_n(x_pow(2, 1), 2), x_pow(0, 1, 2) + LogPowExpr::constant(3));
}

TEST(LogPowExpr, EvaluateExamples) {
  EXPECT_NEAR(evaluate(x_pow(0, 1), std::exp(1.0)), 1.0, 1e-12);
  EXPECT_NEAR(evaluate(x_pow(1, 1), 2.0), 1.3862943611, 1e-10);
}

TEST(LogPowExpr, EqualityExamples) {
  EXPECT_TRUE(equal(differentiate(x_pow(1, 1)), x_pow(0, 1) + LogPowExpr::constant(1)));
  EXPECT_TRUE(equal(LogPowExpr::constant(0), LogPowExpr()));
  EXPECT_TRUE(equal(LogPowExpr::from_terms({{1, 1, 0}}), x_pow(1)));
}

TEST(Interval, ContainsIsOpen) {
  auto iv = Interval::above_one();
  EXPECT_FALSE(iv.contains(Rational(1)));
  EXPECT_TRUE(iv.contains(Rational(3, 2)));
  EXPECT_TRUE(iv.contains(1e300));
  Interval b(Rational(0), Rational(2));
  EXPECT_FALSE(b.contains(2.0));
  EXPECT_TRUE(b.is_subset_of(Interval::positive_reals()));
  EXPECT_FALSE(Interval::positive_reals().is_subset_of(Interval::above_one()));
}

TEST(Interval, JsonRoundTrip) {
  Interval iv(Rational(1, 2), std::nullopt);
  EXPECT_EQ(to_json(iv), nlohmann::json::parse(R"(["1/2","inf"])"));
  EXPECT_EQ(interval_from_json(to_json(iv)), iv);
}

}  // namespace
}  // namespace altkit
