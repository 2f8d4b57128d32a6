#include <gtest/gtest.h>

#include <cmath>

#include "altkit/errors.h"
#include "altkit/harness.h"
#include "altkit/rootcount.h"
#include "altkit/systems.h"

namespace altkit {
namespace {

LogPowExpr poly(std::vector<Rational> c) { return LogPowExpr::polynomial(c); }
LogPowExpr mono(const Rational& a, unsigned m = 0, const Rational& c = 1) {
  return LogPowExpr::monomial(a, m, c);
}

TEST(SignVariations, Examples) {
  std::vector<Rational> a{1, -3, 2}, b{1, 0, 1}, c{};
  EXPECT_EQ(sign_variations(a), 2u);
  EXPECT_EQ(sign_variations(b), 0u);
  EXPECT_EQ(sign_variations(c), 0u);
  std::vector<Rational> d{1, 0, 0, -1, 0, 2};
  EXPECT_EQ(sign_variations(d), 2u);
}

TEST(Descartes, Examples) {
  EXPECT_EQ(descartes_bound(poly({2, -3, 1})), 2u);
  EXPECT_EQ(descartes_bound(poly({1, 0, 1})), 0u);
  EXPECT_EQ(descartes_bound(poly({-1, 1})), 1u);
  EXPECT_THROW(descartes_bound(mono(1, 1)), InvalidArgument);
}

TEST(BudanFourier, Examples) {
  auto p = poly({2, -3, 1});
  EXPECT_EQ(budan_fourier_bound(p, Interval(Rational(0), Rational(3))), 2u);
  EXPECT_EQ(budan_fourier_bound(p, Interval(Rational(0), Rational(3, 2))), 1u);
  EXPECT_EQ(budan_fourier_bound(poly({1, 0, 1}), Interval(Rational(0), Rational(10))), 0u);
}

TEST(BudanFourier, InfiniteEndpointMatchesDescartes) {
  auto p = poly({-6, 11, -6, 1});
  EXPECT_EQ(budan_fourier_bound(p, Interval::positive_reals()), descartes_bound(p));
  EXPECT_EQ(budan_fourier_bound(p, Interval(std::nullopt, std::nullopt)), 3u);
}

TEST(ChainBound, LogPolyTwoGeneric) {
  // b0 + b1 x + ln x (a0 + a1 x); a0, a1 of one sign so D^2 f = (a1 x - a0) / x^2
  // is not definite and the chain has to go through the degree bound.
  std::vector<Rational> c{3, -2, 5, 1};
  auto f = member(FunctionSystemSpec::log_poly(2), c);
  auto cb = derivative_chain_bound(f, Interval::above_one());
  ASSERT_TRUE(cb.bound);
  EXPECT_EQ(*cb.bound, 3u);
  ASSERT_FALSE(cb.chain.empty());
  EXPECT_EQ(cb.chain.back().order, 2u);
}

TEST(ChainBound, PolynomialUsesDegree) {
  auto cb = derivative_chain_bound(poly({2, -3, 1}), Interval::positive_reals());
  ASSERT_TRUE(cb.bound);
  EXPECT_EQ(*cb.bound, 2u);
}

TEST(ChainBound, LnXAboveOne) {
  auto cb = derivative_chain_bound(mono(0, 1), Interval::above_one());
  ASSERT_TRUE(cb.bound);
  EXPECT_EQ(*cb.bound, 1u);
  EXPECT_EQ(cb.chain.back().order, 1u);
}

TEST(ChainBound, GenericMembersReachTwoNMinusOne) {
  for (unsigned N = 1; N <= 5; ++N) {
    auto spec = FunctionSystemSpec::log_poly(N);
    unsigned worst = 0;
    for (unsigned t = 0; t < 200; ++t) {
      auto rng = trial_engine(77, t);
      auto c = random_coefficients(rng, spec.dimension(), 1000);
      auto cb = derivative_chain_bound(member(spec, c), Interval::above_one());
      ASSERT_TRUE(cb.bound) << "N=" << N << " t=" << t;
      EXPECT_LE(*cb.bound, 2 * N - 1);
      worst = std::max(worst, *cb.bound);
    }
    EXPECT_EQ(worst, 2 * N - 1) << "N=" << N;
  }
}

TEST(AlternatingForm, NTwo) {
  std::vector<Rational> p{Rational(3), Rational(-7, 2)};
  auto form = extract_alternating_form(p, 2);
  EXPECT_EQ(form.power, 2u);
  ASSERT_EQ(form.coeffs.size(), 2u);
  EXPECT_EQ(form.coeffs[0].c, 1);
  EXPECT_EQ(form.coeffs[1].c, 1);
  EXPECT_EQ(form.coeffs[0].sign, -1);
  EXPECT_EQ(form.coeffs[1].sign, 1);
}

TEST(AlternatingForm, NThree) {
  std::vector<Rational> p{1, 1, 1};
  auto form = extract_alternating_form(p, 3);
  std::vector<Rational> c;
  for (const auto& a : form.coeffs) c.push_back(a.c);
  EXPECT_EQ(c, (std::vector<Rational>{2, 1, 2}));
  EXPECT_EQ(form.coeffs[0].sign, 1);
  EXPECT_EQ(form.coeffs[1].sign, -1);
  EXPECT_EQ(form.coeffs[2].sign, 1);
}

// c_j = j! (N-1-j)!: D^N(x^j ln x) = (-1)^(N-1-j) j! (N-1-j)! x^(j-N) for j < N.
TEST(AlternatingForm, MatchesFactorialOracle) {
  for (unsigned N = 2; N <= 8; ++N) {
    std::vector<Rational> p(N, Rational(1));
    auto form = extract_alternating_form(p, N);
    ASSERT_EQ(form.coeffs.size(), N);
    for (unsigned j = 0; j < N; ++j) {
      EXPECT_EQ(form.coeffs[j].c, Rational(factorial(j) * factorial(N - 1 - j))) << N << "," << j;
      EXPECT_GT(form.coeffs[j].c, 0);
    }
  }
}

TEST(AlternatingForm, RejectsBadInput) {
  std::vector<Rational> too_long{1, 1, 1};
  EXPECT_THROW(extract_alternating_form(too_long, 2), InvalidArgument);
  std::vector<Rational> p{1};
  EXPECT_THROW(extract_alternating_form(p, 1), InvalidArgument);
}

TEST(NumericRoots, Examples) {
  auto a = numeric_count_roots(poly({6, -5, 1}), Interval::above_one());
  ASSERT_EQ(a.count, 2u);
  EXPECT_NEAR(a.brackets[0].lo, 2.0, 1e-8);
  EXPECT_NEAR(a.brackets[1].hi, 3.0, 1e-8);

  auto b = numeric_count_roots(mono(0, 1) - LogPowExpr::constant(1), Interval::above_one());
  ASSERT_EQ(b.count, 1u);
  EXPECT_NEAR(b.brackets[0].lo, std::exp(1.0), 1e-8);

  EXPECT_EQ(numeric_count_roots(poly({1, 0, 1}), Interval::positive_reals()).count, 0u);
}

TEST(NumericRoots, BracketsAreTight) {
  OracleOptions opt;
  opt.tol = 1e-12;
  auto r = numeric_count_roots(poly({-2, 0, 1}), Interval::positive_reals(), opt);
  ASSERT_EQ(r.count, 1u);
  EXPECT_LE(r.brackets[0].hi - r.brackets[0].lo, 1e-12);
  EXPECT_LE(r.brackets[0].lo, std::sqrt(2.0));
  EXPECT_GE(r.brackets[0].hi, std::sqrt(2.0));
}

TEST(NumericRoots, Domain) {
  EXPECT_THROW(numeric_count_roots(LogPowExpr(), Interval::positive_reals()), InvalidArgument);
  EXPECT_THROW(numeric_count_roots(mono(1), Interval(Rational(-1), Rational(1))), DomainError);
}

TEST(CountRoots, ReportIsConsistent) {
  std::vector<Rational> c{-6, 11, -6, 1};
  auto rep = count_roots(LogPowExpr::polynomial(c), Interval::positive_reals());
  EXPECT_EQ(rep.bound, 3u);
  EXPECT_EQ(rep.observed, 3u);
  EXPECT_TRUE(rep.consistent());
  auto j = to_json(rep);
  EXPECT_EQ(j["observed"], 3);
}

}  // namespace
}  // namespace altkit
