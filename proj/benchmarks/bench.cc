#include <benchmark/benchmark.h>

#include "altkit/altkit.h"

using namespace altkit;

namespace {

LogPowExpr logpoly_member(unsigned n, std::uint64_t seed) {
  auto spec = FunctionSystemSpec::log_poly(n);
  auto rng = trial_engine(seed, 0);
  return member(spec, random_coefficients(rng, spec.dimension(), 1000));
}

void BM_DifferentiateN(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  auto f = logpoly_member(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(differentiate_n(f, 2 * n));
}
BENCHMARK(BM_DifferentiateN)->Arg(2)->Arg(4)->Arg(8);

void BM_ChainBound(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  auto f = logpoly_member(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(derivative_chain_bound(f, Interval::above_one()));
}
BENCHMARK(BM_ChainBound)->Arg(2)->Arg(4)->Arg(6);

void BM_NumericRoots(benchmark::State& state) {
  auto f = logpoly_member(3, 3);
  OracleOptions opt;
  opt.grid_points = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numeric_count_roots(f, Interval::above_one(), opt));
}
BENCHMARK(BM_NumericRoots)->Arg(1024)->Arg(4096)->Arg(16384);

std::vector<Rational> spread_nodes(std::size_t count, const Rational& lo) {
  std::vector<Rational> x;
  for (std::size_t k = 1; k <= count; ++k) x.push_back(lo + Rational(static_cast<long>(k), 2));
  return x;
}

void BM_ExactDeterminant(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  auto a = build_matrix(FunctionSystemSpec::power(0, n), spread_nodes(n, 0));
  for (auto _ : state) benchmark::DoNotOptimize(determinant(a));
}
BENCHMARK(BM_ExactDeterminant)->Arg(4)->Arg(8)->Arg(12);

void BM_FloatVerdict(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  auto spec = FunctionSystemSpec::log_poly(n);
  auto x = spread_nodes(spec.dimension(), 1);
  for (auto _ : state) {
    auto a = build_matrix(spec, x);
    benchmark::DoNotOptimize(is_invertible(a));
  }
}
BENCHMARK(BM_FloatVerdict)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
