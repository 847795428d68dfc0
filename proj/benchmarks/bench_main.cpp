#include <benchmark/benchmark.h>

#include "legendre/bhargava.hpp"
#include "legendre/chebyshev.hpp"
#include "legendre/constants.hpp"
#include "legendre/legendre_core.hpp"
#include "legendre/prime_engine.hpp"

using namespace legendre;

static void BM_Sieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(limit).size());
}
BENCHMARK(BM_Sieve)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24);

static void BM_FactorialExponents(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const FMap f = FMap::half_ceiling();
  for (auto _ : state) benchmark::DoNotOptimize(factorial_exponents(f, n).factors().size());
}
BENCHMARK(BM_FactorialExponents)->Arg(1000)->Arg(100000);

static void BM_LogFactorial(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const FMap f = FMap::log_map();
  for (auto _ : state) benchmark::DoNotOptimize(log_factorial(f, n).mid_double());
}
BENCHMARK(BM_LogFactorial)->Arg(100)->Arg(10000);

static void BM_FactorialValue(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(factorial_exponents(FMap::shifted_linear(1, -1), n).value());
}
BENCHMARK(BM_FactorialValue)->Arg(1000)->Arg(10000);

static void BM_POrdering(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  const auto pool = IntegerSet::primes().prefix(4 * length);
  for (auto _ : state) benchmark::DoNotOptimize(p_ordering(pool, 2, length).step_valuations.back());
}
BENCHMARK(BM_POrdering)->Arg(16)->Arg(64);

static void BM_PartialC(benchmark::State& state) {
  const auto cutoff = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(partial_C(cutoff).mid_double());
}
BENCHMARK(BM_PartialC)->Arg(1 << 16)->Arg(1 << 20);

static void BM_FloorResidual(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chebyshev_floor_residual({2, 4}, n).mid_double());
}
BENCHMARK(BM_FloorResidual)->Arg(100)->Arg(1000);
