#include <benchmark/benchmark.h>

#include "hochsplit/discsplit.hpp"
#include "hochsplit/ratsemigroup.hpp"

using namespace hochsplit;

namespace {

void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiscPoint<Complex> p(Complex(0.6, 0.3));
  const auto a = blaschke(p, n);
  const auto b = blaschke(DiscPoint<Complex>(Complex(-0.2, 0.5)), n);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b, 2 * n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Coboundary(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const DiscPoint<Complex> p(Complex(0.5, 0.5));
  const auto t = random_cochain_box(p, {2 * w, 2 * w}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(coboundary(t));
}
BENCHMARK(BM_Coboundary)->Arg(8)->Arg(16)->Arg(32);

void BM_SplitApply(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 100.0;
  const DiscPoint<Complex> p(Complex(r, 0));
  const std::size_t m = default_blaschke_cutoff(r);
  const std::size_t window = 6;
  const auto t = random_cochain_box(p, identity_check_box(2, window, m), 2);
  for (auto _ : state) benchmark::DoNotOptimize(split_map(t, m, window));
}
BENCHMARK(BM_SplitApply)->Arg(50)->Arg(90)->Arg(99);

void BM_IdentityCheck(benchmark::State& state) {
  const DiscPoint<Complex> p(Complex(0.9, 0));
  const std::size_t m = default_blaschke_cutoff(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(splitting_identity_check(2, p, 6, m, 3));
}
BENCHMARK(BM_IdentityCheck);

void BM_NormAudit(benchmark::State& state) {
  const DiscPoint<Complex> p(Complex(0.99, 0));
  const std::size_t m = default_blaschke_cutoff(0.99);
  for (auto _ : state) benchmark::DoNotOptimize(norm_audit(p, 1, static_cast<std::size_t>(state.range(0)), m));
}
BENCHMARK(BM_NormAudit)->Arg(6)->Arg(50);

void BM_Prelimit(benchmark::State& state) {
  using namespace hochsplit::rat;
  const auto f = smooth_random_cochain(1);
  const auto chi = RatChar::finite(1.0, 0.7);
  const Rational alpha(1, state.range(0));
  const auto window = grid_window(12, 24);
  for (auto _ : state) benchmark::DoNotOptimize(prelimit_flat_split(f, chi, alpha, window));
}
BENCHMARK(BM_Prelimit)->Arg(1)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
