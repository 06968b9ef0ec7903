#include <benchmark/benchmark.h>

#include "heun/cauchy.hpp"
#include "heun/measure.hpp"
#include "heun/special.hpp"
#include "heun/spectral.hpp"
#include "heun/takemura.hpp"

namespace {

using heun::Complex;

const heun::CubicConfig kCubic(0.0, 1.0, Complex(-0.5, 1.0));

void BM_SpEval(benchmark::State& state) {
  const auto sc = heun::shift_to_root(kCubic, 0);
  const auto m = heun::build_matrix(sc, heun::LowDegreePoly::lame(sc), static_cast<int>(state.range(0)));
  const Complex lambda(0.2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(heun::sp_eval(m, lambda, m.size()));
}
BENCHMARK(BM_SpEval)->Arg(50)->Arg(100)->Arg(1000);

void BM_SpectralRoots(benchmark::State& state) {
  const auto sc = heun::shift_to_root(kCubic, 0);
  const auto m = heun::build_matrix(sc, heun::LowDegreePoly::lame(sc), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(heun::spectral_roots(m));
}
BENCHMARK(BM_SpectralRoots)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_StieltjesRoots(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = heun::compute_spectrum(kCubic, heun::PChoice::lame(), n);
  const heun::StieltjesSolver solver(kCubic, heun::PChoice::lame(), n);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.roots(spec.measure.precise[k]));
    k = (k + 1) % spec.measure.size();
  }
}
BENCHMARK(BM_StieltjesRoots)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_CauchyM(benchmark::State& state) {
  const heun::LimitProfile p(heun::shift_to_root(kCubic, 0));
  const Complex z(2.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(heun::cauchy_M(p, z));
}
BENCHMARK(BM_CauchyM)->Unit(benchmark::kMicrosecond);

void BM_HeunResidual(benchmark::State& state) {
  const auto sc = heun::shift_to_root(kCubic, 0);
  const Complex z(2.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(heun::heun_ode_residual(sc, z));
}
BENCHMARK(BM_HeunResidual)->Unit(benchmark::kMicrosecond);

void BM_SpecialIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(heun::I_nu_special(1.0, 0));
}
BENCHMARK(BM_SpecialIntegral)->Unit(benchmark::kMicrosecond);

void BM_PeriodIntegral(benchmark::State& state) {
  const Complex b(0.2, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(heun::period_integral(kCubic, 0, b));
}
BENCHMARK(BM_PeriodIntegral)->Unit(benchmark::kMicrosecond);

void BM_TraceTree(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(heun::trace_tree(kCubic));
}
BENCHMARK(BM_TraceTree)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
