#include <benchmark/benchmark.h>

#include <cmath>

#include "fraclab/cone_projection.hpp"
#include "fraclab/eigen.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/operator.hpp"
#include "fraclab/rng.hpp"

using namespace fraclab;

namespace {

GridFunction gaussian(const UniformGrid& g, double c) {
  return sample_unchecked([=](double x) { return std::exp(-0.5 * (x - c) * (x - c)); }, g);
}

void BM_EnergySpectral(benchmark::State& st) {
  const UniformGrid g(16.0, static_cast<int>(st.range(0)));
  const GridFunction u = gaussian(g, -0.5), v = gaussian(g, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(energy_spectral_free(u, v, FracOrder(1.25)).value);
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_EnergySpectral)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_EnergyDisjoint(benchmark::State& st) {
  const SupportedFunction u = supported(bump_fn(-2.0, 0.8)), v = supported(bump_fn(1.5, 0.6));
  const FracOrder s(static_cast<double>(st.range(0)) / 4.0);
  for (auto _ : st) benchmark::DoNotOptimize(energy_disjoint(u, v, s).value);
}
BENCHMARK(BM_EnergyDisjoint)->Arg(2)->Arg(5)->Arg(10);

void BM_Hypersingular(benchmark::State& st) {
  const UniformGrid g(64.0, 16384);
  const HypersingularEvaluator ev(gaussian(g, 0.0));
  for (auto _ : st) benchmark::DoNotOptimize(ev.apply(FracOrder(1.75), 0.3).value);
}
BENCHMARK(BM_Hypersingular);

void BM_Assemble(benchmark::State& st) {
  const IntervalUnion om = parse_domain("-3,-1; 1,3");
  const UniformGrid g = default_grid(om);
  const int J = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(assemble(om, FracOrder(1.5), J, g).S(0, 0));
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SolveEigen(benchmark::State& st) {
  const IntervalUnion om = parse_domain("-1,1");
  const FracOrder s(static_cast<double>(st.range(0)) / 4.0);
  for (auto _ : st) benchmark::DoNotOptimize(lambda_of(om, s));
}
BENCHMARK(BM_SolveEigen)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ConeProjection(benchmark::State& st) {
  const IntervalUnion om = parse_domain("-1,1");
  const GalerkinSystem sys = assemble(om, FracOrder(2.5), static_cast<int>(st.range(0)), default_grid(om));
  Rng rng(1);
  Eigen::VectorXd w(sys.size());
  for (int i = 0; i < w.size(); ++i) w[i] = rng.normal();
  for (auto _ : st) benchmark::DoNotOptimize(project_positive(sys, w).v[0]);
}
BENCHMARK(BM_ConeProjection)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
