#include <benchmark/benchmark.h>

#include "fsi/constitutive.hpp"

namespace {

fsi::Mat3 sample_gradient() {
  fsi::Mat3 H;
  H << 0.05, -0.02, 0.01, 0.03, -0.04, 0.02, -0.01, 0.02, 0.06;
  return H;
}

void BM_SvkCoefficients(benchmark::State& state) {
  const fsi::Mat3 H = sample_gradient();
  for (auto _ : state) benchmark::DoNotOptimize(fsi::svk_coefficients(H, 1.0, 1.0));
}
BENCHMARK(BM_SvkCoefficients);

void BM_QuasiIncCoefficients(benchmark::State& state) {
  const fsi::Mat3 H = sample_gradient();
  for (auto _ : state) benchmark::DoNotOptimize(fsi::quasi_inc_coefficients(H));
}
BENCHMARK(BM_QuasiIncCoefficients);

void BM_CombinedDerivative(benchmark::State& state) {
  const fsi::Mat3 H = sample_gradient();
  const fsi::Mat3 G = H.transpose();
  const fsi::MaterialParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fsi::combined_derivative(H, G, p));
}
BENCHMARK(BM_CombinedDerivative);

}  // namespace
