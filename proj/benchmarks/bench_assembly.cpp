#include <benchmark/benchmark.h>

#include "fsi/solvers.hpp"
#include "fsi_fixtures/two_cube.hpp"

namespace {

struct Fixture {
  fsi::Discretization d = fsi::make_discretization(fsi::fixtures::two_cube(2), 2);
  fsi::Problem pb{d, fsi::MaterialParams{}, fsi::SolverConfig{}};
  fsi::MapState m = fsi::identity_map_state(d);
  Eigen::VectorXd xi;
  Fixture() {
    xi = Eigen::VectorXd::Zero(d.num_dofs());
    for (int n = 0; n < d.space.num_nodes(); ++n)
      if (d.space.in_region(n, fsi::Region::Solid)) xi.segment<3>(3 * n) = 0.01 * d.space.node_coords[n];
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_ElasticField(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fsi::evaluate_elastic_field(f.d, f.xi, f.pb.params, fsi::CoefficientGradient::Projection, &f.pb.projector));
}
BENCHMARK(BM_ElasticField)->Unit(benchmark::kMillisecond);

void BM_AssembleOperators(benchmark::State& state) {
  auto& f = fixture();
  const auto b = fsi::evaluate_elastic_field(f.d, f.xi, f.pb.params, fsi::CoefficientGradient::Projection, &f.pb.projector);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fsi::assemble_operators(f.d, f.pb.basis, f.m, b, {}, f.pb.params, threads));
}
BENCHMARK(BM_AssembleOperators)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
