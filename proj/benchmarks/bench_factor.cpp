#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "cliffsub/factor.hpp"
#include "cliffsub/substructure.hpp"

using namespace cliffsub;

namespace {

void BM_FactorHermitian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(n, n);
  const Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(factor_hermitian(h));
}
BENCHMARK(BM_FactorHermitian)->DenseRange(1, 6);

void BM_BuildPosition(benchmark::State& state) {
  SpaceTimeSpectrum spec;
  for (int r = 0; r < state.range(0); ++r) {
    spec.points.push_back({{1.0 + r, 0.3 * r, -0.2, 0.5}});
    spec.labels.push_back("x" + std::to_string(r));
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_position(spec));
}
BENCHMARK(BM_BuildPosition)->DenseRange(1, 6);

}  // namespace
