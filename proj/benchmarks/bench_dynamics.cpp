#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cliffsub/dynamics.hpp"

using namespace cliffsub;

namespace {

ParticleState make_state(std::size_t n) {
  std::vector<FourVector> p, x;
  for (std::size_t r = 0; r < n; ++r) {
    const double px = 0.2 * static_cast<double>(r);
    p.push_back({{std::sqrt(4.0 + px * px), px, 0.0, 0.0}});
    x.push_back({{0.0, static_cast<double>(r), 0.0, 0.0}});
  }
  return init_particle(2.0, p, x);
}

void BM_EvolveClosed(benchmark::State& state) {
  const auto s = make_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_closed(s, 3.0));
}
BENCHMARK(BM_EvolveClosed)->Arg(1)->Arg(3);

void BM_EvolveNumeric(benchmark::State& state) {
  const auto s = make_state(2);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_numeric(s, 3.0, steps));
}
BENCHMARK(BM_EvolveNumeric)->Arg(10)->Arg(100)->Arg(1000);

void BM_ExtractMu(benchmark::State& state) {
  const auto s = evolve_closed(make_state(3), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(extract_mu(s));
}
BENCHMARK(BM_ExtractMu);

}  // namespace
