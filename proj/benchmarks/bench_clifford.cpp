#include <benchmark/benchmark.h>

#include "cliffsub/clifford.hpp"
#include "cliffsub/rng.hpp"

using namespace cliffsub;

namespace {

CliffordElement dense_element(const Algebra& alg, Rng& rng, std::size_t terms) {
  CliffordElement x = alg.zero();
  const std::uint64_t full = (std::uint64_t{1} << alg.signature().size()) - 1;
  for (std::size_t t = 0; t < terms; ++t) {
    const auto mask = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(full + 1)) & full;
    x += alg.blade(Blade{mask}, Complex(rng.normal(), rng.normal()));
  }
  return x;
}

void BM_Multiply(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const Algebra alg = Algebra::make(Signature(std::vector<int>(k, 1)));
  Rng rng(7);
  const auto x = dense_element(alg, rng, 16);
  const auto y = dense_element(alg, rng, 16);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_Multiply)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Anticommutator(benchmark::State& state) {
  const Algebra alg = Algebra::make(Signature(std::vector<int>(12, 1)));
  Rng rng(11);
  const auto x = dense_element(alg, rng, static_cast<std::size_t>(state.range(0)));
  const auto y = dense_element(alg, rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(anticommutator(x, y));
}
BENCHMARK(BM_Anticommutator)->Arg(4)->Arg(32)->Arg(128);

}  // namespace
