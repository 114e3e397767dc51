#include <benchmark/benchmark.h>

#include <random>

#include "tabqa/lora/lora.hpp"

using namespace tabqa::lora;

namespace {

WeightMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  WeightMatrix m(r, c);
  for (auto& v : m.data) v = n(rng);
  return m;
}

LoraUpdate make_update(std::size_t d, std::size_t k, std::size_t r) {
  std::mt19937_64 rng(9);
  LoraUpdate u;
  u.a = random_matrix(d, r, rng);
  u.b = random_matrix(r, k, rng);
  u.r = r;
  u.alpha = 32;
  return u;
}

void BM_Merge(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  auto u = make_update(d, d, 16);
  WeightMatrix w(d, d, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(merge(w, u, ScaleMode::kAlphaOverR));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * d * d * sizeof(double)));
}
BENCHMARK(BM_Merge)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_RankBound(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  auto u = make_update(d, d, 16);
  for (auto _ : state) benchmark::DoNotOptimize(delta_rank_bound(u));
}
BENCHMARK(BM_RankBound)->Arg(256)->Arg(2048)->Unit(benchmark::kMicrosecond);

}  // namespace
