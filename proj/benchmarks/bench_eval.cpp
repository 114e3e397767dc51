#include <benchmark/benchmark.h>

#include <random>

#include "tabqa/eval/matcher.hpp"
#include "tabqa/eval/metrics.hpp"

using namespace tabqa;

namespace {

void BM_MatcherGrade(benchmark::State& state) {
  const std::string gt = "158 mm";
  const std::string gen =
      "The minimum equivalent thickness for monolithic concrete and concrete panels made with Type S "
      "concrete at a fire-resistance rating of 3 hours is **158\nmm**.";
  for (auto _ : state) benchmark::DoNotOptimize(eval::grade_with_matcher(gen, gt));
}
BENCHMARK(BM_MatcherGrade);

void BM_Confusion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.5);
  std::vector<eval::Verdict> pre(n), ft(n);
  for (std::size_t i = 0; i < n; ++i) {
    pre[i].triplet_id = ft[i].triplet_id = "t" + std::to_string(i);
    pre[i].label = coin(rng) ? eval::Label::kCorrect : eval::Label::kIncorrect;
    ft[i].label = coin(rng) ? eval::Label::kCorrect : eval::Label::kIncorrect;
  }
  std::shuffle(ft.begin(), ft.end(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval::confusion(pre, ft));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Confusion)->Arg(100)->Arg(10000);

}  // namespace
