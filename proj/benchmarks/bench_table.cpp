#include <benchmark/benchmark.h>

#include <random>

#include "support/random_grid.hpp"
#include "tabqa/table/latex.hpp"
#include "tabqa/table/lookup.hpp"

using namespace tabqa;

namespace {

std::vector<table::TableGrid> grids(int n, int dim) {
  std::mt19937_64 rng(42);
  std::vector<table::TableGrid> out;
  for (int i = 0; i < n; ++i) {
    auto g = testgen::random_grid(rng, dim, 3);
    table::canonicalize(g);
    out.push_back(std::move(g));
  }
  return out;
}

void BM_SerializeLatex(benchmark::State& state) {
  auto gs = grids(64, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(table::serialize_latex(gs[i++ % gs.size()]));
}
BENCHMARK(BM_SerializeLatex)->Arg(4)->Arg(8)->Arg(16);

void BM_ParseLatex(benchmark::State& state) {
  std::vector<std::string> srcs;
  for (const auto& g : grids(64, static_cast<int>(state.range(0)))) srcs.push_back(table::serialize_latex(g));
  std::size_t i = 0, bytes = 0;
  for (auto _ : state) {
    const auto& s = srcs[i++ % srcs.size()];
    benchmark::DoNotOptimize(table::parse_latex_table(s));
    bytes += s.size();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_ParseLatex)->Arg(4)->Arg(8)->Arg(16);

void BM_LookupCell(benchmark::State& state) {
  auto gs = grids(64, 8);
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& g : gs) {
    auto text = table::expanded_text(g);
    keys.emplace_back(text[g.n_rows - 1][0], text[0][g.n_cols - 1]);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto k = i++ % gs.size();
    try {
      benchmark::DoNotOptimize(table::lookup_cell(gs[k], {keys[k].first}, {keys[k].second}));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_LookupCell);

}  // namespace
