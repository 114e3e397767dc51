#include <benchmark/benchmark.h>

#include "tabqa/ingest/page_graphics.hpp"
#include "tabqa/ingest/raster.hpp"
#include "tabqa/ingest/table_detector.hpp"
#include "tabqa/testkit/pdf_writer.hpp"

using namespace tabqa::ingest;

namespace {

void BM_DetectTablePage(benchmark::State& state) {
  auto pdf = PdfDocument::from_bytes(tabqa::testkit::three_page_fixture());
  LineGridDetector det;
  for (auto _ : state) {
    for (int p = 1; p <= pdf.page_count(); ++p) {
      benchmark::DoNotOptimize(det.contains_table(interpret_page(pdf, pdf.page(p))));
    }
  }
}
BENCHMARK(BM_DetectTablePage);

void BM_RenderPage(benchmark::State& state) {
  auto pdf = PdfDocument::from_bytes(tabqa::testkit::three_page_fixture());
  auto graphics = interpret_page(pdf, pdf.page(2));
  const int dpi = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(encode_png(rasterize(graphics, dpi), dpi));
}
BENCHMARK(BM_RenderPage)->Arg(72)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
