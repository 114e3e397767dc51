#include "doctest.h"
#include "support/workspace.hpp"
#include "tabqa/error.hpp"
#include "tabqa/ingest/ingest.hpp"
#include "tabqa/ingest/page_graphics.hpp"
#include "tabqa/ingest/raster.hpp"
#include "tabqa/ingest/table_detector.hpp"
#include "tabqa/testkit/pdf_writer.hpp"

using namespace tabqa;
using namespace tabqa::ingest;
namespace fs = std::filesystem;

TEST_CASE("fixture document structure") {
  auto pdf = PdfDocument::from_bytes(testkit::three_page_fixture(), "fixture");
  CHECK(pdf.page_count() == 3);
  auto p3 = pdf.page(3);
  CHECK(p3.content.find("compressed") != std::string::npos);
  CHECK(p3.media_box.width() == doctest::Approx(612));
  CHECK_THROWS_AS(pdf.page(4), RenderFailure);
  CHECK_THROWS_AS(pdf.page(0), RenderFailure);
}

TEST_CASE("unreadable documents") {
  CHECK_THROWS_AS(PdfDocument::from_bytes("not a pdf"), UnreadableDocument);
  CHECK_THROWS_AS(PdfDocument::open("/nonexistent/file.pdf"), UnreadableDocument);
}

TEST_CASE("detector flags only the ruled page") {
  auto pdf = PdfDocument::from_bytes(testkit::three_page_fixture(), "fixture");
  CHECK(scan_for_table_pages(pdf) == std::vector<int>{2});
  LineGridDetector det;
  auto stats = det.analyze(interpret_page(pdf, pdf.page(2)));
  CHECK(stats.horizontal_levels >= 4);
  CHECK(stats.vertical_levels >= 6);
  CHECK_FALSE(det.contains_table(interpret_page(pdf, pdf.page(1))));
}

TEST_CASE("graphics interpreter applies the CTM") {
  testkit::PdfWriter w;
  w.add_page("q 2 0 0 2 10 20 cm 0 0 m 50 0 l S Q", 200, 200);
  auto pdf = PdfDocument::from_bytes(w.bytes());
  auto g = interpret_page(pdf, pdf.page(1));
  REQUIRE(g.paths.size() == 1);
  CHECK(g.paths[0].stroke);
  CHECK(g.paths[0].subpaths[0][1].x == doctest::Approx(110));
  CHECK(g.paths[0].subpaths[0][1].y == doctest::Approx(20));
}

TEST_CASE("zoom 3 renders 300 dpi pages deterministically") {
  testsupport::TempDir dir;
  auto pdf = PdfDocument::from_bytes(testkit::three_page_fixture(), "fixture");
  Manifest manifest(dir.path() / Manifest::kFileName);
  auto pages = ingest_pdf(pdf, manifest);
  REQUIRE(pages.size() == 1);
  const auto& p = pages[0];
  CHECK(dpi_for_zoom(3.0) == 300);
  CHECK(p.dpi == 300);
  CHECK(p.page_number == 2);
  CHECK(p.width_px == 2550);
  CHECK(p.height_px == 3300);
  CHECK(p.image_path == "fixture/table_page_2.png");
  const auto bytes = read_file(dir.path() / p.image_path);
  auto info = probe_png(bytes);
  CHECK(info.width == 2550);
  CHECK(info.dpi == 300);
  CHECK(sha256_hex(bytes) == p.content_hash);

  const auto manifest_bytes = read_file(manifest.path());
  auto again = ingest_pdf(pdf, manifest);
  CHECK(again == pages);
  CHECK(read_file(manifest.path()) == manifest_bytes);
  CHECK(read_file(dir.path() / p.image_path) == bytes);
  CHECK(manifest.verify().empty());
}

TEST_CASE("explicit pages bypass detection") {
  testsupport::TempDir dir;
  auto pdf = PdfDocument::from_bytes(testkit::three_page_fixture(), "fixture");
  Manifest manifest(dir.path() / Manifest::kFileName);
  IngestOptions opts;
  opts.zoom = 1.0;
  opts.pages = std::vector<int>{1, 3};
  auto pages = ingest_pdf(pdf, manifest, opts);
  REQUIRE(pages.size() == 2);
  CHECK(pages[0].dpi == 100);
  CHECK(pages[1].width_px == 850);
  opts.pages = std::vector<int>{9};
  CHECK_THROWS_AS(ingest_pdf(pdf, manifest, opts), RenderFailure);
}

TEST_CASE("rasterizer draws rules dark on white") {
  PageGraphics g;
  g.media_box = {0, 0, 72, 72};
  PaintedPath line;
  line.subpaths = {{{0, 36}, {72, 36}}};
  line.closed = {false};
  line.stroke = true;
  line.line_width = 2;
  g.paths.push_back(line);
  auto img = rasterize(g, 100);
  CHECK(img.width == 100);
  CHECK(img.height == 100);
  CHECK(img.pixels[50 * 100 + 50] < 64);
  CHECK(img.pixels[10 * 100 + 50] == 255);
  CHECK(encode_png(img, 100) == encode_png(img, 100));
  CHECK_THROWS_AS(probe_png("garbage"), IoError);
}

TEST_CASE("manifest of pre-rendered images") {
  testsupport::TempDir dir;
  PageGraphics g;
  g.media_box = {0, 0, 72, 72};
  fs::create_directories(dir.path() / "pages");
  write_file_atomic(dir.path() / "pages" / "a.png", encode_png(rasterize(g, 150), 150));
  write_file_atomic(dir.path() / "pages" / "b.png", encode_png(rasterize(g, 50), 0));
  Manifest manifest(dir.path() / Manifest::kFileName);
  auto pages = import_images(dir.path() / "pages", manifest, 300);
  REQUIRE(pages.size() == 2);
  CHECK(pages[0].image_path == "pages/a.png");
  CHECK(pages[0].dpi == 150);
  CHECK(pages[1].dpi == 300);
  CHECK(manifest.find("pages/b.png").has_value());

  Manifest reloaded(manifest.path());
  CHECK(reloaded.entries() == manifest.entries());
  fs::remove(dir.path() / "pages" / "a.png");
  CHECK(reloaded.verify().size() == 1);

  testsupport::TempDir other;
  Manifest elsewhere(other.path() / Manifest::kFileName);
  CHECK_THROWS(import_images(dir.path() / "pages", elsewhere));
}
