#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/ingest/pdf_document.hpp"
#include "tabqa/ingest/table_detector.hpp"
#include "tabqa/util.hpp"

namespace tabqa::ingest {

/// Resolution at zoom 1.0; zoom 3.0 renders at 300 DPI.
inline constexpr int kBaseDpi = 100;
inline constexpr double kDefaultZoom = 3.0;

struct PageImage {
  std::string doc_id;
  int page_number = 0;     // 1-based
  std::string image_path;  // relative to the manifest's directory
  int width_px = 0;
  int height_px = 0;
  int dpi = 0;
  std::string content_hash;  // sha256 of the PNG bytes

  friend bool operator==(const PageImage&, const PageImage&) = default;
};

json to_json(const PageImage& page);
PageImage page_image_from_json(const json& j);

int dpi_for_zoom(double zoom);

/// Newline-delimited manifest of rendered pages, one row per image_path.
/// Upserts are serialized; every mutation rewrites the file sorted by path.
class Manifest {
 public:
  static constexpr const char* kFileName = "manifest.jsonl";

  /// Loads `path` if it exists; the manifest directory is its parent.
  explicit Manifest(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path root() const { return path_.parent_path(); }

  void upsert(const PageImage& page);
  std::vector<PageImage> entries() const;
  std::optional<PageImage> find(const std::string& image_path) const;

  /// Problems breaking manifest/disk correspondence or hash integrity;
  /// empty when consistent.
  std::vector<std::string> verify() const;

 private:
  void save_locked() const;

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<PageImage> entries_;
};

/// 1-based numbers of pages the detector flags. Deterministic for a fixed
/// detector.
std::vector<int> scan_for_table_pages(const PdfDocument& pdf,
                                      const TableDetector& detector = LineGridDetector{});

/// Renders one page as PNG at kBaseDpi * zoom into
/// `<manifest root>/<doc_id>/table_page_<n>.png` and records it.
/// Throws RenderFailure.
PageImage render_page(const PdfDocument& pdf, int page_number, double zoom, Manifest& manifest);

struct IngestOptions {
  double zoom = kDefaultZoom;
  std::optional<std::vector<int>> pages;  // overrides detection
  std::size_t parallelism = 4;
};

std::vector<PageImage> ingest_pdf(const PdfDocument& pdf, Manifest& manifest,
                                  const IngestOptions& options = {},
                                  const TableDetector& detector = LineGridDetector{});

/// Registers pre-rendered PNGs found (recursively) under `images_dir`, which
/// must be inside the manifest root. Files without a pHYs chunk get
/// `default_dpi`.
std::vector<PageImage> import_images(const std::filesystem::path& images_dir, Manifest& manifest,
                                     int default_dpi = 300);

}  // namespace tabqa::ingest
