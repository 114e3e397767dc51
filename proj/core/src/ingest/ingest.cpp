#include "tabqa/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>

#include "tabqa/error.hpp"
#include "tabqa/ingest/page_graphics.hpp"
#include "tabqa/ingest/raster.hpp"

namespace tabqa::ingest {

namespace fs = std::filesystem;

json to_json(const PageImage& p) {
  return ordered_json{{"doc_id", p.doc_id},       {"page_number", p.page_number},
                      {"image_path", p.image_path}, {"width_px", p.width_px},
                      {"height_px", p.height_px},   {"dpi", p.dpi},
                      {"content_hash", p.content_hash}};
}

PageImage page_image_from_json(const json& j) {
  try {
    return PageImage{j.at("doc_id").get<std::string>(),  j.at("page_number").get<int>(),
                     j.at("image_path").get<std::string>(), j.at("width_px").get<int>(),
                     j.at("height_px").get<int>(),        j.at("dpi").get<int>(),
                     j.at("content_hash").get<std::string>()};
  } catch (const json::exception& e) {
    throw IoError(std::string("bad manifest row: ") + e.what());
  }
}

int dpi_for_zoom(double zoom) {
  if (!(zoom > 0) || !std::isfinite(zoom)) throw RenderFailure("zoom must be positive");
  return static_cast<int>(std::lround(kBaseDpi * zoom));
}

Manifest::Manifest(fs::path path) : path_(std::move(path)) {
  for (const auto& row : read_json_lines(path_)) entries_.push_back(page_image_from_json(row));
}

void Manifest::upsert(const PageImage& page) {
  std::lock_guard lock(mu_);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const PageImage& p) { return p.image_path == page.image_path; });
  if (it != entries_.end()) {
    if (*it == page) return;
    *it = page;
  } else {
    entries_.push_back(page);
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const PageImage& a, const PageImage& b) { return a.image_path < b.image_path; });
  save_locked();
}

void Manifest::save_locked() const {
  std::vector<json> rows;
  for (const auto& e : entries_) rows.push_back(to_json(e));
  write_json_lines(path_, rows);
}

std::vector<PageImage> Manifest::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::optional<PageImage> Manifest::find(const std::string& image_path) const {
  std::lock_guard lock(mu_);
  for (const auto& e : entries_) {
    if (e.image_path == image_path) return e;
  }
  return std::nullopt;
}

std::vector<std::string> Manifest::verify() const {
  std::vector<std::string> problems;
  std::map<std::string, int> rows;
  for (const auto& e : entries()) {
    if (++rows[e.image_path] > 1) problems.push_back("duplicate manifest row: " + e.image_path);
    fs::path file = root() / e.image_path;
    if (!fs::exists(file)) {
      problems.push_back("missing image: " + e.image_path);
      continue;
    }
    if (sha256_hex(read_file(file)) != e.content_hash) {
      problems.push_back("hash mismatch: " + e.image_path);
    }
  }
  if (fs::exists(root())) {
    for (const auto& f : fs::recursive_directory_iterator(root())) {
      if (!f.is_regular_file() || f.path().extension() != ".png") continue;
      auto rel = fs::relative(f.path(), root()).generic_string();
      if (!rows.contains(rel)) problems.push_back("image without manifest row: " + rel);
    }
  }
  return problems;
}

std::vector<int> scan_for_table_pages(const PdfDocument& pdf, const TableDetector& detector) {
  std::vector<int> pages;
  for (int n = 1; n <= pdf.page_count(); ++n) {
    PdfPage page;
    try {
      page = pdf.page(n);
    } catch (const Error& e) {
      throw UnreadableDocument("page " + std::to_string(n) + ": " + e.what());
    }
    if (detector.contains_table(interpret_page(pdf, page))) pages.push_back(n);
  }
  return pages;
}

PageImage render_page(const PdfDocument& pdf, int page_number, double zoom, Manifest& manifest) {
  const int dpi = dpi_for_zoom(zoom);
  PdfPage page = pdf.page(page_number);
  std::string png;
  GrayImage image;
  try {
    image = rasterize(interpret_page(pdf, page), dpi);
    png = encode_png(image, dpi);
  } catch (const RenderFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw RenderFailure("page " + std::to_string(page_number) + ": " + e.what());
  }

  PageImage out;
  out.doc_id = pdf.doc_id();
  out.page_number = page_number;
  out.image_path = pdf.doc_id() + "/table_page_" + std::to_string(page_number) + ".png";
  out.width_px = image.width;
  out.height_px = image.height;
  out.dpi = dpi;
  out.content_hash = sha256_hex(png);
  try {
    write_file_atomic(manifest.root() / out.image_path, png);
  } catch (const std::exception& e) {
    throw RenderFailure(e.what());
  }
  manifest.upsert(out);
  return out;
}

std::vector<PageImage> ingest_pdf(const PdfDocument& pdf, Manifest& manifest,
                                  const IngestOptions& options, const TableDetector& detector) {
  std::vector<int> pages = options.pages ? *options.pages : scan_for_table_pages(pdf, detector);
  std::vector<PageImage> out(pages.size());
  parallel_for(pages.size(), options.parallelism,
               [&](std::size_t i) { out[i] = render_page(pdf, pages[i], options.zoom, manifest); });
  return out;
}

std::vector<PageImage> import_images(const fs::path& images_dir, Manifest& manifest, int default_dpi) {
  if (!fs::is_directory(images_dir)) throw IoError("not a directory: " + images_dir.string());
  std::vector<fs::path> files;
  for (const auto& f : fs::recursive_directory_iterator(images_dir)) {
    if (f.is_regular_file() && f.path().extension() == ".png") files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  static const std::regex kPageNumber(R"((\d+)\.png$)");
  std::vector<PageImage> out;
  for (const auto& file : files) {
    auto rel = fs::relative(file, manifest.root());
    if (rel.empty() || rel.native().starts_with("..")) {
      throw IoError(file.string() + " is outside the manifest directory");
    }
    std::string bytes = read_file(file);
    PngInfo info = probe_png(bytes);
    PageImage p;
    p.doc_id = rel.has_parent_path() ? rel.parent_path().generic_string() : "images";
    std::smatch m;
    std::string name = file.filename().string();
    p.page_number = std::regex_search(name, m, kPageNumber) ? std::stoi(m[1]) : 1;
    p.image_path = rel.generic_string();
    p.width_px = info.width;
    p.height_px = info.height;
    p.dpi = info.dpi > 0 ? info.dpi : default_dpi;
    p.content_hash = sha256_hex(bytes);
    manifest.upsert(p);
    out.push_back(p);
  }
  return out;
}

}  // namespace tabqa::ingest
