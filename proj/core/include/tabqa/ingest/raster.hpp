#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabqa/ingest/page_graphics.hpp"

namespace tabqa::ingest {

/// 8-bit grayscale raster, row-major, 255 = white.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Rasterizes vector paths, text extents and image placements at `dpi`.
/// Output dimensions are round(page size in inches * dpi).
GrayImage rasterize(const PageGraphics& graphics, int dpi);

/// Lossless PNG encoding with fixed settings, so equal images give equal bytes.
std::string encode_png(const GrayImage& image, int dpi);

struct PngInfo {
  int width = 0;
  int height = 0;
  int dpi = 0;  // 0 when the file carries no pHYs chunk
};

/// Reads dimensions (and pHYs resolution) without decoding pixel data.
/// Throws IoError for a non-PNG.
PngInfo probe_png(std::string_view bytes);

}  // namespace tabqa::ingest
