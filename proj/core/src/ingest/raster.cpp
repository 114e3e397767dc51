#include "tabqa/ingest/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "tabqa/error.hpp"

namespace tabqa::ingest {
namespace {

struct DevicePoint {
  double x;
  double y;
};

class Canvas {
 public:
  Canvas(GrayImage& img) : img_(img) {}

  // Scanline polygon fill sampled at pixel centres.
  void fill(const std::vector<std::vector<DevicePoint>>& polys, bool even_odd, std::uint8_t value) {
    double min_y = 1e300, max_y = -1e300;
    for (const auto& poly : polys) {
      for (const auto& p : poly) {
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
      }
    }
    if (min_y > max_y) return;
    int y0 = std::max(0, static_cast<int>(std::floor(min_y)));
    int y1 = std::min(img_.height - 1, static_cast<int>(std::ceil(max_y)));
    struct Crossing {
      double x;
      int winding;
    };
    std::vector<Crossing> xs;
    for (int y = y0; y <= y1; ++y) {
      double sy = y + 0.5;
      xs.clear();
      for (const auto& poly : polys) {
        std::size_t n = poly.size();
        if (n < 2) continue;
        for (std::size_t i = 0; i < n; ++i) {
          DevicePoint a = poly[i];
          DevicePoint b = poly[(i + 1) % n];
          if (a.y == b.y) continue;
          bool up = a.y < b.y;
          double lo = up ? a.y : b.y;
          double hi = up ? b.y : a.y;
          if (sy < lo || sy >= hi) continue;
          double t = (sy - a.y) / (b.y - a.y);
          xs.push_back({a.x + t * (b.x - a.x), up ? 1 : -1});
        }
      }
      std::sort(xs.begin(), xs.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
      int winding = 0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        winding += even_odd ? 1 : xs[i].winding;
        bool inside = even_odd ? (winding % 2 != 0) : (winding != 0);
        if (!inside) continue;
        span(y, xs[i].x, xs[i + 1].x, value);
      }
    }
  }

  void stroke_segment(DevicePoint a, DevicePoint b, double width, std::uint8_t value) {
    double half = std::max(width, 1.0) / 2.0;
    double dx = b.x - a.x, dy = b.y - a.y;
    double len = std::hypot(dx, dy);
    std::vector<DevicePoint> quad;
    if (len < 1e-9) {
      quad = {{a.x - half, a.y - half}, {a.x + half, a.y - half}, {a.x + half, a.y + half},
              {a.x - half, a.y + half}};
    } else {
      // Square caps: extend half a width past both ends.
      double ux = dx / len * half, uy = dy / len * half;
      double nx = -uy, ny = ux;
      quad = {{a.x - ux + nx, a.y - uy + ny}, {b.x + ux + nx, b.y + uy + ny},
              {b.x + ux - nx, b.y + uy - ny}, {a.x - ux - nx, a.y - uy - ny}};
    }
    fill({quad}, false, value);
  }

 private:
  void span(int y, double xa, double xb, std::uint8_t value) {
    int x0 = std::max(0, static_cast<int>(std::ceil(xa - 0.5)));
    int x1 = std::min(img_.width - 1, static_cast<int>(std::ceil(xb - 0.5)) - 1);
    auto row = img_.pixels.begin() + static_cast<std::ptrdiff_t>(y) * img_.width;
    for (int x = x0; x <= x1; ++x) row[x] = std::min(row[x], value);
  }

  GrayImage& img_;
};

std::uint8_t to_byte(double gray) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(gray, 0.0, 1.0) * 255.0));
}

void png_write_to_string(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void png_flush_noop(png_structp) {}

std::uint32_t be32(std::string_view b, std::size_t off) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3]));
}

}  // namespace

GrayImage rasterize(const PageGraphics& graphics, int dpi) {
  const double scale = dpi / 72.0;
  const PdfBox& box = graphics.media_box;
  GrayImage img;
  img.width = static_cast<int>(std::lround(box.width() * scale));
  img.height = static_cast<int>(std::lround(box.height() * scale));
  if (img.width <= 0 || img.height <= 0) throw RenderFailure("empty page box");
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 255);
  Canvas canvas(img);

  auto to_device = [&](Point p) {
    return DevicePoint{(p.x - box.x0) * scale, (box.y1 - p.y) * scale};
  };
  auto quad = [&](const TextBox& t) {
    std::vector<DevicePoint> q;
    for (const auto& c : t.corners) q.push_back(to_device(c));
    return q;
  };

  for (const auto& img_box : graphics.images) canvas.fill({quad(img_box)}, false, to_byte(img_box.gray));
  for (const auto& path : graphics.paths) {
    if (path.fill) {
      std::vector<std::vector<DevicePoint>> polys;
      for (const auto& sub : path.subpaths) {
        std::vector<DevicePoint> poly;
        for (const auto& p : sub) poly.push_back(to_device(p));
        polys.push_back(std::move(poly));
      }
      canvas.fill(polys, path.even_odd, to_byte(path.fill_gray));
    }
    if (path.stroke) {
      double width = path.line_width * scale;
      for (std::size_t s = 0; s < path.subpaths.size(); ++s) {
        const auto& sub = path.subpaths[s];
        for (std::size_t i = 0; i + 1 < sub.size(); ++i) {
          canvas.stroke_segment(to_device(sub[i]), to_device(sub[i + 1]), width, to_byte(path.stroke_gray));
        }
        if (path.closed[s] && sub.size() > 2) {
          canvas.stroke_segment(to_device(sub.back()), to_device(sub.front()), width,
                                to_byte(path.stroke_gray));
        }
      }
    }
  }
  // Text is drawn as mid-gray bars over its estimated extent.
  for (const auto& t : graphics.text) {
    canvas.fill({quad(t)}, false, static_cast<std::uint8_t>(std::max<int>(to_byte(t.gray), 140)));
  }
  return img;
}

std::string encode_png(const GrayImage& image, int dpi) {
  std::string out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw RenderFailure("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw RenderFailure("PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_write_to_string, png_flush_noop);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  auto ppm = static_cast<png_uint_32>(std::lround(dpi / 0.0254));
  png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    auto row = const_cast<png_bytep>(image.pixels.data() + static_cast<std::size_t>(y) * image.width);
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

PngInfo probe_png(std::string_view bytes) {
  static constexpr std::string_view kSignature("\x89PNG\r\n\x1a\n", 8);
  if (bytes.size() < 33 || bytes.substr(0, 8) != kSignature || bytes.substr(12, 4) != "IHDR") {
    throw IoError("not a PNG file");
  }
  PngInfo info;
  info.width = static_cast<int>(be32(bytes, 16));
  info.height = static_cast<int>(be32(bytes, 20));
  std::size_t pos = 8;
  while (pos + 12 <= bytes.size()) {
    std::uint32_t len = be32(bytes, pos);
    std::string_view type = bytes.substr(pos + 4, 4);
    if (type == "pHYs" && len == 9 && pos + 17 <= bytes.size() && bytes[pos + 16] == 1) {
      info.dpi = static_cast<int>(std::lround(be32(bytes, pos + 8) * 0.0254));
    }
    if (type == "IDAT" || type == "IEND") break;
    pos += 12 + len;
  }
  return info;
}

}  // namespace tabqa::ingest
