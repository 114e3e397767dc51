#pragma once

#include <vector>

#include "tabqa/ingest/pdf_document.hpp"

namespace tabqa::ingest {

struct Point {
  double x = 0;
  double y = 0;
};

/// A painted path in page space (points, after the CTM). Curves are flattened.
struct PaintedPath {
  std::vector<std::vector<Point>> subpaths;
  std::vector<bool> closed;
  bool stroke = false;
  bool fill = false;
  bool even_odd = false;
  double line_width = 1.0;  // page-space points
  double stroke_gray = 0.0; // 0 black .. 1 white
  double fill_gray = 0.0;
};

/// Approximate extent of a run of shown text (glyph outlines are not rendered).
struct TextBox {
  Point corners[4];
  double gray = 0.0;
};

struct PageGraphics {
  PdfBox media_box;
  std::vector<PaintedPath> paths;
  std::vector<TextBox> text;
  std::vector<TextBox> images;  // placed image XObjects / inline images
};

/// Interprets a page's content stream (and nested form XObjects).
PageGraphics interpret_page(const PdfDocument& doc, const PdfPage& page);

}  // namespace tabqa::ingest
