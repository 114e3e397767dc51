#pragma once

#include <string>

#include "tabqa/ingest/page_graphics.hpp"

namespace tabqa::ingest {

class TableDetector {
 public:
  virtual ~TableDetector() = default;
  virtual bool contains_table(const PageGraphics& page) const = 0;
  virtual std::string name() const = 0;
};

/// Flags pages whose vector content draws a ruled grid: enough distinct
/// horizontal and vertical rules crossing each other. Rules may be stroked
/// segments, rectangle edges or thin filled rectangles.
class LineGridDetector final : public TableDetector {
 public:
  struct Params {
    double min_rule_length = 10.0;    // points
    double axis_tolerance = 1.0;      // max off-axis drift of a rule, points
    double thin_fill = 3.0;           // filled rects thinner than this are rules
    double merge_tolerance = 2.0;     // rules closer than this are one level
    int min_horizontal_levels = 2;
    int min_vertical_levels = 2;
    int min_intersections = 6;
  };

  LineGridDetector() = default;
  explicit LineGridDetector(Params params) : params_(params) {}

  bool contains_table(const PageGraphics& page) const override;
  std::string name() const override { return "line-grid"; }

  struct Stats {
    int horizontal_levels = 0;
    int vertical_levels = 0;
    int intersections = 0;
  };
  Stats analyze(const PageGraphics& page) const;

 private:
  Params params_;
};

}  // namespace tabqa::ingest
