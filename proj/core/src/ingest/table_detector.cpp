#include "tabqa/ingest/table_detector.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tabqa::ingest {
namespace {

// An axis-aligned rule: `level` is the fixed coordinate, [lo, hi] the extent.
struct Rule {
  double level;
  double lo;
  double hi;
};

int count_levels(std::vector<Rule> rules, double tol) {
  std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) { return a.level < b.level; });
  int levels = 0;
  double last = 0;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i == 0 || rules[i].level - last > tol) ++levels;
    last = rules[i].level;
  }
  return levels;
}

}  // namespace

LineGridDetector::Stats LineGridDetector::analyze(const PageGraphics& page) const {
  std::vector<Rule> horizontal, vertical;
  auto add_segment = [&](Point a, Point b) {
    double dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y);
    if (dy <= params_.axis_tolerance && dx >= params_.min_rule_length) {
      horizontal.push_back({(a.y + b.y) / 2, std::min(a.x, b.x), std::max(a.x, b.x)});
    } else if (dx <= params_.axis_tolerance && dy >= params_.min_rule_length) {
      vertical.push_back({(a.x + b.x) / 2, std::min(a.y, b.y), std::max(a.y, b.y)});
    }
  };

  for (const auto& path : page.paths) {
    for (std::size_t s = 0; s < path.subpaths.size(); ++s) {
      const auto& sub = path.subpaths[s];
      if (path.stroke) {
        for (std::size_t i = 0; i + 1 < sub.size(); ++i) add_segment(sub[i], sub[i + 1]);
        if (path.closed[s] && sub.size() > 2) add_segment(sub.back(), sub.front());
      } else if (path.fill && sub.size() >= 4) {
        double x0 = sub[0].x, x1 = sub[0].x, y0 = sub[0].y, y1 = sub[0].y;
        for (const auto& p : sub) {
          x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
          y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
        }
        if (y1 - y0 <= params_.thin_fill && x1 - x0 >= params_.min_rule_length) {
          horizontal.push_back({(y0 + y1) / 2, x0, x1});
        } else if (x1 - x0 <= params_.thin_fill && y1 - y0 >= params_.min_rule_length) {
          vertical.push_back({(x0 + x1) / 2, y0, y1});
        }
      }
    }
  }

  Stats stats;
  stats.horizontal_levels = count_levels(horizontal, params_.merge_tolerance);
  stats.vertical_levels = count_levels(vertical, params_.merge_tolerance);
  const double tol = params_.merge_tolerance;
  for (const auto& h : horizontal) {
    for (const auto& v : vertical) {
      if (v.level >= h.lo - tol && v.level <= h.hi + tol && h.level >= v.lo - tol &&
          h.level <= v.hi + tol) {
        ++stats.intersections;
      }
    }
  }
  return stats;
}

bool LineGridDetector::contains_table(const PageGraphics& page) const {
  Stats s = analyze(page);
  return s.horizontal_levels >= params_.min_horizontal_levels &&
         s.vertical_levels >= params_.min_vertical_levels &&
         s.intersections >= params_.min_intersections;
}

}  // namespace tabqa::ingest
