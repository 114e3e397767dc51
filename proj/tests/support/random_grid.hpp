#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tabqa/table/table_grid.hpp"

namespace tabqa::testgen {

// Cell texts mix plain words, numbers with units and LaTeX specials that the
// serializer has to escape.
inline std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "Group A", "Division 3", "158 mm", "2500 m2", "45 min", "51 mm", "spiral", "common",
      "3.64 m", "Type S", "50% max", "a & b", "x_1", "#4 bar", "{braced}", "$5", "~ approx",
      "2^3", "back\\slash", "Board lumber 184 mm or less wide", "-", "n/a"};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(words.size()) - 1);
  std::uniform_int_distribution<int> coin(0, 9);
  const int roll = coin(rng);
  if (roll == 0) return "";
  std::string t = words[pick(rng)];
  if (roll < 5) t += " " + std::to_string(std::uniform_int_distribution<int>(0, 999)(rng));
  return t;
}

// Tiles an n_rows x n_cols rectangle with spans up to max_span in each
// direction. Row spans do not cross the header boundary.
inline table::TableGrid random_grid(std::mt19937_64& rng, int max_dim = 8, int max_span = 3) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  table::TableGrid g;
  g.n_rows = std::max(2, dim(rng));
  g.n_cols = dim(rng);
  g.header_row_count = std::uniform_int_distribution<int>(0, std::min(2, g.n_rows - 1))(rng);
  std::vector<std::vector<bool>> used(g.n_rows, std::vector<bool>(g.n_cols, false));
  for (int r = 0; r < g.n_rows; ++r) {
    const int band_end = r < g.header_row_count ? g.header_row_count : g.n_rows;
    for (int c = 0; c < g.n_cols; ++c) {
      if (used[r][c]) continue;
      int free_cols = 0;
      while (c + free_cols < g.n_cols && !used[r][c + free_cols]) ++free_cols;
      const int cs = std::uniform_int_distribution<int>(1, std::min(max_span, free_cols))(rng);
      const int rs = std::uniform_int_distribution<int>(1, std::min(max_span, band_end - r))(rng);
      for (int i = 0; i < rs; ++i)
        for (int j = 0; j < cs; ++j) used[r + i][c + j] = true;
      table::Cell cell;
      cell.row = r;
      cell.col = c;
      cell.rowspan = rs;
      cell.colspan = cs;
      cell.text = random_text(rng);
      cell.is_header = r < g.header_row_count;
      g.cells.push_back(std::move(cell));
    }
  }
  return g;
}

}  // namespace tabqa::testgen
