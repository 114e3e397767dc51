#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tabqa/util.hpp"

namespace tabqa::table {

/// One cell anchored at its top-left (row, col), covering rowspan x colspan
/// positions of the grid.
struct Cell {
  int row = 0;
  int col = 0;
  int rowspan = 1;
  int colspan = 1;
  std::string text;
  bool is_header = false;

  bool covers(int r, int c) const {
    return r >= row && r < row + rowspan && c >= col && c < col + colspan;
  }
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct TableGrid {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<Cell> cells;  // kept sorted by (row, col)
  std::optional<std::string> caption;
  int header_row_count = 0;

  friend bool operator==(const TableGrid&, const TableGrid&) = default;
};

/// n_rows x n_cols matrix of indices into `grid.cells`; -1 marks a gap.
/// Throws MalformedTable when spans overlap or leave the rectangle.
std::vector<std::vector<int>> occupancy(const TableGrid& grid);

/// True iff the cell spans tile the rectangle exactly once.
bool tiles_exactly(const TableGrid& grid);

/// Sorts cells, recomputes `is_header` from `header_row_count` and checks
/// every invariant. Throws MalformedTable.
void canonicalize(TableGrid& grid);

/// Text at every (row, col), with spanning cells repeated over their area.
std::vector<std::vector<std::string>> expanded_text(const TableGrid& grid);

json to_json(const TableGrid& grid);
TableGrid grid_from_json(const json& j);

}  // namespace tabqa::table
