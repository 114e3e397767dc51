#include "tabqa/table/lookup.hpp"

#include <vector>

#include "tabqa/error.hpp"

namespace tabqa::table {
namespace {

std::string match_key(std::string_view text) { return to_lower_ascii(normalize_whitespace(text)); }

}  // namespace

int effective_header_rows(const TableGrid& grid) {
  return grid.header_row_count > 0 ? grid.header_row_count : std::min(1, grid.n_rows);
}

std::string lookup_cell(const TableGrid& grid, const RowKey& row, const ColumnKey& col) {
  if (row.key_col < 0 || row.key_col >= grid.n_cols) {
    throw NoMatch("key column " + std::to_string(row.key_col) + " outside table");
  }
  const auto text = expanded_text(grid);
  const int header_rows = effective_header_rows(grid);
  const std::string row_key = match_key(row.text);
  const std::string col_key = match_key(col.text);

  std::vector<int> rows;
  for (int r = header_rows; r < grid.n_rows; ++r) {
    if (match_key(text[r][row.key_col]) == row_key) rows.push_back(r);
  }
  std::vector<int> cols;
  for (int c = 0; c < grid.n_cols; ++c) {
    for (int r = 0; r < header_rows; ++r) {
      if (match_key(text[r][c]) == col_key) {
        cols.push_back(c);
        break;
      }
    }
  }

  if (rows.empty()) throw NoMatch("no row keyed '" + row.text + "'");
  if (cols.empty()) throw NoMatch("no column headed '" + col.text + "'");
  if (rows.size() > 1) {
    throw AmbiguousMatch(std::to_string(rows.size()) + " rows keyed '" + row.text + "'");
  }
  if (cols.size() > 1) {
    throw AmbiguousMatch(std::to_string(cols.size()) + " columns headed '" + col.text + "'");
  }
  return text[rows[0]][cols[0]];
}

}  // namespace tabqa::table
