#pragma once

#include <string>

#include "tabqa/table/table_grid.hpp"

namespace tabqa::table {

/// Selects body rows whose text in `key_col` equals `text`.
struct RowKey {
  std::string text;
  int key_col = 0;
};

/// Selects columns with a header cell (at any header level) equal to `text`.
struct ColumnKey {
  std::string text;
};

/// Returns the text at the intersection of the uniquely matched row and
/// column. Matching is case-insensitive on whitespace-normalized text and
/// sees spanning cells at every position they cover. Tables without header
/// rows use their first row as the header.
///
/// Throws NoMatch or AmbiguousMatch.
std::string lookup_cell(const TableGrid& grid, const RowKey& row, const ColumnKey& col);

/// Rows used as column headers by lookup_cell.
int effective_header_rows(const TableGrid& grid);

}  // namespace tabqa::table
