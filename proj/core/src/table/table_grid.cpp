#include "tabqa/table/table_grid.hpp"

#include <algorithm>

#include "tabqa/error.hpp"

namespace tabqa::table {

std::vector<std::vector<int>> occupancy(const TableGrid& grid) {
  if (grid.n_rows <= 0 || grid.n_cols <= 0) {
    throw MalformedTable("table must have at least one row and one column");
  }
  std::vector<std::vector<int>> occ(grid.n_rows, std::vector<int>(grid.n_cols, -1));
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const Cell& c = grid.cells[i];
    if (c.rowspan < 1 || c.colspan < 1 || c.row < 0 || c.col < 0 ||
        c.row + c.rowspan > grid.n_rows || c.col + c.colspan > grid.n_cols) {
      throw MalformedTable("cell at (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                           ") leaves the table rectangle");
    }
    for (int r = c.row; r < c.row + c.rowspan; ++r) {
      for (int k = c.col; k < c.col + c.colspan; ++k) {
        if (occ[r][k] != -1) {
          throw MalformedTable("overlapping spans at (" + std::to_string(r) + "," +
                               std::to_string(k) + ")");
        }
        occ[r][k] = static_cast<int>(i);
      }
    }
  }
  return occ;
}

bool tiles_exactly(const TableGrid& grid) {
  try {
    for (const auto& row : occupancy(grid)) {
      if (std::find(row.begin(), row.end(), -1) != row.end()) return false;
    }
    return true;
  } catch (const MalformedTable&) {
    return false;
  }
}

void canonicalize(TableGrid& grid) {
  if (grid.header_row_count < 0 || grid.header_row_count > grid.n_rows) {
    throw MalformedTable("header_row_count out of range");
  }
  std::sort(grid.cells.begin(), grid.cells.end(), [](const Cell& a, const Cell& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (auto& c : grid.cells) c.is_header = c.row < grid.header_row_count;
  if (!tiles_exactly(grid)) throw MalformedTable("cell spans do not tile the table");
}

std::vector<std::vector<std::string>> expanded_text(const TableGrid& grid) {
  auto occ = occupancy(grid);
  std::vector<std::vector<std::string>> out(grid.n_rows, std::vector<std::string>(grid.n_cols));
  for (int r = 0; r < grid.n_rows; ++r) {
    for (int c = 0; c < grid.n_cols; ++c) {
      if (occ[r][c] >= 0) out[r][c] = grid.cells[occ[r][c]].text;
    }
  }
  return out;
}

json to_json(const TableGrid& grid) {
  json cells = json::array();
  for (const auto& c : grid.cells) {
    cells.push_back({{"row", c.row},
                     {"col", c.col},
                     {"rowspan", c.rowspan},
                     {"colspan", c.colspan},
                     {"text", c.text},
                     {"is_header", c.is_header}});
  }
  json j = {{"n_rows", grid.n_rows},
            {"n_cols", grid.n_cols},
            {"header_row_count", grid.header_row_count},
            {"cells", std::move(cells)}};
  if (grid.caption) j["caption"] = *grid.caption;
  return j;
}

TableGrid grid_from_json(const json& j) {
  try {
    TableGrid g;
    g.n_rows = j.at("n_rows").get<int>();
    g.n_cols = j.at("n_cols").get<int>();
    g.header_row_count = j.value("header_row_count", 0);
    if (j.contains("caption") && !j["caption"].is_null()) g.caption = j["caption"].get<std::string>();
    for (const auto& c : j.at("cells")) {
      g.cells.push_back(Cell{c.at("row").get<int>(), c.at("col").get<int>(),
                             c.value("rowspan", 1), c.value("colspan", 1),
                             c.value("text", std::string{}), c.value("is_header", false)});
    }
    canonicalize(g);
    return g;
  } catch (const json::exception& e) {
    throw MalformedTable(std::string("invalid table JSON: ") + e.what());
  }
}

}  // namespace tabqa::table
