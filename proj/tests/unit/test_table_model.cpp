#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/random_grid.hpp"
#include "tabqa/error.hpp"
#include "tabqa/table/latex.hpp"
#include "tabqa/table/lookup.hpp"

using namespace tabqa;
using namespace tabqa::table;

namespace {

TableGrid two_by_two() {
  TableGrid g;
  g.n_rows = 2;
  g.n_cols = 2;
  g.header_row_count = 1;
  g.cells = {{0, 0, 1, 1, "Item", true}, {0, 1, 1, 1, "Value", true}, {1, 0, 1, 1, "a", false},
             {1, 1, 1, 1, "1", false}};
  return g;
}

}  // namespace

TEST_CASE("canonicalize rejects overlap and gaps") {
  auto g = two_by_two();
  g.cells[0].colspan = 2;  // overlaps (0,1)
  CHECK_THROWS_AS(canonicalize(g), MalformedTable);

  auto gap = two_by_two();
  gap.cells.pop_back();
  CHECK_FALSE(tiles_exactly(gap));
  CHECK_THROWS_AS(canonicalize(gap), MalformedTable);

  auto out = two_by_two();
  out.cells[3].rowspan = 2;
  CHECK_THROWS_AS(occupancy(out), MalformedTable);
}

TEST_CASE("canonicalize sorts cells and derives header flags") {
  auto g = two_by_two();
  std::swap(g.cells[0], g.cells[3]);
  for (auto& c : g.cells) c.is_header = false;
  canonicalize(g);
  CHECK(g.cells.front().text == "Item");
  CHECK(g.cells[0].is_header);
  CHECK_FALSE(g.cells[3].is_header);
}

TEST_CASE("json round trip keeps spans and caption") {
  TableGrid g;
  g.n_rows = 3;
  g.n_cols = 3;
  g.header_row_count = 1;
  g.caption = "Minimum Nail Length";
  g.cells = {{0, 0, 1, 3, "Header", true}, {1, 0, 2, 1, "Group", false}, {1, 1, 1, 2, "x", false},
             {2, 1, 1, 1, "y", false},     {2, 2, 1, 1, "z", false}};
  canonicalize(g);
  CHECK(grid_from_json(to_json(g)) == g);
  auto text = expanded_text(g);
  CHECK(text[0][2] == "Header");
  CHECK(text[2][0] == "Group");
}

TEST_CASE("parses multicolumn, multirow and booktabs rules") {
  const char* src = R"(\begin{table}\caption{Fasteners}
\begin{tabular}{@{}l*{2}{c}@{}}
\toprule
\multirow{2}{*}{Element} & \multicolumn{2}{c}{Minimum length, mm} \\
\cmidrule(lr){2-3}
 & Common & Ring \\
\midrule
Board lumber & 51 & 45 \\
Panels \% & 45 & 38 \\
\bottomrule
\end{tabular}\end{table})";
  auto t = parse_latex_table(src);
  const auto& g = t.grid;
  CHECK(g.n_rows == 4);
  CHECK(g.n_cols == 3);
  CHECK(g.header_row_count == 2);
  auto text = expanded_text(g);
  CHECK(text[1][0] == "Element");
  CHECK(text[0][2] == "Minimum length, mm");
  CHECK(text[3][0] == "Panels %");
  CHECK(lookup_cell(g, {"board lumber"}, {"Ring"}) == "45");
  CHECK(lookup_cell(g, {"Panels %"}, {"common"}) == "45");
}

TEST_CASE("unknown commands are dropped with a warning") {
  auto t = parse_latex_table("\\begin{tabular}{ll}\\textbf{A} & \\emph{B}\\\\ 1 & 2\\\\\\end{tabular}");
  CHECK(expanded_text(t.grid)[0][0] == "A");
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("malformed sources throw") {
  CHECK_THROWS_AS(parse_latex_table("no table here"), MalformedTable);
  CHECK_THROWS_AS(parse_latex_table("\\begin{tabular}{ll} a & b \\\\"), MalformedTable);
  CHECK_THROWS_AS(parse_latex_table("\\begin{tabular}{ll} a & b & c \\\\ \\end{tabular}"), MalformedTable);
  CHECK_THROWS_AS(
      parse_latex_table("\\begin{tabular}{l} \\begin{tabular}{l} x \\end{tabular} \\\\ \\end{tabular}"),
      MalformedTable);
}

TEST_CASE("header override") {
  const char* src = "\\begin{tabular}{ll}\\hline a & b\\\\\\hline c & d\\\\ e & f\\\\\\hline\\end{tabular}";
  CHECK(parse_latex_table(src).grid.header_row_count == 1);
  LatexParseOptions opts;
  opts.header_rows = 2;
  CHECK(parse_latex_table(src, opts).grid.header_row_count == 2);
}

TEST_CASE("serializer escapes specials") {
  auto g = two_by_two();
  g.cells[2].text = "50% & {x}_1 #2 $3 ~ ^ \\";
  canonicalize(g);
  auto back = parse_latex_table(serialize_latex(g)).grid;
  CHECK(back == g);
}

TEST_CASE("lookup errors") {
  auto g = two_by_two();
  CHECK_THROWS_AS(lookup_cell(g, {"missing"}, {"Value"}), NoMatch);
  CHECK_THROWS_AS(lookup_cell(g, {"a"}, {"missing"}), NoMatch);
  CHECK_THROWS_AS(lookup_cell(g, {"a", 5}, {"Value"}), NoMatch);
  g.n_rows = 3;
  g.cells.push_back({2, 0, 1, 1, "a", false});
  g.cells.push_back({2, 1, 1, 1, "2", false});
  CHECK_THROWS_AS(lookup_cell(g, {"a"}, {"Value"}), AmbiguousMatch);
}

TEST_CASE("spanning key cells match every covered row") {
  TableGrid g;
  g.n_rows = 3;
  g.n_cols = 2;
  g.header_row_count = 1;
  g.cells = {{0, 0, 1, 1, "k", true}, {0, 1, 1, 1, "v", true}, {1, 0, 2, 1, "shared", false},
             {1, 1, 1, 1, "1", false}, {2, 1, 1, 1, "2", false}};
  canonicalize(g);
  CHECK_THROWS_AS(lookup_cell(g, {"shared"}, {"v"}), AmbiguousMatch);
  CHECK(lookup_cell(g, {"2", 1}, {"v"}) == "2");
}

TEST_CASE("random grids agree with the occupancy oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    auto g = testgen::random_grid(rng, 6, 3);
    canonicalize(g);
    auto occ = occupancy(g);
    for (int r = 0; r < g.n_rows; ++r) {
      for (int c = 0; c < g.n_cols; ++c) {
        REQUIRE(occ[r][c] >= 0);
        CHECK(g.cells[occ[r][c]].text == *oracle::text_at(g, r, c));
      }
    }
    CHECK(parse_latex_table(serialize_latex(g)).grid == g);
  }
}
