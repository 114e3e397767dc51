#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/table/table_grid.hpp"

namespace tabqa::table {

// Supported LaTeX subset
// ----------------------
//   environments  tabular, tabular*, tabularx, tabulary, longtable, array
//   column spec   l c r p{} m{} b{} X S w{}{} W{}{}, `|`, @{} !{} >{} <{}, *{n}{...}
//   structure     & and \\ (with optional [len]), \tabularnewline
//   rules         \hline \toprule \midrule \bottomrule \cline \cmidrule
//                 \hhline \specialrule \addlinespace and longtable's \endhead family
//   spans         \multicolumn{n}{spec}{...}, \multirow[pos]{n}[bigstrut]{width}[fixup]{...}
//   text          escaped specials (\% \& \# \_ \{ \} \$), \textbackslash,
//                 \textasciitilde, \textasciicircum, ~, inline math kept verbatim
//
// Any other command is removed and reported in `warnings`; the text of its
// arguments stays in the cell. Nested tabulars are rejected.

struct LatexTable {
  std::string source;
  TableGrid grid;
  std::vector<std::string> warnings;
};

struct LatexParseOptions {
  /// Overrides header detection (rows above the first full-width rule that
  /// separates two rows).
  std::optional<int> header_rows;
};

/// Throws MalformedTable for an unbalanced/absent environment or a row with
/// more cells than the column spec declares.
LatexTable parse_latex_table(std::string_view source, const LatexParseOptions& options = {});

/// Emits a `tabular` whose re-parse yields a grid equal to `grid`
/// (for any grid with header_row_count < n_rows).
std::string serialize_latex(const TableGrid& grid);

}  // namespace tabqa::table
