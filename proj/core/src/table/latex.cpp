#include "tabqa/table/latex.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "tabqa/error.hpp"

namespace tabqa::table {
namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Number of consecutive backslashes immediately before `pos`.
std::size_t preceding_backslashes(std::string_view s, std::size_t pos) {
  std::size_t n = 0;
  while (pos > n && s[pos - n - 1] == '\\') ++n;
  return n;
}

bool escaped(std::string_view s, std::size_t pos) { return preceding_backslashes(s, pos) % 2 == 1; }

std::string strip_comments(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == '%' && !escaped(src, i)) {
      while (i < src.size() && src[i] != '\n') ++i;
      if (i < src.size()) out.push_back('\n');
      continue;
    }
    out.push_back(src[i]);
  }
  return out;
}

// Cursor over LaTeX source with the handful of lexical helpers the parser needs.
class Cursor {
 public:
  explicit Cursor(std::string_view s, std::size_t pos = 0) : s_(s), pos_(pos) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t n = 1) { pos_ = std::min(pos_ + n, s_.size()); }
  bool starts_with(std::string_view p) const { return s_.substr(pos_).starts_with(p); }

  void skip_ws() {
    while (!done() && is_space(s_[pos_])) ++pos_;
  }

  // Reads a balanced {...} group (after optional whitespace) and returns its
  // inner text; std::nullopt if the next token is not a group.
  std::optional<std::string_view> group() {
    std::size_t save = pos_;
    skip_ws();
    if (peek() != '{') {
      pos_ = save;
      return std::nullopt;
    }
    std::size_t start = pos_ + 1;
    int depth = 0;
    for (; pos_ < s_.size(); ++pos_) {
      char c = s_[pos_];
      if (c == '\\') {
        ++pos_;
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) {
        std::string_view inner = s_.substr(start, pos_ - start);
        ++pos_;
        return inner;
      }
    }
    throw MalformedTable("unbalanced braces");
  }

  std::string_view require_group(std::string_view what) {
    auto g = group();
    if (!g) throw MalformedTable("expected {" + std::string(what) + "}");
    return *g;
  }

  // Reads an optional [...] or (...) argument delimited by `open`/`close`.
  std::optional<std::string_view> optional(char open = '[', char close = ']') {
    std::size_t save = pos_;
    skip_ws();
    if (peek() != open) {
      pos_ = save;
      return std::nullopt;
    }
    std::size_t start = pos_ + 1;
    int depth = 0;
    for (; pos_ < s_.size(); ++pos_) {
      char c = s_[pos_];
      if (c == '{') ++depth;
      if (c == '}') --depth;
      if (c == close && depth == 0) {
        std::string_view inner = s_.substr(start, pos_ - start);
        ++pos_;
        return inner;
      }
    }
    throw MalformedTable("unterminated optional argument");
  }

  // At a backslash: consumes and returns the control word or symbol name.
  std::string command() {
    ++pos_;  // '\'
    std::size_t start = pos_;
    if (!done() && is_letter(s_[pos_])) {
      while (!done() && is_letter(s_[pos_])) ++pos_;
      if (!done() && s_[pos_] == '*') ++pos_;
    } else if (!done()) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

 private:
  std::string_view s_;
  std::size_t pos_;
};

const std::set<std::string, std::less<>> kEnvironments = {
    "tabular", "tabular*", "tabularx", "tabulary", "longtable", "array"};

// Control words that stand for a literal character.
const std::map<std::string, std::string, std::less<>> kTextSymbols = {
    {"textbackslash", "\\"},   {"textasciitilde", "~"}, {"textasciicircum", "^"},
    {"textbar", "|"},          {"textless", "<"},       {"textgreater", ">"},
    {"textdegree", "\u00b0"},  {"textmu", "\u00b5"},    {"textendash", "-"},
    {"textemdash", "-"},       {"ldots", "..."},        {"dots", "..."},
    {"textperiodcentered", "\u00b7"}};

// Commands whose arguments are not cell content: all their groups are dropped.
const std::set<std::string, std::less<>> kNonContent = {
    "cellcolor", "rowcolor", "color", "vspace", "vspace*", "hspace", "hspace*", "label",
    "setlength", "rule", "arraybackslash", "centering", "raggedright", "raggedleft",
    "rowcolors", "addlinespace", "vfill", "hfill", "strut", "bigstrut", "noindent"};

// Commands with leading non-content groups: name -> number of groups to skip.
const std::map<std::string, int, std::less<>> kSkipLeading = {
    {"textcolor", 1}, {"parbox", 1}, {"raisebox", 1}, {"makebox", 0}, {"href", 1},
    {"colorbox", 1},  {"resizebox", 2}, {"scalebox", 1}, {"rotatebox", 1}};

bool is_rule_command(std::string_view name) {
  static const std::set<std::string, std::less<>> rules = {
      "hline", "toprule", "midrule", "bottomrule", "cline", "cmidrule", "hhline",
      "specialrule", "addlinespace", "endhead", "endfirsthead", "endfoot", "endlastfoot",
      "noalign", "morecmidrules", "hdashline", "cdashline", "firsthline", "lasthline"};
  return rules.contains(name);
}

bool is_full_rule(std::string_view name) {
  return name == "hline" || name == "toprule" || name == "midrule" || name == "bottomrule" ||
         name == "hhline" || name == "specialrule" || name == "hdashline" ||
         name == "firsthline" || name == "lasthline";
}

class TextCleaner {
 public:
  explicit TextCleaner(std::vector<std::string>& warnings) : warnings_(warnings) {}

  std::string clean(std::string_view raw) {
    std::string out;
    append(raw, out);
    return normalize_whitespace(out);
  }

 private:
  void warn(const std::string& msg) {
    if (std::find(warnings_.begin(), warnings_.end(), msg) == warnings_.end()) {
      warnings_.push_back(msg);
    }
  }

  void append(std::string_view raw, std::string& out) {
    Cursor cur(raw);
    while (!cur.done()) {
      char c = cur.peek();
      if (c == '$') {
        copy_math(raw, cur, out);
      } else if (c == '\\') {
        handle_command(raw, cur, out);
      } else if (c == '{' || c == '}') {
        cur.advance();
      } else if (c == '~') {
        out.push_back(' ');
        cur.advance();
      } else {
        out.push_back(c);
        cur.advance();
      }
    }
  }

  static void copy_math(std::string_view raw, Cursor& cur, std::string& out) {
    std::size_t start = cur.pos();
    bool display = raw.substr(start).starts_with("$$");
    std::size_t open = display ? 2 : 1;
    std::size_t i = start + open;
    while (i < raw.size()) {
      if (raw[i] == '$' && !escaped(raw, i)) break;
      ++i;
    }
    if (i >= raw.size()) {
      // Lone dollar: literal.
      out.push_back('$');
      cur.advance();
      return;
    }
    std::size_t end = i + (display && i + 1 < raw.size() && raw[i + 1] == '$' ? 2 : 1);
    out.append(raw.substr(start, end - start));
    cur.advance(end - start);
  }

  void handle_command(std::string_view raw, Cursor& cur, std::string& out) {
    if (cur.starts_with("\\(")) {
      auto close = raw.find("\\)", cur.pos() + 2);
      if (close != std::string_view::npos) {
        out += '$';
        out.append(raw.substr(cur.pos() + 2, close - cur.pos() - 2));
        out += '$';
        cur.advance(close + 2 - cur.pos());
        return;
      }
    }
    std::string name = cur.command();
    if (name.empty()) return;
    if (name.size() == 1 && !is_letter(name[0])) {
      static const std::string_view kLiteral = "%&#_{}$";
      if (kLiteral.find(name[0]) != std::string_view::npos) {
        out.push_back(name[0]);
      } else if (name == "\\" || name == "," || name == ";" || name == ":" || name == " " ||
                 name == "\n" || name == "\t") {
        if (name == "\\") cur.optional();
        out.push_back(' ');
      } else if (name == "!" || name == "/" || name == "-") {
        // kerning and hyphenation hints
      } else {
        warn("stripped \\" + name);
      }
      return;
    }
    if (auto sym = kTextSymbols.find(name); sym != kTextSymbols.end()) {
      auto save = cur.pos();
      cur.skip_ws();
      if (!cur.starts_with("{}")) {
        cur = Cursor(raw, save);
      } else {
        cur.advance(2);
      }
      out += sym->second;
      return;
    }
    if (name == "times" || name == "pm" || name == "le" || name == "ge" || name == "leq" ||
        name == "geq") {
      static const std::map<std::string, std::string, std::less<>> math_text = {
          {"times", "\u00d7"}, {"pm", "\u00b1"}, {"le", "\u2264"},
          {"ge", "\u2265"},    {"leq", "\u2264"}, {"geq", "\u2265"}};
      out += math_text.at(name);
      return;
    }
    if (is_rule_command(name)) {
      warn("rule \\" + name + " inside a cell ignored");
      skip_rule_args(cur, name);
      return;
    }
    warn("stripped \\" + name);
    while (cur.optional()) {
    }
    if (kNonContent.contains(name)) {
      while (cur.group()) {
      }
      return;
    }
    int skip = 0;
    if (auto it = kSkipLeading.find(name); it != kSkipLeading.end()) skip = it->second;
    bool first = true;
    while (true) {
      auto g = cur.group();
      if (!g) break;
      if (skip > 0) {
        --skip;
        while (cur.optional()) {
        }
        continue;
      }
      if (!first) out.push_back(' ');
      first = false;
      append(*g, out);
    }
  }

 public:
  static void skip_rule_args(Cursor& cur, std::string_view name) {
    if (name == "cmidrule") {
      cur.optional('(', ')');
      cur.optional();
      cur.group();
    } else if (name == "cline" || name == "hhline" || name == "noalign" ||
               name == "cdashline") {
      cur.group();
    } else if (name == "specialrule") {
      cur.group();
      cur.group();
      cur.group();
    } else {
      cur.optional();
    }
  }

 private:
  std::vector<std::string>& warnings_;
};

int count_columns(std::string_view spec, std::vector<std::string>& warnings) {
  Cursor cur(spec);
  int count = 0;
  while (!cur.done()) {
    char c = cur.peek();
    cur.advance();
    if (is_space(c) || c == '|' || c == ':') continue;
    switch (c) {
      case 'l': case 'c': case 'r': case 'X': case 'S': case 'L': case 'C': case 'R':
      case 'J': case 'Y': case 'Z': case 'K':
        ++count;
        break;
      case 'p': case 'm': case 'b':
        ++count;
        cur.require_group("column width");
        break;
      case 'w': case 'W':
        ++count;
        cur.require_group("column alignment");
        cur.require_group("column width");
        break;
      case '@': case '!': case '>': case '<':
        cur.require_group("column decoration");
        break;
      case '*': {
        auto n = cur.require_group("repeat count");
        auto inner = cur.require_group("repeated spec");
        int reps = 0;
        try {
          reps = std::stoi(std::string(n));
        } catch (const std::exception&) {
          throw MalformedTable("bad repeat count in column spec");
        }
        count += reps * count_columns(inner, warnings);
        break;
      }
      default:
        if (is_letter(c)) {
          warnings.push_back(std::string("unknown column type '") + c + "' counted as a column");
          ++count;
          cur.group();
        } else {
          warnings.push_back(std::string("ignored column spec character '") + c + "'");
        }
    }
  }
  return count;
}

struct SourceRow {
  std::string_view text;
  bool full_rule_before = false;
};

// Splits at `sep` occurring at brace depth 0 outside math. `sep` is either
// "&" or "\\".
std::vector<std::size_t> split_points(std::string_view body, std::string_view sep) {
  std::vector<std::size_t> points;
  int depth = 0;
  bool math = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '\\') {
      if (!math && depth == 0 && sep == "\\\\" && i + 1 < body.size() && body[i + 1] == '\\') {
        points.push_back(i);
        ++i;
        continue;
      }
      if (!math && depth == 0 && sep == "\\\\" &&
          body.substr(i).starts_with("\\tabularnewline")) {
        points.push_back(i);
        i += std::string_view("\\tabularnewline").size() - 1;
        continue;
      }
      ++i;  // escaped char or command start; skip next char
      continue;
    }
    if (c == '$') math = !math;
    if (math) continue;
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (depth == 0 && sep == "&" && c == '&') points.push_back(i);
  }
  return points;
}

std::vector<std::string_view> split_cells(std::string_view row) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (auto p : split_points(row, "&")) {
    cells.push_back(row.substr(start, p - start));
    start = p + 1;
  }
  cells.push_back(row.substr(start));
  return cells;
}

struct RowSplit {
  std::vector<SourceRow> rows;
  bool rule_after_last = false;
};

RowSplit split_rows(std::string_view body) {
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  for (auto p : split_points(body, "\\\\")) {
    segments.push_back(body.substr(start, p - start));
    // Skip the separator, a star, and an immediately following [len].
    std::size_t next = p;
    if (body.substr(p).starts_with("\\tabularnewline")) {
      next += std::string_view("\\tabularnewline").size();
    } else {
      next += 2;
      if (next < body.size() && body[next] == '*') ++next;
      if (next < body.size() && body[next] == '[') {
        auto close = body.find(']', next);
        if (close != std::string_view::npos) next = close + 1;
      }
    }
    start = next;
  }
  segments.push_back(body.substr(start));

  RowSplit out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    Cursor cur(segments[i]);
    bool full_rule = false;
    while (true) {
      cur.skip_ws();
      if (cur.peek() != '\\') break;
      Cursor probe = cur;
      std::string name = probe.command();
      if (!is_rule_command(name)) break;
      TextCleaner::skip_rule_args(probe, name);
      full_rule = full_rule || is_full_rule(name);
      cur = probe;
    }
    std::string_view rest = segments[i].substr(cur.pos());
    bool last = i + 1 == segments.size();
    if (last && normalize_whitespace(rest).empty()) {
      out.rule_after_last = full_rule;
      break;
    }
    out.rows.push_back(SourceRow{rest, full_rule});
  }
  return out;
}

struct ParsedCell {
  int colspan = 1;
  int rowspan = 1;
  std::string_view content;
};

int parse_span_count(std::string_view text, const char* what) {
  std::string t = normalize_whitespace(text);
  try {
    std::size_t used = 0;
    int n = std::stoi(t, &used);
    if (used == 0) throw std::invalid_argument(what);
    return n;
  } catch (const std::exception&) {
    throw MalformedTable(std::string("bad ") + what + " count '" + t + "'");
  }
}

ParsedCell parse_cell_structure(std::string_view raw, std::vector<std::string>& warnings) {
  ParsedCell cell;
  cell.content = raw;
  Cursor cur(raw);
  cur.skip_ws();
  if (cur.starts_with("\\multicolumn")) {
    cur.command();
    cell.colspan = parse_span_count(cur.require_group("multicolumn count"), "multicolumn");
    cur.require_group("multicolumn spec");
    cell.content = cur.require_group("multicolumn content");
    cur.skip_ws();
    if (!cur.done()) {
      warnings.push_back("text after \\multicolumn kept in cell");
      // Fold trailing text in by widening the view to the rest of the cell.
      cell.content = raw.substr(cell.content.data() - raw.data());
    }
    if (cell.colspan < 1) throw MalformedTable("multicolumn count must be positive");
  }
  Cursor inner(cell.content);
  inner.skip_ws();
  if (inner.starts_with("\\multirow")) {
    inner.command();
    inner.optional();
    int n = parse_span_count(inner.require_group("multirow count"), "multirow");
    inner.optional();
    inner.skip_ws();
    if (inner.peek() == '*') {
      inner.advance();
    } else {
      inner.require_group("multirow width");
    }
    inner.optional();
    cell.content = inner.require_group("multirow content");
    if (n < 0) {
      warnings.push_back("negative \\multirow count treated as a single row");
      n = 1;
    }
    cell.rowspan = std::max(n, 1);
  }
  return cell;
}

bool is_placeholder_text(std::string_view content) {
  return normalize_whitespace(content).empty() || content.find_first_not_of(" \t\n{}") ==
                                                       std::string_view::npos;
}

struct Environment {
  std::string name;
  std::size_t begin = 0;      // position of \begin
  std::size_t body_begin = 0;
  std::size_t body_end = 0;   // position of matching \end
};

Environment find_environment(std::string_view src, std::vector<std::string>& warnings,
                             int& n_cols) {
  std::size_t pos = 0;
  while ((pos = src.find("\\begin", pos)) != std::string_view::npos) {
    Cursor cur(src, pos);
    cur.command();
    auto env = cur.group();
    if (!env || !kEnvironments.contains(normalize_whitespace(*env))) {
      pos += 6;
      continue;
    }
    Environment e;
    e.name = normalize_whitespace(*env);
    e.begin = pos;
    cur.optional();
    if (e.name == "tabular*" || e.name == "tabularx" || e.name == "tabulary") {
      cur.require_group("table width");
    }
    auto spec = cur.require_group("column spec");
    n_cols = count_columns(spec, warnings);
    e.body_begin = cur.pos();

    // Find the matching \end, rejecting nested tabular-like environments.
    std::size_t scan = e.body_begin;
    while (true) {
      std::size_t next = src.find('\\', scan);
      if (next == std::string_view::npos) {
        throw MalformedTable("unbalanced environment: missing \\end{" + e.name + "}");
      }
      if (escaped(src, next)) {
        scan = next + 1;
        continue;
      }
      Cursor c2(src, next);
      std::string name = c2.command();
      if (name == "begin" || name == "end") {
        auto inner = c2.group();
        std::string inner_name = inner ? normalize_whitespace(*inner) : "";
        if (kEnvironments.contains(inner_name)) {
          if (name == "begin") throw MalformedTable("nested tabular environments are not supported");
          if (inner_name != e.name) {
            throw MalformedTable("unbalanced environment: \\end{" + inner_name + "} closes \\begin{" +
                                 e.name + "}");
          }
          e.body_end = next;
          return e;
        }
      }
      scan = c2.pos() > next ? c2.pos() : next + 1;
    }
  }
  throw MalformedTable("no tabular environment found");
}

std::optional<std::string> extract_caption(std::string& body_or_src, TextCleaner& cleaner) {
  std::size_t pos = 0;
  while ((pos = body_or_src.find("\\caption", pos)) != std::string::npos) {
    if (escaped(body_or_src, pos)) {
      ++pos;
      continue;
    }
    Cursor cur(body_or_src, pos);
    cur.command();
    cur.optional();
    auto g = cur.group();
    if (!g) {
      pos += 8;
      continue;
    }
    std::string text = cleaner.clean(*g);
    body_or_src.erase(pos, cur.pos() - pos);
    return text;
  }
  return std::nullopt;
}

}  // namespace

LatexTable parse_latex_table(std::string_view source, const LatexParseOptions& options) {
  LatexTable result;
  result.source = std::string(source);
  auto& warnings = result.warnings;

  std::string src = strip_comments(source);
  int spec_cols = 0;
  Environment env = find_environment(src, warnings, spec_cols);

  std::string body = src.substr(env.body_begin, env.body_end - env.body_begin);
  TextCleaner cleaner(warnings);
  std::optional<std::string> caption = extract_caption(body, cleaner);
  if (!caption) {
    std::string outside = src.substr(0, env.begin) + src.substr(env.body_end);
    caption = extract_caption(outside, cleaner);
  }

  RowSplit split = split_rows(body);
  if (split.rows.empty()) throw MalformedTable("table has no rows");

  int n_cols = spec_cols;
  if (n_cols <= 0) {
    for (const auto& row : split.rows) {
      int width = 0;
      for (auto raw : split_cells(row.text)) width += parse_cell_structure(raw, warnings).colspan;
      n_cols = std::max(n_cols, width);
    }
    warnings.push_back("empty column spec; column count inferred from rows");
  }

  const int n_rows = static_cast<int>(split.rows.size());
  TableGrid grid;
  grid.n_rows = n_rows;
  grid.n_cols = n_cols;
  grid.caption = caption;

  // Explicit occupancy matrix: index of the owning cell, -1 while free.
  std::vector<std::vector<int>> occ(n_rows, std::vector<int>(n_cols, -1));

  for (int r = 0; r < n_rows; ++r) {
    int c = 0;
    for (auto raw : split_cells(split.rows[r].text)) {
      ParsedCell pc = parse_cell_structure(raw, warnings);
      if (c + pc.colspan > n_cols) {
        throw MalformedTable("row " + std::to_string(r) + " has more cells than the " +
                             std::to_string(n_cols) + " declared columns");
      }
      if (occ[r][c] != -1) {
        // Position already owned by a multirow from above: this source cell
        // is its placeholder.
        for (int k = c; k < c + pc.colspan; ++k) {
          if (occ[r][k] == -1) throw MalformedTable("placeholder cell straddles a multirow boundary");
        }
        if (!is_placeholder_text(pc.content)) {
          warnings.push_back("text '" + cleaner.clean(pc.content) + "' in a multirow-covered cell at row " +
                             std::to_string(r) + " dropped");
        }
        c += pc.colspan;
        continue;
      }
      int rowspan = pc.rowspan;
      if (r + rowspan > n_rows) {
        warnings.push_back("\\multirow at row " + std::to_string(r) + " clamped to table end");
        rowspan = n_rows - r;
      }
      for (int rr = r; rr < r + rowspan; ++rr) {
        for (int k = c; k < c + pc.colspan; ++k) {
          if (occ[rr][k] != -1) throw MalformedTable("overlapping spans at row " + std::to_string(rr));
        }
      }
      int index = static_cast<int>(grid.cells.size());
      grid.cells.push_back(Cell{r, c, rowspan, pc.colspan, cleaner.clean(pc.content), false});
      for (int rr = r; rr < r + rowspan; ++rr) {
        for (int k = c; k < c + pc.colspan; ++k) occ[rr][k] = index;
      }
      c += pc.colspan;
    }
    // Short rows are legal LaTeX; pad with empty cells.
    for (int k = 0; k < n_cols; ++k) {
      if (occ[r][k] == -1) {
        occ[r][k] = static_cast<int>(grid.cells.size());
        grid.cells.push_back(Cell{r, k, 1, 1, "", false});
      }
    }
  }

  if (options.header_rows) {
    grid.header_row_count = std::clamp(*options.header_rows, 0, n_rows);
  } else {
    for (int r = 1; r < n_rows; ++r) {
      if (split.rows[r].full_rule_before) {
        grid.header_row_count = r;
        break;
      }
    }
  }
  canonicalize(grid);
  result.grid = std::move(grid);
  return result;
}

namespace {

std::string escape_plain(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      case '&': case '%': case '#': case '_': case '{': case '}': case '$':
        out += '\\';
        out += c;
        break;
      default: out += c;
    }
  }
  return out;
}

// Math segments ($...$ pairs) pass through verbatim, everything else is escaped.
std::string escape_text(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = text.find('$', i);
    if (open == std::string_view::npos) {
      out += escape_plain(text.substr(i));
      break;
    }
    auto close = text.find('$', open + 1);
    if (close == std::string_view::npos) {
      out += escape_plain(text.substr(i));
      break;
    }
    out += escape_plain(text.substr(i, open - i));
    out.append(text.substr(open, close - open + 1));
    i = close + 1;
  }
  return out;
}

}  // namespace

std::string serialize_latex(const TableGrid& grid) {
  auto occ = occupancy(grid);
  std::string out;
  if (grid.caption) {
    out += "\\begin{table}\n\\caption{" + escape_text(*grid.caption) + "}\n";
  }
  out += "\\begin{tabular}{" + std::string(static_cast<std::size_t>(grid.n_cols), 'c') + "}\n";
  out += "\\hline\n";
  for (int r = 0; r < grid.n_rows; ++r) {
    if (r > 0 && r == grid.header_row_count) out += "\\hline\n";
    std::vector<std::string> parts;
    int c = 0;
    while (c < grid.n_cols) {
      const Cell& cell = grid.cells[occ[r][c]];
      std::string body;
      if (cell.row == r) {
        body = cell.text.empty() ? "{}" : escape_text(cell.text);
        if (cell.rowspan > 1) body = "\\multirow{" + std::to_string(cell.rowspan) + "}{*}{" + body + "}";
      } else {
        body = "{}";
      }
      if (cell.colspan > 1) {
        body = "\\multicolumn{" + std::to_string(cell.colspan) + "}{c}{" + body + "}";
      }
      parts.push_back(std::move(body));
      c = cell.col + cell.colspan;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += " & ";
      out += parts[i];
    }
    out += " \\\\\n";
  }
  out += "\\hline\n\\end{tabular}\n";
  if (grid.caption) out += "\\end{table}\n";
  return out;
}

}  // namespace tabqa::table
