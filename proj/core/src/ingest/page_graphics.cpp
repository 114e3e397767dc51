#include "tabqa/ingest/page_graphics.hpp"

#include <algorithm>
#include <cmath>

namespace tabqa::ingest {
namespace {

struct Matrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }

  // this x other (apply `this` first, then `other`).
  Matrix then(const Matrix& o) const {
    return {a * o.a + b * o.c,       a * o.b + b * o.d,       c * o.a + d * o.c,
            c * o.b + d * o.d,       e * o.a + f * o.c + o.e, e * o.b + f * o.d + o.f};
  }

  double scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

struct GraphicsState {
  Matrix ctm;
  double line_width = 1.0;
  double stroke_gray = 0.0;
  double fill_gray = 0.0;
};

struct TextState {
  Matrix tm;
  Matrix tlm;
  double font_size = 12;
  double leading = 0;
  double char_spacing = 0;
  double word_spacing = 0;
  double h_scale = 1;
  double rise = 0;
};

double gray_from(const std::vector<double>& v) {
  if (v.size() == 1) return std::clamp(v[0], 0.0, 1.0);
  if (v.size() == 3) return std::clamp(0.299 * v[0] + 0.587 * v[1] + 0.114 * v[2], 0.0, 1.0);
  if (v.size() == 4) {
    return std::clamp(1.0 - std::min(1.0, 0.3 * v[0] + 0.59 * v[1] + 0.11 * v[2] + v[3]), 0.0, 1.0);
  }
  return 0.0;
}

class Interpreter {
 public:
  Interpreter(const PdfDocument& doc, PageGraphics& out) : doc_(doc), out_(out) {}

  void run(std::string_view content, const PdfDict* resources, const Matrix& base, int depth) {
    if (depth > 8) return;
    GraphicsState saved_gs = gs_;
    std::vector<GraphicsState> stack;
    gs_.ctm = base;
    PdfLexer lex(content);
    std::vector<PdfValue> operands;
    while (true) {
      auto tok = lex.next();
      if (tok.kind == PdfLexer::Token::kEnd) break;
      if (tok.kind != PdfLexer::Token::kKeyword || tok.text == "true" || tok.text == "false" ||
          tok.text == "null") {
        operands.push_back(lex.parse_value(tok));
        continue;
      }
      const std::string& op = tok.text;
      if (op == "BI") {
        skip_inline_image(lex);
        operands.clear();
        continue;
      }
      execute(op, operands, stack, resources, depth);
      operands.clear();
    }
    gs_ = saved_gs;
  }

 private:
  static std::vector<double> numbers(const std::vector<PdfValue>& ops) {
    std::vector<double> v;
    for (const auto& o : ops) {
      if (const double* n = o.number()) v.push_back(*n);
    }
    return v;
  }

  void skip_inline_image(PdfLexer& lex) {
    std::string_view text = lex.text();
    auto id = text.find("ID", lex.pos());
    if (id == std::string_view::npos) {
      lex.seek(text.size());
      return;
    }
    std::size_t pos = id + 2;
    while (true) {
      auto ei = text.find("EI", pos);
      if (ei == std::string_view::npos) {
        lex.seek(text.size());
        return;
      }
      bool before_ok = ei > 0 && (text[ei - 1] == ' ' || text[ei - 1] == '\n' || text[ei - 1] == '\r');
      bool after_ok = ei + 2 >= text.size() || text[ei + 2] == ' ' || text[ei + 2] == '\n' ||
                      text[ei + 2] == '\r';
      if (before_ok && after_ok) {
        lex.seek(ei + 2);
        add_unit_square_image();
        return;
      }
      pos = ei + 2;
    }
  }

  void add_unit_square_image() {
    TextBox box;
    box.corners[0] = gs_.ctm.apply({0, 0});
    box.corners[1] = gs_.ctm.apply({1, 0});
    box.corners[2] = gs_.ctm.apply({1, 1});
    box.corners[3] = gs_.ctm.apply({0, 1});
    box.gray = 0.75;
    out_.images.push_back(box);
  }

  void begin_subpath(Point p) {
    path_.subpaths.push_back({gs_.ctm.apply(p)});
    path_.closed.push_back(false);
    current_ = p;
    start_ = p;
  }

  void line_to(Point p) {
    if (path_.subpaths.empty()) begin_subpath(current_);
    path_.subpaths.back().push_back(gs_.ctm.apply(p));
    current_ = p;
  }

  void curve_to(Point c1, Point c2, Point p) {
    if (path_.subpaths.empty()) begin_subpath(current_);
    Point p0 = current_;
    constexpr int kSteps = 16;
    for (int i = 1; i <= kSteps; ++i) {
      double t = static_cast<double>(i) / kSteps;
      double u = 1 - t;
      Point q{u * u * u * p0.x + 3 * u * u * t * c1.x + 3 * u * t * t * c2.x + t * t * t * p.x,
              u * u * u * p0.y + 3 * u * u * t * c1.y + 3 * u * t * t * c2.y + t * t * t * p.y};
      path_.subpaths.back().push_back(gs_.ctm.apply(q));
    }
    current_ = p;
  }

  void close_path() {
    if (!path_.closed.empty()) path_.closed.back() = true;
    current_ = start_;
  }

  void paint(bool stroke, bool fill, bool even_odd, bool close) {
    if (close) close_path();
    if (!path_.subpaths.empty() && (stroke || fill)) {
      path_.stroke = stroke;
      path_.fill = fill;
      path_.even_odd = even_odd;
      path_.line_width = gs_.line_width * gs_.ctm.scale();
      path_.stroke_gray = gs_.stroke_gray;
      path_.fill_gray = gs_.fill_gray;
      out_.paths.push_back(std::move(path_));
    }
    path_ = PaintedPath{};
  }

  void show_text(std::size_t glyphs) {
    if (glyphs == 0) return;
    const double width = static_cast<double>(glyphs) *
                         (0.5 * ts_.font_size + ts_.char_spacing) * ts_.h_scale;
    Matrix trm = Matrix{1, 0, 0, 1, 0, ts_.rise}.then(ts_.tm).then(gs_.ctm);
    TextBox box;
    box.corners[0] = trm.apply({0, -0.1 * ts_.font_size});
    box.corners[1] = trm.apply({width, -0.1 * ts_.font_size});
    box.corners[2] = trm.apply({width, 0.6 * ts_.font_size});
    box.corners[3] = trm.apply({0, 0.6 * ts_.font_size});
    box.gray = gs_.fill_gray;
    out_.text.push_back(box);
    ts_.tm = Matrix{1, 0, 0, 1, width, 0}.then(ts_.tm);
  }

  void next_line(double tx, double ty) {
    ts_.tlm = Matrix{1, 0, 0, 1, tx, ty}.then(ts_.tlm);
    ts_.tm = ts_.tlm;
  }

  void draw_xobject(const std::string& name, const PdfDict* resources, int depth) {
    if (!resources) return;
    auto xobjs_it = resources->find("XObject");
    if (xobjs_it == resources->end()) return;
    const PdfDict* xobjs = doc_.resolve(xobjs_it->second).dict();
    if (!xobjs) return;
    auto it = xobjs->find(name);
    if (it == xobjs->end() || !it->second.ref()) return;
    const PdfObject* obj = doc_.object(*it->second.ref());
    if (!obj || !obj->value.dict()) return;
    const PdfDict& d = *obj->value.dict();
    auto subtype = d.find("Subtype");
    std::string kind = subtype != d.end() && subtype->second.name() ? subtype->second.name()->value : "";
    if (kind == "Image") {
      add_unit_square_image();
      return;
    }
    if (kind != "Form") return;
    Matrix m;
    if (auto mi = d.find("Matrix"); mi != d.end()) {
      if (const PdfArray* arr = doc_.resolve(mi->second).array(); arr && arr->size() == 6) {
        double v[6];
        for (int i = 0; i < 6; ++i) {
          const double* n = doc_.resolve((*arr)[i]).number();
          v[i] = n ? *n : 0;
        }
        m = Matrix{v[0], v[1], v[2], v[3], v[4], v[5]};
      }
    }
    const PdfDict* form_resources = resources;
    if (auto ri = d.find("Resources"); ri != d.end()) {
      if (const PdfDict* r = doc_.resolve(ri->second).dict()) form_resources = r;
    }
    std::string content;
    try {
      content = doc_.decode_stream(*obj);
    } catch (const std::exception&) {
      return;
    }
    PaintedPath saved_path = std::move(path_);
    path_ = {};
    run(content, form_resources, m.then(gs_.ctm), depth + 1);
    path_ = std::move(saved_path);
  }

  void execute(const std::string& op, const std::vector<PdfValue>& ops,
               std::vector<GraphicsState>& stack, const PdfDict* resources, int depth) {
    auto n = numbers(ops);
    auto num = [&](std::size_t i) { return i < n.size() ? n[i] : 0.0; };

    if (op == "q") { stack.push_back(gs_); return; }
    if (op == "Q") {
      if (!stack.empty()) { gs_ = stack.back(); stack.pop_back(); }
      return;
    }
    if (op == "cm" && n.size() == 6) {
      gs_.ctm = Matrix{n[0], n[1], n[2], n[3], n[4], n[5]}.then(gs_.ctm);
      return;
    }
    if (op == "w") { gs_.line_width = num(0); return; }
    if (op == "m") { begin_subpath({num(0), num(1)}); return; }
    if (op == "l") { line_to({num(0), num(1)}); return; }
    if (op == "c") { curve_to({num(0), num(1)}, {num(2), num(3)}, {num(4), num(5)}); return; }
    if (op == "v") { curve_to(current_, {num(0), num(1)}, {num(2), num(3)}); return; }
    if (op == "y") { curve_to({num(0), num(1)}, {num(2), num(3)}, {num(2), num(3)}); return; }
    if (op == "h") { close_path(); return; }
    if (op == "re") {
      double x = num(0), y = num(1), w = num(2), h = num(3);
      begin_subpath({x, y});
      line_to({x + w, y});
      line_to({x + w, y + h});
      line_to({x, y + h});
      close_path();
      return;
    }
    if (op == "S") { paint(true, false, false, false); return; }
    if (op == "s") { paint(true, false, false, true); return; }
    if (op == "f" || op == "F") { paint(false, true, false, false); return; }
    if (op == "f*") { paint(false, true, true, false); return; }
    if (op == "B") { paint(true, true, false, false); return; }
    if (op == "B*") { paint(true, true, true, false); return; }
    if (op == "b") { paint(true, true, false, true); return; }
    if (op == "b*") { paint(true, true, true, true); return; }
    if (op == "n") { paint(false, false, false, false); return; }

    if (op == "G" || op == "RG" || op == "K") { gs_.stroke_gray = gray_from(n); return; }
    if (op == "g" || op == "rg" || op == "k") { gs_.fill_gray = gray_from(n); return; }
    if (op == "SC" || op == "SCN") { if (!n.empty()) gs_.stroke_gray = gray_from(n); return; }
    if (op == "sc" || op == "scn") { if (!n.empty()) gs_.fill_gray = gray_from(n); return; }

    if (op == "BT") { ts_.tm = ts_.tlm = Matrix{}; return; }
    if (op == "Tf") { ts_.font_size = num(0); return; }
    if (op == "TL") { ts_.leading = num(0); return; }
    if (op == "Tc") { ts_.char_spacing = num(0); return; }
    if (op == "Tw") { ts_.word_spacing = num(0); return; }
    if (op == "Tz") { ts_.h_scale = num(0) / 100.0; return; }
    if (op == "Ts") { ts_.rise = num(0); return; }
    if (op == "Td") { next_line(num(0), num(1)); return; }
    if (op == "TD") { ts_.leading = -num(1); next_line(num(0), num(1)); return; }
    if (op == "T*") { next_line(0, -ts_.leading); return; }
    if (op == "Tm" && n.size() == 6) {
      ts_.tm = ts_.tlm = Matrix{n[0], n[1], n[2], n[3], n[4], n[5]};
      return;
    }
    if (op == "Tj" || op == "'" || op == "\"") {
      if (op != "Tj") next_line(0, -ts_.leading);
      for (const auto& o : ops) {
        if (const PdfString* s = o.string()) show_text(s->bytes.size());
      }
      return;
    }
    if (op == "TJ") {
      for (const auto& o : ops) {
        const PdfArray* arr = o.array();
        if (!arr) continue;
        for (const auto& item : *arr) {
          if (const PdfString* s = item.string()) {
            show_text(s->bytes.size());
          } else if (const double* adj = item.number()) {
            ts_.tm = Matrix{1, 0, 0, 1, -*adj / 1000.0 * ts_.font_size * ts_.h_scale, 0}.then(ts_.tm);
          }
        }
      }
      return;
    }
    if (op == "Do" && !ops.empty() && ops[0].name()) {
      draw_xobject(ops[0].name()->value, resources, depth);
      return;
    }
    // Remaining operators (clipping, dash, colour spaces, marked content,
    // graphics state dictionaries) do not affect the coarse rendering.
  }

  const PdfDocument& doc_;
  PageGraphics& out_;
  GraphicsState gs_;
  TextState ts_;
  PaintedPath path_;
  Point current_;
  Point start_;
};

}  // namespace

PageGraphics interpret_page(const PdfDocument& doc, const PdfPage& page) {
  PageGraphics g;
  g.media_box = page.media_box;
  Interpreter interp(doc, g);
  interp.run(page.content, page.resources, Matrix{}, 0);
  return g;
}

}  // namespace tabqa::ingest
