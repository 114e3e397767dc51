#include "tabqa/testkit/pdf_writer.hpp"

#include <zlib.h>

#include <cstdio>
#include <stdexcept>

namespace tabqa::testkit {

namespace {

std::string deflate(const std::string& in) {
  uLongf size = compressBound(in.size());
  std::string out(size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &size, reinterpret_cast<const Bytef*>(in.data()),
                in.size(), 6) != Z_OK) {
    throw std::runtime_error("zlib compress failed");
  }
  out.resize(size);
  return out;
}

std::string escape_pdf_string(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '(' || c == ')' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void PdfWriter::add_page(std::string content, double width, double height, bool compress) {
  pages_.push_back({std::move(content), width, height, compress});
}

std::string PdfWriter::bytes() const {
  // Objects: 1 catalog, 2 pages, 3 font, then (page, content) pairs.
  std::vector<std::string> objects;
  objects.push_back("<< /Type /Catalog /Pages 2 0 R >>");
  std::string kids;
  for (std::size_t i = 0; i < pages_.size(); ++i) kids += std::to_string(4 + 2 * i) + " 0 R ";
  objects.push_back("<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages_.size()) + " >>");
  objects.push_back("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
  for (std::size_t i = 0; i < pages_.size(); ++i) {
    const auto& p = pages_[i];
    objects.push_back("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + num(p.width) + " " + num(p.height) +
                      "] /Resources << /Font << /F1 3 0 R >> >> /Contents " + std::to_string(5 + 2 * i) +
                      " 0 R >>");
    std::string data = p.compress ? deflate(p.content) : p.content;
    objects.push_back("<< /Length " + std::to_string(data.size()) +
                      (p.compress ? " /Filter /FlateDecode" : "") + " >>\nstream\n" + data + "\nendstream");
  }

  std::string out = "%PDF-1.4\n%\xe2\xe3\xcf\xd3\n";
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    offsets.push_back(out.size());
    out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
  }
  const std::size_t xref = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
  for (auto off : offsets) {
    char line[24];
    std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
    out += line;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R >>\nstartxref\n" +
         std::to_string(xref) + "\n%%EOF\n";
  return out;
}

std::string text_page(const std::vector<std::string>& lines) {
  std::string c = "BT /F1 11 Tf 14 TL 72 720 Td\n";
  for (const auto& line : lines) c += "(" + escape_pdf_string(line) + ") Tj T*\n";
  c += "ET\n";
  return c;
}

std::string table_page(const std::string& title, const std::vector<std::vector<std::string>>& cells) {
  const double left = 54, top = 700, row_h = 24;
  const std::size_t rows = cells.size();
  const std::size_t cols = rows ? cells[0].size() : 0;
  const double col_w = 504.0 / static_cast<double>(cols ? cols : 1);
  std::string c = "BT /F1 12 Tf " + num(left) + " " + num(top + 16) + " Td (" + escape_pdf_string(title) +
                  ") Tj ET\n0 G 0.5 w\n";
  for (std::size_t r = 0; r <= rows; ++r) {
    double y = top - row_h * static_cast<double>(r);
    c += (r == 1 ? "1.5 w " : "0.5 w ") + num(left) + " " + num(y) + " m " + num(left + 504) + " " + num(y) +
         " l S\n";
  }
  for (std::size_t k = 0; k <= cols; ++k) {
    double x = left + col_w * static_cast<double>(k);
    c += "0.5 w " + num(x) + " " + num(top) + " m " + num(x) + " " + num(top - row_h * rows) + " l S\n";
  }
  c += "BT /F1 8 Tf\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cells[r].size(); ++k) {
      double x = left + col_w * static_cast<double>(k) + 3;
      double y = top - row_h * static_cast<double>(r + 1) + 8;
      c += "1 0 0 1 " + num(x) + " " + num(y) + " Tm (" + escape_pdf_string(cells[r][k]) + ") Tj\n";
    }
  }
  c += "ET\n";
  return c;
}

std::vector<std::vector<std::string>> fastener_table() {
  return {{"Element", "Common or Spiral Nails", "Ring Thread Nails or Screws", "Roofing Nails", "Staples"},
          {"Board lumber 184 mm or less wide", "51", "45", "n/a", "51"},
          {"Board lumber more than 184 mm wide", "51", "45", "n/a", "51"}};
}

std::string three_page_fixture() {
  PdfWriter w;
  w.add_page(text_page({"Fixture document", "Page one carries running text only.",
                        "The ruled table follows on page two."}));
  w.add_page(table_page("Fasteners for Subflooring and for Sheathing", fastener_table()));
  w.add_page(text_page({"Page three is compressed running text.", "It has no rules."}),
             612, 792, true);
  return w.bytes();
}

}  // namespace tabqa::testkit
