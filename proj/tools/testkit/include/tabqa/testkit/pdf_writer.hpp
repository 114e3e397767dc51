#pragma once

#include <string>
#include <vector>

namespace tabqa::testkit {

/// Writes small but well-formed PDFs (classic xref table) from raw content
/// streams, with Helvetica available as /F1.
class PdfWriter {
 public:
  void add_page(std::string content, double width = 612, double height = 792, bool compress = false);
  std::string bytes() const;

 private:
  struct Page {
    std::string content;
    double width, height;
    bool compress;
  };
  std::vector<Page> pages_;
};

/// Content stream drawing lines of text top-down from (72, 720).
std::string text_page(const std::vector<std::string>& lines);

/// Content stream drawing a ruled grid with cell text; `cells[r][c]`.
/// Header row separated by a heavier rule.
std::string table_page(const std::string& title, const std::vector<std::vector<std::string>>& cells);

/// Cells of the fastener table used across fixtures (two body rows).
std::vector<std::vector<std::string>> fastener_table();

/// Three pages; only page 2 holds a ruled table. Page 3 is Flate-compressed.
std::string three_page_fixture();

}  // namespace tabqa::testkit
