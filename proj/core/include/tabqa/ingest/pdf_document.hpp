#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tabqa::ingest {

// Minimal PDF object model: enough of ISO 32000 to walk the page tree and
// decode Flate-compressed content streams. Encryption is not supported.

struct PdfRef {
  int num = 0;
  int gen = 0;
  auto operator<=>(const PdfRef&) const = default;
};

struct PdfName {
  std::string value;
  bool operator==(const PdfName&) const = default;
};

struct PdfString {
  std::string bytes;
};

struct PdfValue;
using PdfArray = std::vector<PdfValue>;
using PdfDict = std::map<std::string, PdfValue>;

struct PdfValue {
  using Storage = std::variant<std::monostate, bool, double, PdfString, PdfName, PdfRef,
                               std::shared_ptr<PdfArray>, std::shared_ptr<PdfDict>>;
  Storage v;

  bool is_null() const { return std::holds_alternative<std::monostate>(v); }
  const double* number() const { return std::get_if<double>(&v); }
  const PdfName* name() const { return std::get_if<PdfName>(&v); }
  const PdfString* string() const { return std::get_if<PdfString>(&v); }
  const PdfRef* ref() const { return std::get_if<PdfRef>(&v); }
  const PdfArray* array() const {
    auto p = std::get_if<std::shared_ptr<PdfArray>>(&v);
    return p ? p->get() : nullptr;
  }
  const PdfDict* dict() const {
    auto p = std::get_if<std::shared_ptr<PdfDict>>(&v);
    return p ? p->get() : nullptr;
  }
};

struct PdfObject {
  PdfValue value;
  std::optional<std::string> stream;  // raw (still encoded) stream bytes
};

/// Page geometry in PDF user space (points, origin bottom-left).
struct PdfBox {
  double x0 = 0, y0 = 0, x1 = 612, y1 = 792;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct PdfPage {
  int number = 0;  // 1-based
  PdfBox media_box;
  std::string content;  // decoded, concatenated content streams
  const PdfDict* resources = nullptr;
};

class PdfDocument {
 public:
  /// Throws UnreadableDocument.
  static PdfDocument open(const std::filesystem::path& path);
  static PdfDocument from_bytes(std::string bytes, std::string doc_id = "document");

  const std::string& doc_id() const { return doc_id_; }
  const std::string& bytes() const { return *bytes_; }
  int page_count() const { return static_cast<int>(page_dicts_.size()); }

  /// Throws RenderFailure for an out-of-range page.
  PdfPage page(int page_number) const;

  /// Follows references; returns a null value for dangling ones.
  const PdfValue& resolve(const PdfValue& value) const;
  const PdfObject* object(PdfRef ref) const;

  /// Decoded stream data (FlateDecode or unfiltered). Throws UnreadableDocument
  /// for unsupported filters.
  std::string decode_stream(const PdfObject& object) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct PageEntry {
    const PdfDict* dict;
    PdfBox media_box;
    const PdfDict* resources;
  };

  void scan_objects();
  void expand_object_streams();
  void build_page_tree();

  std::shared_ptr<const std::string> bytes_;
  std::string doc_id_;
  std::map<PdfRef, PdfObject> objects_;
  std::optional<PdfValue> trailer_;
  std::vector<PageEntry> page_dicts_;
  std::vector<std::string> warnings_;
};

/// Parses one PDF value from `text` (used for content stream operands too).
class PdfLexer {
 public:
  explicit PdfLexer(std::string_view text, std::size_t pos = 0) : s_(text), pos_(pos) {}

  struct Token {
    enum Kind { kEnd, kNumber, kName, kString, kArrayOpen, kArrayClose, kDictOpen, kDictClose,
                kKeyword } kind = kEnd;
    std::string text;
    double number = 0;
    std::size_t offset = 0;
  };

  Token next();
  /// Parses a full value starting with `first` (arrays, dicts and refs included).
  PdfValue parse_value(Token first);
  std::size_t pos() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }
  std::string_view text() const { return s_; }

 private:
  void skip_ws_and_comments();

  std::string_view s_;
  std::size_t pos_;
};

}  // namespace tabqa::ingest
