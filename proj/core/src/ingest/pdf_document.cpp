#include "tabqa/ingest/pdf_document.hpp"

#include <zlib.h>

#include <cctype>
#include <cstring>
#include <functional>
#include <set>

#include "tabqa/error.hpp"
#include "tabqa/util.hpp"

namespace tabqa::ingest {
namespace {

bool is_pdf_space(char c) {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}

bool is_delim(char c) {
  return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' ||
         c == '}' || c == '/' || c == '%';
}

bool is_regular(char c) { return !is_pdf_space(c) && !is_delim(c); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string inflate(std::string_view data) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw UnreadableDocument("zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buffer[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof(buffer);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      // Truncated streams are common in the wild; keep what decoded.
      if (rc == Z_BUF_ERROR || rc == Z_DATA_ERROR) {
        out.append(buffer, sizeof(buffer) - zs.avail_out);
        break;
      }
      inflateEnd(&zs);
      throw UnreadableDocument("corrupt Flate stream");
    }
    out.append(buffer, sizeof(buffer) - zs.avail_out);
    if (zs.avail_in == 0 && rc != Z_STREAM_END && zs.avail_out != 0) break;
  }
  inflateEnd(&zs);
  return out;
}

PdfBox box_from(const PdfDocument& doc, const PdfValue& value, const PdfBox& fallback) {
  const PdfArray* arr = doc.resolve(value).array();
  if (!arr || arr->size() != 4) return fallback;
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const double* n = doc.resolve((*arr)[i]).number();
    if (!n) return fallback;
    v[i] = *n;
  }
  PdfBox b{std::min(v[0], v[2]), std::min(v[1], v[3]), std::max(v[0], v[2]), std::max(v[1], v[3])};
  if (b.width() <= 0 || b.height() <= 0) return fallback;
  return b;
}

const PdfValue kNull{};

}  // namespace

// ---------------------------------------------------------------------------
// Lexer

void PdfLexer::skip_ws_and_comments() {
  while (pos_ < s_.size()) {
    char c = s_[pos_];
    if (is_pdf_space(c)) {
      ++pos_;
    } else if (c == '%') {
      while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
    } else {
      break;
    }
  }
}

PdfLexer::Token PdfLexer::next() {
  skip_ws_and_comments();
  Token t;
  t.offset = pos_;
  if (pos_ >= s_.size()) return t;
  char c = s_[pos_];
  if (c == '[') { ++pos_; t.kind = Token::kArrayOpen; return t; }
  if (c == ']') { ++pos_; t.kind = Token::kArrayClose; return t; }
  if (c == '<' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '<') {
    pos_ += 2; t.kind = Token::kDictOpen; return t;
  }
  if (c == '>' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
    pos_ += 2; t.kind = Token::kDictClose; return t;
  }
  if (c == '/') {
    ++pos_;
    t.kind = Token::kName;
    while (pos_ < s_.size() && is_regular(s_[pos_])) {
      char ch = s_[pos_++];
      if (ch == '#' && pos_ + 1 < s_.size() && hex_value(s_[pos_]) >= 0 && hex_value(s_[pos_ + 1]) >= 0) {
        ch = static_cast<char>(hex_value(s_[pos_]) * 16 + hex_value(s_[pos_ + 1]));
        pos_ += 2;
      }
      t.text.push_back(ch);
    }
    return t;
  }
  if (c == '(') {
    ++pos_;
    t.kind = Token::kString;
    int depth = 1;
    while (pos_ < s_.size()) {
      char ch = s_[pos_++];
      if (ch == '\\' && pos_ < s_.size()) {
        char e = s_[pos_++];
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 'r': t.text.push_back('\r'); break;
          case 't': t.text.push_back('\t'); break;
          case 'b': t.text.push_back('\b'); break;
          case 'f': t.text.push_back('\f'); break;
          case '\r':
            if (pos_ < s_.size() && s_[pos_] == '\n') ++pos_;
            break;
          case '\n': break;
          default:
            if (e >= '0' && e <= '7') {
              int v = e - '0';
              for (int k = 0; k < 2 && pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '7'; ++k) {
                v = v * 8 + (s_[pos_++] - '0');
              }
              t.text.push_back(static_cast<char>(v));
            } else {
              t.text.push_back(e);
            }
        }
        continue;
      }
      if (ch == '(') ++depth;
      if (ch == ')' && --depth == 0) break;
      t.text.push_back(ch);
    }
    return t;
  }
  if (c == '<') {
    ++pos_;
    t.kind = Token::kString;
    int pending = -1;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      int h = hex_value(s_[pos_++]);
      if (h < 0) continue;
      if (pending < 0) {
        pending = h;
      } else {
        t.text.push_back(static_cast<char>(pending * 16 + h));
        pending = -1;
      }
    }
    if (pending >= 0) t.text.push_back(static_cast<char>(pending * 16));
    if (pos_ < s_.size()) ++pos_;
    return t;
  }
  if (c == ')' || c == '>' || c == '{' || c == '}') {
    ++pos_;
    t.kind = Token::kKeyword;
    t.text = std::string(1, c);
    return t;
  }
  std::size_t start = pos_;
  while (pos_ < s_.size() && is_regular(s_[pos_])) ++pos_;
  t.text = std::string(s_.substr(start, pos_ - start));
  const char* begin = t.text.c_str();
  char* end = nullptr;
  bool numeric = !t.text.empty() && (std::isdigit(static_cast<unsigned char>(t.text[0])) ||
                                     t.text[0] == '-' || t.text[0] == '+' || t.text[0] == '.');
  if (numeric) {
    double v = std::strtod(begin, &end);
    if (end == begin + t.text.size()) {
      t.kind = Token::kNumber;
      t.number = v;
      return t;
    }
  }
  t.kind = Token::kKeyword;
  return t;
}

PdfValue PdfLexer::parse_value(Token first) {
  switch (first.kind) {
    case Token::kNumber: {
      // Lookahead for "num gen R".
      std::size_t save = pos_;
      Token second = next();
      if (second.kind == Token::kNumber) {
        Token third = next();
        if (third.kind == Token::kKeyword && third.text == "R") {
          return PdfValue{PdfRef{static_cast<int>(first.number), static_cast<int>(second.number)}};
        }
      }
      pos_ = save;
      return PdfValue{first.number};
    }
    case Token::kName:
      return PdfValue{PdfName{first.text}};
    case Token::kString:
      return PdfValue{PdfString{first.text}};
    case Token::kArrayOpen: {
      auto arr = std::make_shared<PdfArray>();
      while (true) {
        Token t = next();
        if (t.kind == Token::kArrayClose || t.kind == Token::kEnd) break;
        arr->push_back(parse_value(t));
      }
      return PdfValue{arr};
    }
    case Token::kDictOpen: {
      auto dict = std::make_shared<PdfDict>();
      while (true) {
        Token key = next();
        if (key.kind == Token::kDictClose || key.kind == Token::kEnd) break;
        if (key.kind != Token::kName) continue;
        Token val = next();
        if (val.kind == Token::kDictClose) break;
        (*dict)[key.text] = parse_value(val);
      }
      return PdfValue{dict};
    }
    case Token::kKeyword:
      if (first.text == "true") return PdfValue{true};
      if (first.text == "false") return PdfValue{false};
      return PdfValue{};
    default:
      return PdfValue{};
  }
}

// ---------------------------------------------------------------------------
// Document

PdfDocument PdfDocument::open(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoError& e) {
    throw UnreadableDocument(e.what());
  }
  return from_bytes(std::move(bytes), path.stem().string());
}

PdfDocument PdfDocument::from_bytes(std::string bytes, std::string doc_id) {
  PdfDocument doc;
  doc.doc_id_ = std::move(doc_id);
  doc.bytes_ = std::make_shared<const std::string>(std::move(bytes));
  if (!doc.bytes_->starts_with("%PDF-")) {
    auto header = doc.bytes_->find("%PDF-");
    if (header == std::string::npos || header > 1024) {
      throw UnreadableDocument("missing %PDF- header");
    }
  }
  doc.scan_objects();
  doc.expand_object_streams();
  doc.build_page_tree();
  return doc;
}

void PdfDocument::scan_objects() {
  const std::string& data = *bytes_;
  PdfLexer lex(data);
  // Sliding window of the last two tokens to recognise "num gen obj".
  PdfLexer::Token prev2, prev1;
  while (true) {
    PdfLexer::Token t = lex.next();
    if (t.kind == PdfLexer::Token::kEnd) break;
    if (t.kind == PdfLexer::Token::kKeyword && t.text == "obj" &&
        prev1.kind == PdfLexer::Token::kNumber && prev2.kind == PdfLexer::Token::kNumber) {
      PdfRef ref{static_cast<int>(prev2.number), static_cast<int>(prev1.number)};
      PdfObject obj;
      PdfLexer::Token first = lex.next();
      obj.value = lex.parse_value(first);
      std::size_t after_value = lex.pos();
      PdfLexer::Token kw = lex.next();
      if (kw.kind == PdfLexer::Token::kKeyword && kw.text == "stream") {
        std::size_t start = lex.pos();
        if (start < data.size() && data[start] == '\r') ++start;
        if (start < data.size() && data[start] == '\n') ++start;
        std::optional<std::size_t> length;
        if (const PdfDict* d = obj.value.dict()) {
          if (auto it = d->find("Length"); it != d->end()) {
            if (const double* n = it->second.number()) length = static_cast<std::size_t>(*n);
          }
        }
        std::size_t end = std::string::npos;
        if (length && start + *length <= data.size()) {
          auto probe = data.find("endstream", start + *length);
          if (probe != std::string::npos && probe - (start + *length) <= 2) end = start + *length;
        }
        if (end == std::string::npos) {
          auto es = data.find("endstream", start);
          if (es == std::string::npos) {
            warnings_.push_back("unterminated stream in object " + std::to_string(ref.num));
            break;
          }
          end = es;
          while (end > start && (data[end - 1] == '\n' || data[end - 1] == '\r')) --end;
        }
        obj.stream = data.substr(start, end - start);
        lex.seek(data.find("endstream", end) + 9);
      } else {
        lex.seek(after_value);
      }
      objects_[ref] = std::move(obj);
      prev1 = prev2 = {};
      continue;
    }
    if (t.kind == PdfLexer::Token::kKeyword && t.text == "trailer") {
      PdfLexer::Token first = lex.next();
      PdfValue v = lex.parse_value(first);
      if (v.dict()) {
        if (!trailer_ || v.dict()->contains("Root")) trailer_ = v;
      }
      continue;
    }
    prev2 = prev1;
    prev1 = t;
  }
}

void PdfDocument::expand_object_streams() {
  std::vector<std::pair<PdfRef, PdfObject>> found;
  for (const auto& [ref, obj] : objects_) {
    const PdfDict* d = obj.value.dict();
    if (!d || !obj.stream) continue;
    auto type = d->find("Type");
    if (type == d->end() || !type->second.name() || type->second.name()->value != "ObjStm") continue;
    std::string decoded;
    try {
      decoded = decode_stream(obj);
    } catch (const UnreadableDocument& e) {
      warnings_.push_back(std::string("object stream skipped: ") + e.what());
      continue;
    }
    int n = 0;
    std::size_t first = 0;
    if (auto it = d->find("N"); it != d->end() && resolve(it->second).number()) {
      n = static_cast<int>(*resolve(it->second).number());
    }
    if (auto it = d->find("First"); it != d->end() && resolve(it->second).number()) {
      first = static_cast<std::size_t>(*resolve(it->second).number());
    }
    PdfLexer header(decoded);
    std::vector<std::pair<int, std::size_t>> entries;
    for (int i = 0; i < n; ++i) {
      auto num = header.next();
      auto off = header.next();
      if (num.kind != PdfLexer::Token::kNumber || off.kind != PdfLexer::Token::kNumber) break;
      entries.emplace_back(static_cast<int>(num.number), static_cast<std::size_t>(off.number));
    }
    for (auto [num, off] : entries) {
      if (first + off >= decoded.size()) continue;
      PdfLexer body(decoded, first + off);
      PdfObject inner;
      inner.value = body.parse_value(body.next());
      found.emplace_back(PdfRef{num, 0}, std::move(inner));
    }
  }
  for (auto& [ref, obj] : found) objects_.try_emplace(ref, std::move(obj));
}

const PdfObject* PdfDocument::object(PdfRef ref) const {
  auto it = objects_.find(ref);
  if (it != objects_.end()) return &it->second;
  // Tolerate generation mismatches from sloppy writers.
  it = objects_.lower_bound(PdfRef{ref.num, 0});
  if (it != objects_.end() && it->first.num == ref.num) return &it->second;
  return nullptr;
}

const PdfValue& PdfDocument::resolve(const PdfValue& value) const {
  const PdfValue* cur = &value;
  for (int depth = 0; depth < 32; ++depth) {
    const PdfRef* r = cur->ref();
    if (!r) return *cur;
    const PdfObject* obj = object(*r);
    if (!obj) return kNull;
    cur = &obj->value;
  }
  return kNull;
}

std::string PdfDocument::decode_stream(const PdfObject& object) const {
  if (!object.stream) return {};
  const PdfDict* d = object.value.dict();
  std::vector<std::string> filters;
  if (d) {
    if (auto it = d->find("Filter"); it != d->end()) {
      const PdfValue& f = resolve(it->second);
      if (const PdfName* n = f.name()) filters.push_back(n->value);
      if (const PdfArray* arr = f.array()) {
        for (const auto& item : *arr) {
          if (const PdfName* n = resolve(item).name()) filters.push_back(n->value);
        }
      }
    }
  }
  std::string data = *object.stream;
  for (const auto& f : filters) {
    if (f == "FlateDecode" || f == "Fl") {
      data = inflate(data);
    } else {
      throw UnreadableDocument("unsupported stream filter /" + f);
    }
  }
  return data;
}

void PdfDocument::build_page_tree() {
  const PdfDict* catalog = nullptr;
  auto find_root = [&](const PdfValue& holder) -> const PdfDict* {
    const PdfDict* d = holder.dict();
    if (!d) return nullptr;
    auto it = d->find("Root");
    return it == d->end() ? nullptr : resolve(it->second).dict();
  };
  if (trailer_) catalog = find_root(*trailer_);
  if (!catalog) {
    // Cross-reference streams carry the trailer keys in their dictionary.
    for (const auto& [ref, obj] : objects_) {
      const PdfDict* d = obj.value.dict();
      if (!d) continue;
      auto type = d->find("Type");
      if (type == d->end() || !type->second.name()) continue;
      if (type->second.name()->value == "XRef" && (catalog = find_root(obj.value))) break;
      if (type->second.name()->value == "Catalog") {
        catalog = d;
        break;
      }
    }
  }
  if (!catalog) {
    if (objects_.empty()) throw UnreadableDocument("no objects found");
    throw UnreadableDocument("no document catalog");
  }
  auto pages_it = catalog->find("Pages");
  if (pages_it == catalog->end()) return;  // a catalog without pages is an empty document

  std::set<const PdfDict*> visited;
  std::function<void(const PdfDict*, PdfBox, const PdfDict*, int)> walk =
      [&](const PdfDict* node, PdfBox box, const PdfDict* resources, int depth) {
        if (!node || depth > 64 || !visited.insert(node).second) return;
        if (auto it = node->find("MediaBox"); it != node->end()) box = box_from(*this, it->second, box);
        if (auto it = node->find("Resources"); it != node->end()) {
          if (const PdfDict* r = resolve(it->second).dict()) resources = r;
        }
        auto kids = node->find("Kids");
        auto type = node->find("Type");
        bool is_page = type != node->end() && type->second.name() &&
                       type->second.name()->value == "Page";
        if (is_page || kids == node->end()) {
          page_dicts_.push_back(PageEntry{node, box, resources});
          return;
        }
        if (const PdfArray* arr = resolve(kids->second).array()) {
          for (const auto& kid : *arr) walk(resolve(kid).dict(), box, resources, depth + 1);
        }
      };
  walk(resolve(pages_it->second).dict(), PdfBox{}, nullptr, 0);
}

PdfPage PdfDocument::page(int page_number) const {
  if (page_number < 1 || page_number > page_count()) {
    throw RenderFailure("page " + std::to_string(page_number) + " does not exist (document has " +
                        std::to_string(page_count()) + ")");
  }
  const PageEntry& entry = page_dicts_[page_number - 1];
  PdfPage page;
  page.number = page_number;
  page.media_box = entry.media_box;
  page.resources = entry.resources;
  auto append_stream = [&](const PdfValue& v) {
    const PdfRef* r = v.ref();
    const PdfObject* obj = r ? object(*r) : nullptr;
    if (!obj) return;
    page.content += decode_stream(*obj);
    page.content += '\n';
  };
  if (auto it = entry.dict->find("Contents"); it != entry.dict->end()) {
    if (const PdfArray* arr = resolve(it->second).array()) {
      for (const auto& item : *arr) append_stream(item);
    } else {
      append_stream(it->second);
    }
  }
  return page;
}

}  // namespace tabqa::ingest
