#include "tabqa/lora/adapter_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "tabqa/error.hpp"
#include "tabqa/util.hpp"

namespace tabqa::lora {

namespace {

constexpr std::uint32_t kVersion = 1;

class Reader {
 public:
  explicit Reader(std::string_view bytes) : s_(bytes) {}

  bool done() const { return pos_ == s_.size(); }

  std::string_view take(std::size_t n, const char* what) {
    if (s_.size() - pos_ < n) {
      throw AdapterFormatError(std::string("truncated ") + what + " at byte " + std::to_string(pos_));
    }
    auto out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }

  std::uint64_t u64(const char* what) {
    auto b = take(8, what);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }

  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw AdapterFormatError(std::string(what) + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

WeightMatrix read_f32_matrix(Reader& in, std::size_t rows, std::size_t cols, const char* what) {
  WeightMatrix m(rows, cols);
  for (auto& v : m.data) {
    v = in.f32(what);
    if (!std::isfinite(v)) throw AdapterFormatError(std::string(what) + " has a non-finite entry");
  }
  return m;
}

// Guards allocation against corrupt headers claiming huge shapes.
void check_payload(std::size_t d, std::size_t k, std::size_t r, std::size_t remaining) {
  const std::size_t floats = remaining / 4;
  if (d > floats / r || k > floats / r || d * r + r * k > floats) throw AdapterFormatError("adapter header promises more data than the file holds");
}

}  // namespace

std::vector<NamedAdapter> parse_adapters(std::string_view bytes) {
  Reader in(bytes);
  std::vector<NamedAdapter> out;
  while (!in.done()) {
    if (in.take(4, "magic") != "LORA") throw AdapterFormatError("bad magic (expected LORA)");
    if (auto v = in.u32("version"); v != kVersion) {
      throw AdapterFormatError("unsupported adapter version " + std::to_string(v));
    }
    const std::size_t d = in.u32("d"), k = in.u32("k"), r = in.u32("r");
    const double alpha = in.f32("alpha");
    const std::size_t name_len = in.u32("name length");
    NamedAdapter a;
    a.module = std::string(in.take(name_len, "module name"));
    if (d == 0 || k == 0 || r == 0) throw AdapterFormatError("zero dimension in adapter header");
    check_payload(d, k, r, bytes.size());
    a.update.r = r;
    a.update.alpha = alpha;
    a.update.a = read_f32_matrix(in, d, r, "A");
    a.update.b = read_f32_matrix(in, r, k, "B");
    try {
      a.update.validate();
    } catch (const Error& e) {
      throw AdapterFormatError("adapter " + a.module + ": " + e.what());
    }
    out.push_back(std::move(a));
  }
  if (out.empty()) throw AdapterFormatError("empty adapter file");
  return out;
}

std::string serialize_adapters(const std::vector<NamedAdapter>& adapters) {
  std::string out;
  for (const auto& a : adapters) {
    a.update.validate();
    out += "LORA";
    put_u32(out, kVersion);
    put_u32(out, checked_u32(a.update.a.rows, "d"));
    put_u32(out, checked_u32(a.update.b.cols, "k"));
    put_u32(out, checked_u32(a.update.r, "r"));
    put_f32(out, a.update.alpha);
    put_u32(out, checked_u32(a.module.size(), "module name"));
    out += a.module;
    for (double v : a.update.a.data) put_f32(out, v);
    for (double v : a.update.b.data) put_f32(out, v);
  }
  return out;
}

std::vector<NamedAdapter> read_adapters(const std::filesystem::path& path) {
  try {
    return parse_adapters(read_file(path));
  } catch (const AdapterFormatError& e) {
    throw AdapterFormatError(path.string() + ": " + e.what());
  }
}

void write_adapters(const std::filesystem::path& path, const std::vector<NamedAdapter>& adapters) {
  write_file_atomic(path, serialize_adapters(adapters));
}

WeightMatrix parse_weight(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(4, "magic") != "WMAT") throw AdapterFormatError("bad magic (expected WMAT)");
  if (auto v = in.u32("version"); v != kVersion) {
    throw AdapterFormatError("unsupported weight version " + std::to_string(v));
  }
  const std::size_t d = in.u32("d"), k = in.u32("k");
  if (d == 0 || k == 0 || d > (bytes.size() - 16) / 8 / k || d * k * 8 != bytes.size() - 16) {
    throw AdapterFormatError("weight payload size does not match " + std::to_string(d) + "x" +
                             std::to_string(k));
  }
  WeightMatrix w(d, k);
  for (auto& v : w.data) v = in.f64("W");
  try {
    w.validate("W");
  } catch (const Error& e) {
    throw AdapterFormatError(e.what());
  }
  return w;
}

std::string serialize_weight(const WeightMatrix& w) {
  w.validate("W");
  std::string out = "WMAT";
  put_u32(out, kVersion);
  put_u32(out, checked_u32(w.rows, "d"));
  put_u32(out, checked_u32(w.cols, "k"));
  for (double v : w.data) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

WeightMatrix read_weight(const std::filesystem::path& path) {
  try {
    return parse_weight(read_file(path));
  } catch (const AdapterFormatError& e) {
    throw AdapterFormatError(path.string() + ": " + e.what());
  }
}

void write_weight(const std::filesystem::path& path, const WeightMatrix& w) {
  write_file_atomic(path, serialize_weight(w));
}

}  // namespace tabqa::lora
