#include "tabqa/eval/matcher.hpp"

#include <algorithm>
#include <map>

namespace tabqa::eval {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool is_alnum(char c) { return is_digit(c) || is_alpha(c); }

const std::map<std::string, std::string, std::less<>>& unit_aliases() {
  static const std::map<std::string, std::string, std::less<>> kAliases = [] {
    std::map<std::string, std::string, std::less<>> m;
    auto add = [&](std::string canon, std::initializer_list<const char*> names) {
      for (const char* n : names) m.emplace(n, canon);
      m.emplace(canon, canon);
    };
    add("mm", {"millimetre", "millimetres", "millimeter", "millimeters"});
    add("cm", {"centimetre", "centimetres", "centimeter", "centimeters"});
    add("m", {"metre", "metres", "meter", "meters"});
    add("km", {"kilometre", "kilometres", "kilometer", "kilometers"});
    add("mm2", {"mm\xc2\xb2", "mm^2"});
    add("cm2", {"cm\xc2\xb2", "cm^2"});
    add("m2", {"m\xc2\xb2", "m^2", "sqm"});
    add("mm3", {"mm\xc2\xb3", "mm^3"});
    add("m3", {"m\xc2\xb3", "m^3"});
    add("in", {"inch", "inches"});
    add("ft", {"feet", "foot"});
    add("pa", {"pascal", "pascals"});
    add("kpa", {});
    add("mpa", {});
    add("n", {"newton", "newtons"});
    add("kn", {"kilonewton", "kilonewtons"});
    add("g", {"gram", "grams"});
    add("kg", {"kilogram", "kilograms"});
    add("l", {"litre", "litres", "liter", "liters"});
    add("min", {"mins", "minute", "minutes"});
    add("h", {"hr", "hrs", "hour", "hours"});
    add("s", {"sec", "secs", "second", "seconds"});
    add("%", {"percent"});
    add("\xc2\xb0" "c", {"\xc2\xb0", "deg", "degc", "degrees"});
    add("w", {"watt", "watts"});
    add("kw", {"kilowatt", "kilowatts"});
    add("storey", {"storeys", "story", "stories"});
    return m;
  }();
  return kAliases;
}

// Canonical unit for a raw token; "" when not a recognised unit.
std::string canonical_unit(std::string_view token) {
  if (token.empty()) return {};
  const auto& aliases = unit_aliases();
  std::string out;
  std::size_t start = 0;
  while (true) {
    auto slash = token.find('/', start);
    auto part = token.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    auto it = aliases.find(part);
    if (it == aliases.end()) return {};
    out += it->second;
    if (slash == std::string_view::npos) break;
    out += '/';
    start = slash + 1;
  }
  return out;
}

// Length of a unit-character sequence starting at i (ASCII letters, %, ^,
// digits after a letter or caret, '/', and the UTF-8 superscripts, degree
// and micro signs).
std::size_t unit_span(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size()) {
    char c = s[j];
    if (is_alpha(c) || c == '%' || c == '^' || c == '/') {
      ++j;
    } else if (is_digit(c) && j > i && (is_alpha(s[j - 1]) || s[j - 1] == '^')) {
      ++j;
    } else if (static_cast<unsigned char>(c) == 0xc2 && j + 1 < s.size() &&
               (static_cast<unsigned char>(s[j + 1]) == 0xb2 || static_cast<unsigned char>(s[j + 1]) == 0xb3 ||
                static_cast<unsigned char>(s[j + 1]) == 0xb0 || static_cast<unsigned char>(s[j + 1]) == 0xb5)) {
      j += 2;
    } else {
      break;
    }
  }
  return j - i;
}

std::string canonical_number(std::string digits) {
  digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
  const bool negative = !digits.empty() && digits[0] == '-';
  if (negative) digits.erase(0, 1);
  std::string whole = digits, frac;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    whole = digits.substr(0, dot);
    frac = digits.substr(dot + 1);
  }
  whole.erase(0, std::min(whole.find_first_not_of('0'), whole.size()));
  if (whole.empty()) whole = "0";
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = frac.empty() ? whole : whole + "." + frac;
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

std::string_view trim_punct(std::string_view s) {
  constexpr std::string_view kPunct = " .,;:!?\"'()[]";
  auto b = s.find_first_not_of(kPunct);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(kPunct);
  return s.substr(b, e - b + 1);
}

bool contains_on_word_boundary(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return false;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + 1)) {
    bool left = pos == 0 || !is_alnum(hay[pos - 1]) || !is_alnum(needle.front());
    auto end = pos + needle.size();
    bool right = end == hay.size() || !is_alnum(hay[end]) || !is_alnum(needle.back());
    if (left && right) return true;
  }
  return false;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '*' || c == '_' || c == '`') continue;
    if (static_cast<unsigned char>(c) == 0xc2 && i + 1 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0xa0) {
      out += ' ';
      ++i;
      continue;
    }
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return normalize_whitespace(out);
}

std::vector<Quantity> extract_quantities(std::string_view s) {
  std::vector<Quantity> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    // A digit glued to a preceding word ("b2", "x235") is not a quantity,
    // except for dimension pairs like "38x235".
    if (i > 0 && (is_alpha(s[i - 1]) || s[i - 1] == '.' || s[i - 1] == ',')) {
      bool dimension = s[i - 1] == 'x' && i > 1 && is_digit(s[i - 2]);
      if (!dimension) {
        while (i < s.size() && (is_digit(s[i]) || s[i] == '.' || s[i] == ',')) ++i;
        continue;
      }
    }
    std::size_t start = i;
    bool negative = start > 0 && s[start - 1] == '-' && (start == 1 || !is_alnum(s[start - 2]));
    while (i < s.size() && is_digit(s[i])) ++i;
    // Thousands groups: ",ddd" not followed by another digit.
    while (i + 3 < s.size() && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
           is_digit(s[i + 3]) && (i + 4 == s.size() || !is_digit(s[i + 4]))) {
      i += 4;
    }
    if (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) {
      ++i;
      while (i < s.size() && is_digit(s[i])) ++i;
    }
    Quantity q;
    q.value = canonical_number((negative ? "-" : "") + std::string(s.substr(start, i - start)));
    std::size_t u = i;
    if (u < s.size() && s[u] == ' ') ++u;
    std::size_t len = unit_span(s, u);
    while (len > 0 && s[u + len - 1] == '/') --len;
    std::string unit = canonical_unit(s.substr(u, len));
    if (!unit.empty()) {
      q.unit = std::move(unit);
      i = u + len;
    }
    out.push_back(std::move(q));
  }
  return out;
}

Label grade_with_matcher(std::string_view generated, std::string_view ground_truth) {
  const std::string gen = normalize_answer(generated);
  const std::string gt = normalize_answer(ground_truth);
  if (gen.empty() || gt.empty()) return Label::kIncorrect;

  const auto gt_q = extract_quantities(gt);
  if (!gt_q.empty()) {
    const auto gen_q = extract_quantities(gen);
    for (const auto& want : gt_q) {
      bool found = std::any_of(gen_q.begin(), gen_q.end(), [&](const Quantity& have) {
        return have.value == want.value &&
               (have.unit.empty() || want.unit.empty() || have.unit == want.unit);
      });
      if (!found) return Label::kIncorrect;
    }
    return Label::kCorrect;
  }
  return contains_on_word_boundary(trim_punct(gen), trim_punct(gt)) ? Label::kCorrect
                                                                    : Label::kIncorrect;
}

}  // namespace tabqa::eval
