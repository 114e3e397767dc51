#pragma once

#include <string>
#include <vector>

#include "tabqa/eval/verdict.hpp"

namespace tabqa::eval {

/// Lowercased, markdown emphasis and code ticks removed, whitespace
/// collapsed.
std::string normalize_answer(std::string_view text);

struct Quantity {
  std::string value;  // canonical decimal: no grouping commas, no trailing zeros
  std::string unit;   // canonical unit, empty when none was written
  friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// Numbers in normalized text with the unit that directly follows them.
/// Only recognised units are kept; "2 per support" yields {2, ""}.
std::vector<Quantity> extract_quantities(std::string_view normalized);

/// Deterministic grading. With numbers in the ground truth, every ground
/// truth quantity must appear in the generation with the same digits and a
/// compatible unit (an omitted unit on either side is compatible).
/// Otherwise the normalized ground truth must occur in the normalized
/// generation on word boundaries. An empty side is incorrect.
Label grade_with_matcher(std::string_view generated, std::string_view ground_truth);

}  // namespace tabqa::eval
