#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabqa/dataset/triplet.hpp"

namespace tabqa::dataset {

enum class Subset { kTrain, kTest };

std::string_view to_string(Subset s);
Subset subset_from_string(std::string_view s);

struct DatasetSplit {
  std::vector<std::string> train;  // sorted ids
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  const std::vector<std::string>& ids(Subset s) const { return s == Subset::kTrain ? train : test; }
};

ordered_json to_json(const DatasetSplit& s);
DatasetSplit split_from_json(const json& j);

/// Page-grouped split: all triplets of one image land on the same side and
/// train holds exactly `train_size` triplets. Deterministic for a fixed seed
/// on any platform. Throws InsufficientData when train_size exceeds the
/// count or no grouping reaches it exactly.
DatasetSplit split_dataset(std::span<const QATriplet> triplets, std::size_t train_size,
                           std::uint64_t seed);

}  // namespace tabqa::dataset
