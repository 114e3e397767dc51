#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tabqa::lora {

/// Projection layers that may receive adapters.
const std::set<std::string>& module_registry();

/// The attention, feed-forward and visual projections adapted by default.
std::vector<std::string> default_target_modules();

class TargetModuleSet {
 public:
  /// Throws ConfigError for an empty set or a name outside the registry.
  explicit TargetModuleSet(const std::vector<std::string>& names = default_target_modules());

  const std::set<std::string>& names() const { return names_; }

  /// True when the last dotted component of `module_path` is in the set,
  /// e.g. "model.layers.0.self_attn.q_proj".
  bool matches(std::string_view module_path) const;

 private:
  std::set<std::string> names_;
};

}  // namespace tabqa::lora
