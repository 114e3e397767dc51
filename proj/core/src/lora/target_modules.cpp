#include "tabqa/lora/target_modules.hpp"

#include "tabqa/error.hpp"

namespace tabqa::lora {

const std::set<std::string>& module_registry() {
  static const std::set<std::string> kRegistry = {
      "q_proj",  "k_proj",  "v_proj",      "o_proj",   "gate_proj", "up_proj",
      "down_proj", "visual_proj", "out_proj", "fc1",      "fc2",      "qkv",
  };
  return kRegistry;
}

std::vector<std::string> default_target_modules() {
  return {"q_proj", "k_proj", "v_proj", "gate_proj", "down_proj", "up_proj", "visual_proj"};
}

TargetModuleSet::TargetModuleSet(const std::vector<std::string>& names) {
  if (names.empty()) throw ConfigError("target module set is empty");
  for (const auto& n : names) {
    if (!module_registry().count(n)) throw ConfigError("unknown target module: " + n);
    names_.insert(n);
  }
}

bool TargetModuleSet::matches(std::string_view module_path) const {
  auto dot = module_path.rfind('.');
  auto leaf = dot == std::string_view::npos ? module_path : module_path.substr(dot + 1);
  return names_.count(std::string(leaf)) > 0;
}

}  // namespace tabqa::lora
