#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tabqa/lora/lora.hpp"

namespace tabqa::lora {

// Adapter file: one or more records, all integers little-endian.
//   "LORA"  u32 version (1)  u32 d  u32 k  u32 r  f32 alpha
//   u32 name_len  name bytes (UTF-8 module name)
//   f32 A[d*r] row-major  f32 B[r*k] row-major
//
// Weight file: "WMAT"  u32 version (1)  u32 d  u32 k  f64 W[d*k] row-major.

struct NamedAdapter {
  std::string module;
  LoraUpdate update;
};

/// Throws AdapterFormatError.
std::vector<NamedAdapter> parse_adapters(std::string_view bytes);
std::string serialize_adapters(const std::vector<NamedAdapter>& adapters);

/// Throws IoError or AdapterFormatError.
std::vector<NamedAdapter> read_adapters(const std::filesystem::path& path);
void write_adapters(const std::filesystem::path& path, const std::vector<NamedAdapter>& adapters);

WeightMatrix parse_weight(std::string_view bytes);
std::string serialize_weight(const WeightMatrix& w);
WeightMatrix read_weight(const std::filesystem::path& path);
void write_weight(const std::filesystem::path& path, const WeightMatrix& w);

}  // namespace tabqa::lora
