#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tabqa::lora {

/// Dense row-major matrix of doubles.
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  WeightMatrix() = default;
  WeightMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  /// Throws ShapeMismatch (entry count) or NonFinite.
  void validate(const char* what = "matrix") const;
  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;
};

/// Low-rank update: delta W = A (d x r) times B (r x k).
struct LoraUpdate {
  WeightMatrix a;
  WeightMatrix b;
  std::size_t r = 0;
  double alpha = 1.0;
  double dropout = 0.0;  // training metadata; ignored when merging

  /// Throws ShapeMismatch (A, B and r disagree, r > min(d, k), r == 0) or
  /// NonFinite; also rejects alpha <= 0 and dropout outside [0, 1).
  void validate() const;
};

/// kUnscaled adds A*B as written; kAlphaOverR adds (alpha / r) * A*B.
enum class ScaleMode { kUnscaled, kAlphaOverR };

std::string_view to_string(ScaleMode m);
ScaleMode scale_mode_from_string(std::string_view s);

/// The dense update that merge() adds to W.
WeightMatrix delta(const LoraUpdate& update, ScaleMode mode = ScaleMode::kUnscaled);

/// W' = W + delta. Throws ShapeMismatch or NonFinite.
WeightMatrix merge(const WeightMatrix& w, const LoraUpdate& update,
                   ScaleMode mode = ScaleMode::kUnscaled);

/// Numeric rank of A*B, computed on the r x k factor R_A*B after a thin QR
/// of A. Never exceeds r.
std::size_t delta_rank_bound(const LoraUpdate& update);

}  // namespace tabqa::lora
