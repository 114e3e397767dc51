#include "tabqa/lora/lora.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tabqa/error.hpp"

namespace tabqa::lora {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;

ConstMap view(const WeightMatrix& m) {
  return ConstMap(m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

std::string shape(const WeightMatrix& m) {
  return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

}  // namespace

void WeightMatrix::validate(const char* what) const {
  if (data.size() != rows * cols) {
    throw ShapeMismatch(std::string(what) + " holds " + std::to_string(data.size()) +
                        " entries for shape " + shape(*this));
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw NonFinite(std::string(what) + " has a non-finite entry");
  }
}

void LoraUpdate::validate() const {
  a.validate("A");
  b.validate("B");
  if (r == 0) throw ShapeMismatch("rank r must be positive");
  if (a.cols != r || b.rows != r) {
    throw ShapeMismatch("A is " + shape(a) + " and B is " + shape(b) + " for r=" + std::to_string(r));
  }
  if (r > std::min(a.rows, b.cols)) {
    throw ShapeMismatch("r=" + std::to_string(r) + " exceeds min(d, k) for " + shape(a) + " * " +
                        shape(b));
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha is not finite");
  if (alpha <= 0) throw ShapeMismatch("alpha must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ShapeMismatch("dropout must lie in [0, 1)");
}

std::string_view to_string(ScaleMode m) {
  return m == ScaleMode::kUnscaled ? "unscaled" : "alpha_over_r";
}

ScaleMode scale_mode_from_string(std::string_view s) {
  if (s == "unscaled") return ScaleMode::kUnscaled;
  if (s == "alpha_over_r") return ScaleMode::kAlphaOverR;
  throw ConfigError("scale mode must be unscaled or alpha_over_r, got " + std::string(s));
}

WeightMatrix delta(const LoraUpdate& u, ScaleMode mode) {
  u.validate();
  const double scale = mode == ScaleMode::kUnscaled ? 1.0 : u.alpha / static_cast<double>(u.r);
  WeightMatrix out(u.a.rows, u.b.cols);
  Eigen::Map<RowMatrix>(out.data.data(), static_cast<Eigen::Index>(out.rows),
                        static_cast<Eigen::Index>(out.cols))
      .noalias() = scale * (view(u.a) * view(u.b));
  out.validate("delta W");
  return out;
}

WeightMatrix merge(const WeightMatrix& w, const LoraUpdate& update, ScaleMode mode) {
  w.validate("W");
  update.validate();
  if (w.rows != update.a.rows || w.cols != update.b.cols) {
    throw ShapeMismatch("W is " + shape(w) + " but A*B is " + std::to_string(update.a.rows) + "x" +
                        std::to_string(update.b.cols));
  }
  WeightMatrix out = delta(update, mode);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += w.data[i];
  out.validate("merged W");
  return out;
}

std::size_t delta_rank_bound(const LoraUpdate& update) {
  update.validate();
  Eigen::HouseholderQR<RowMatrix> qr_a(view(update.a));
  const auto r = static_cast<Eigen::Index>(update.r);
  RowMatrix r_a = qr_a.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  RowMatrix small = r_a * view(update.b);
  Eigen::ColPivHouseholderQR<RowMatrix> qr(small);
  // Relative threshold against the largest entry of the product's factor.
  const double max_abs = small.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0;
  qr.setThreshold(std::numeric_limits<double>::epsilon() *
                  static_cast<double>(std::max(small.rows(), small.cols())) * 16);
  return static_cast<std::size_t>(std::min<Eigen::Index>(qr.rank(), r));
}

}  // namespace tabqa::lora
