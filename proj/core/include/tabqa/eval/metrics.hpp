#pragma once

#include <optional>
#include <span>

#include "tabqa/eval/verdict.hpp"

namespace tabqa::eval {

struct RunReport {
  long n_correct = 0;
  long n_total = 0;
  double accuracy() const { return static_cast<double>(n_correct) / static_cast<double>(n_total); }
};

/// Throws EmptyRun.
RunReport accuracy(std::span<const Verdict> verdicts);

struct ConfusionMatrix {
  long both_correct = 0;
  long ft_only_correct = 0;
  long pre_only_correct = 0;
  long both_incorrect = 0;

  long total() const { return both_correct + ft_only_correct + pre_only_correct + both_incorrect; }
  RunReport pre_report() const { return {both_correct + pre_only_correct, total()}; }
  RunReport ft_report() const { return {both_correct + ft_only_correct, total()}; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Cross-tab joined on triplet id. Throws MisalignedRuns when the id sets
/// differ or an id repeats on one side.
ConfusionMatrix confusion(std::span<const Verdict> base, std::span<const Verdict> finetuned);

/// ft_only / pre_only. Unbounded when only the denominator is zero;
/// undefined when both are.
struct Ratio {
  enum class Kind { kFinite, kUnbounded, kUndefined } kind = Kind::kFinite;
  double value = 0;
};

struct StabilityMetrics {
  double relative_gain = 0;  // percent
  Ratio correction_to_regression;
};

/// relative_gain = (ft - pre) / pre * 100. Throws UndefinedGain when pre is 0.
double relative_gain(double pre_accuracy, double ft_accuracy);
Ratio correction_to_regression(const ConfusionMatrix& m);
StabilityMetrics stability(const ConfusionMatrix& m, double pre_accuracy, double ft_accuracy);

/// The integer regression count n with |corrections / n - ratio| <= tolerance
/// closest to corrections / ratio, if any.
std::optional<long> implied_regressions(long corrections, double ratio, double tolerance = 0.01);

/// Fixed two decimals with trailing zeros dropped, keeping one: 2.0, 3.33.
std::string format_ratio(double value);
std::string format_ratio(const Ratio& r);

}  // namespace tabqa::eval
