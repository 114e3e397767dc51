#include "tabqa/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "tabqa/error.hpp"

namespace tabqa::eval {

RunReport accuracy(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) throw EmptyRun("accuracy of an empty run");
  RunReport r;
  r.n_total = static_cast<long>(verdicts.size());
  for (const auto& v : verdicts) r.n_correct += v.correct() ? 1 : 0;
  return r;
}

namespace {

std::map<std::string, bool> index_by_id(std::span<const Verdict> vs, const char* side) {
  std::map<std::string, bool> out;
  for (const auto& v : vs) {
    if (!out.emplace(v.triplet_id, v.correct()).second) {
      throw MisalignedRuns(std::string(side) + " run grades triplet " + v.triplet_id + " twice");
    }
  }
  return out;
}

}  // namespace

ConfusionMatrix confusion(std::span<const Verdict> base, std::span<const Verdict> finetuned) {
  auto pre = index_by_id(base, "base");
  auto ft = index_by_id(finetuned, "fine-tuned");
  if (pre.size() != ft.size()) {
    throw MisalignedRuns("runs cover " + std::to_string(pre.size()) + " and " +
                         std::to_string(ft.size()) + " triplets");
  }
  ConfusionMatrix m;
  for (const auto& [id, pre_ok] : pre) {
    auto it = ft.find(id);
    if (it == ft.end()) throw MisalignedRuns("triplet " + id + " missing from the fine-tuned run");
    const bool ft_ok = it->second;
    if (pre_ok && ft_ok) {
      ++m.both_correct;
    } else if (ft_ok) {
      ++m.ft_only_correct;
    } else if (pre_ok) {
      ++m.pre_only_correct;
    } else {
      ++m.both_incorrect;
    }
  }
  return m;
}

double relative_gain(double pre_accuracy, double ft_accuracy) {
  if (pre_accuracy == 0.0) throw UndefinedGain("relative gain over a zero pre-trained accuracy");
  return (ft_accuracy - pre_accuracy) / pre_accuracy * 100.0;
}

Ratio correction_to_regression(const ConfusionMatrix& m) {
  if (m.pre_only_correct > 0) {
    return {Ratio::Kind::kFinite,
            static_cast<double>(m.ft_only_correct) / static_cast<double>(m.pre_only_correct)};
  }
  return {m.ft_only_correct > 0 ? Ratio::Kind::kUnbounded : Ratio::Kind::kUndefined, 0.0};
}

StabilityMetrics stability(const ConfusionMatrix& m, double pre_accuracy, double ft_accuracy) {
  return {relative_gain(pre_accuracy, ft_accuracy), correction_to_regression(m)};
}

std::optional<long> implied_regressions(long corrections, double ratio, double tolerance) {
  if (ratio <= 0 || corrections <= 0) return std::nullopt;
  const long center = std::lround(static_cast<double>(corrections) / ratio);
  std::optional<long> best;
  double best_err = 0;
  for (long n = std::max(1L, center - 1); n <= center + 1; ++n) {
    double err = std::fabs(static_cast<double>(corrections) / static_cast<double>(n) - ratio);
    if (err <= tolerance + 1e-12 && (!best || err < best_err)) {
      best = n;
      best_err = err;
    }
  }
  return best;
}

std::string format_ratio(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string format_ratio(const Ratio& r) {
  switch (r.kind) {
    case Ratio::Kind::kFinite: return format_ratio(r.value);
    case Ratio::Kind::kUnbounded: return "unbounded";
    case Ratio::Kind::kUndefined: return "n/a";
  }
  return "n/a";
}

}  // namespace tabqa::eval
