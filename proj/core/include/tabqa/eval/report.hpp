#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/dataset/triplet.hpp"
#include "tabqa/eval/metrics.hpp"
#include "tabqa/runners/record.hpp"

namespace tabqa::eval {

/// Accuracy of one (run, model, method) slice.
struct RunSummary {
  std::string run_id;
  std::string model_id;
  runners::Method method = runners::Method::kDirect;
  RunReport report;
};

struct RunSlice {
  std::string run_id;
  std::string model_id;
};

/// A pre-trained vs fine-tuned pairing to cross-tabulate.
struct Comparison {
  std::string label;
  RunSlice base;
  RunSlice finetuned;
  runners::Method method = runners::Method::kDirect;
};

Comparison comparison_from_json(const json& j);

struct ComparisonResult {
  Comparison comparison;
  ConfusionMatrix matrix;
  RunReport pre;
  RunReport ft;
  std::optional<StabilityMetrics> stability;  // absent when pre accuracy is 0
};

struct ReportData {
  std::vector<RunSummary> runs;
  std::vector<ComparisonResult> comparisons;
};

ComparisonResult compare(const Comparison& c, std::span<const Verdict> base,
                         std::span<const Verdict> finetuned);

/// Reads verdict stores under `runs_root` for every run id named.
ReportData build_report(const std::filesystem::path& runs_root, const std::vector<std::string>& run_ids,
                        const std::vector<Comparison>& comparisons);

ordered_json report_json(const ReportData& data);
std::string report_text(const ReportData& data);

/// Writes report.json and report.txt into `out_dir`.
void emit_report(const ReportData& data, const std::filesystem::path& out_dir);

/// For each comparison, `finetuned_generations_<label>.json`: an array of
/// {"Question", "Ground Truth", "Fine-tuned Generation"} covering every
/// record of the fine-tuned slice, ordered by triplet id.
void export_finetuned_generations(const std::filesystem::path& runs_root,
                                  const std::vector<Comparison>& comparisons,
                                  std::span<const dataset::QATriplet> triplets,
                                  const std::filesystem::path& out_dir);

}  // namespace tabqa::eval
