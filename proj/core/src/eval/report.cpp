#include "tabqa/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::eval {

Comparison comparison_from_json(const json& j) {
  try {
    Comparison c;
    c.label = j.at("label").get<std::string>();
    c.base = {j.at("base").at("run").get<std::string>(), j.at("base").at("model").get<std::string>()};
    c.finetuned = {j.at("finetuned").at("run").get<std::string>(),
                   j.at("finetuned").at("model").get<std::string>()};
    c.method = runners::method_from_string(j.value("method", "direct"));
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad comparison entry: ") + e.what());
  }
}

ComparisonResult compare(const Comparison& c, std::span<const Verdict> base,
                         std::span<const Verdict> finetuned) {
  ComparisonResult r;
  r.comparison = c;
  r.matrix = confusion(base, finetuned);
  if (r.matrix.total() == 0) throw EmptyRun("comparison '" + c.label + "' has no graded triplets");
  r.pre = r.matrix.pre_report();
  r.ft = r.matrix.ft_report();
  if (r.pre.n_correct > 0) r.stability = stability(r.matrix, r.pre.accuracy(), r.ft.accuracy());
  return r;
}

namespace {

std::vector<Verdict> slice(std::span<const Verdict> all, const std::string& model, runners::Method m) {
  std::vector<Verdict> out;
  for (const auto& v : all) {
    if (v.model_id == model && v.method == m) out.push_back(v);
  }
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string percent(const RunReport& r) { return fmt("%.2f%%", 100.0 * r.accuracy()); }

// Left-aligned plain-text table with two spaces between columns.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      line += rows[r][c];
      if (c + 1 < rows[r].size()) line += std::string(width[c] - rows[r][c].size() + 2, ' ');
    }
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c + 1 < width.size() ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

}  // namespace

ReportData build_report(const fs::path& runs_root, const std::vector<std::string>& run_ids,
                        const std::vector<Comparison>& comparisons) {
  std::map<std::string, std::vector<Verdict>> by_run;
  auto load = [&](const std::string& run) -> const std::vector<Verdict>& {
    auto it = by_run.find(run);
    if (it != by_run.end()) return it->second;
    if (!fs::exists(runs_root / run)) throw ConfigError("unknown run " + run);
    return by_run.emplace(run, VerdictStore(runs_root / run).verdicts()).first->second;
  };

  ReportData data;
  std::vector<std::string> ids = run_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& run : ids) {
    std::map<std::pair<std::string, runners::Method>, RunReport> groups;
    for (const auto& v : load(run)) {
      auto& g = groups[{v.model_id, v.method}];
      ++g.n_total;
      g.n_correct += v.correct() ? 1 : 0;
    }
    for (const auto& [key, report] : groups) data.runs.push_back({run, key.first, key.second, report});
  }
  for (const auto& c : comparisons) {
    auto base = slice(load(c.base.run_id), c.base.model_id, c.method);
    auto ft = slice(load(c.finetuned.run_id), c.finetuned.model_id, c.method);
    data.comparisons.push_back(compare(c, base, ft));
  }
  return data;
}

ordered_json report_json(const ReportData& data) {
  ordered_json runs = ordered_json::array();
  for (const auto& r : data.runs) {
    runs.push_back({{"run_id", r.run_id},
                    {"model_id", r.model_id},
                    {"method", std::string(runners::to_string(r.method))},
                    {"n_correct", r.report.n_correct},
                    {"n_total", r.report.n_total},
                    {"accuracy", r.report.accuracy()}});
  }
  ordered_json comps = ordered_json::array();
  for (const auto& c : data.comparisons) {
    const auto& m = c.matrix;
    ordered_json j = {
        {"label", c.comparison.label},
        {"method", std::string(runners::to_string(c.comparison.method))},
        {"base", {{"run_id", c.comparison.base.run_id}, {"model_id", c.comparison.base.model_id}}},
        {"finetuned",
         {{"run_id", c.comparison.finetuned.run_id}, {"model_id", c.comparison.finetuned.model_id}}},
        {"confusion",
         {{"both_correct", m.both_correct},
          {"ft_only_correct", m.ft_only_correct},
          {"pre_only_correct", m.pre_only_correct},
          {"both_incorrect", m.both_incorrect}}},
        {"pre_accuracy", c.pre.accuracy()},
        {"ft_accuracy", c.ft.accuracy()}};
    if (c.stability) {
      j["relative_gain_pct"] = c.stability->relative_gain;
      const auto& ratio = c.stability->correction_to_regression;
      if (ratio.kind == Ratio::Kind::kFinite) {
        j["correction_to_regression"] = ratio.value;
      } else {
        j["correction_to_regression"] = format_ratio(ratio);
      }
    } else {
      j["relative_gain_pct"] = nullptr;
      j["correction_to_regression"] = format_ratio(correction_to_regression(m));
    }
    comps.push_back(std::move(j));
  }
  return {{"runs", std::move(runs)}, {"comparisons", std::move(comps)}};
}

std::string report_text(const ReportData& data) {
  if (data.runs.empty() && data.comparisons.empty()) return "no runs\n";
  std::string out;
  if (!data.runs.empty()) {
    std::vector<std::vector<std::string>> rows{{"Run", "Model", "Method", "Correct", "Total", "Accuracy"}};
    for (const auto& r : data.runs) {
      rows.push_back({r.run_id, r.model_id, std::string(runners::to_string(r.method)),
                      std::to_string(r.report.n_correct), std::to_string(r.report.n_total),
                      percent(r.report)});
    }
    out += "Accuracy\n\n" + render_table(rows);
  }
  if (!data.comparisons.empty()) {
    if (!out.empty()) out += "\n";
    std::vector<std::vector<std::string>> rows{{"Model", "Corrections (FT-only correct)",
                                                "Regressions (Pre-only correct)",
                                                "Correction-to-Regression Ratio"}};
    std::vector<std::vector<std::string>> gains{
        {"Model", "Method", "Both", "FT-only", "Pre-only", "Neither", "Pre acc", "FT acc", "Relative gain"}};
    for (const auto& c : data.comparisons) {
      const auto& m = c.matrix;
      rows.push_back({c.comparison.label, std::to_string(m.ft_only_correct),
                      std::to_string(m.pre_only_correct), format_ratio(correction_to_regression(m))});
      gains.push_back({c.comparison.label, std::string(runners::to_string(c.comparison.method)),
                       std::to_string(m.both_correct), std::to_string(m.ft_only_correct),
                       std::to_string(m.pre_only_correct), std::to_string(m.both_incorrect),
                       percent(c.pre), percent(c.ft),
                       c.stability ? fmt("%.2f%%", c.stability->relative_gain) : "n/a"});
    }
    out += "Fine-tuning stability\n\n" + render_table(rows) + "\n" + render_table(gains);
  }
  return out;
}

void emit_report(const ReportData& data, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "report.json", report_json(data).dump(2) + "\n");
  write_file_atomic(out_dir / "report.txt", report_text(data));
}

void export_finetuned_generations(const fs::path& runs_root, const std::vector<Comparison>& comparisons,
                                  std::span<const dataset::QATriplet> triplets, const fs::path& out_dir) {
  std::map<std::string, const dataset::QATriplet*> by_id;
  for (const auto& t : triplets) by_id[t.id] = &t;
  fs::create_directories(out_dir);
  for (const auto& c : comparisons) {
    std::map<std::string, ordered_json> rows;
    for (const auto& r : runners::RecordStore(runs_root / c.finetuned.run_id).records()) {
      if (r.model_id != c.finetuned.model_id || r.method != c.method) continue;
      auto it = by_id.find(r.triplet_id);
      if (it == by_id.end()) throw ConfigError("record names unknown triplet " + r.triplet_id);
      rows[r.triplet_id] = {{"Question", it->second->question},
                            {"Ground Truth", it->second->answer},
                            {"Fine-tuned Generation", r.generated_answer}};
    }
    ordered_json array = ordered_json::array();
    for (auto& [id, row] : rows) array.push_back(std::move(row));
    std::string name = c.label;
    for (auto& ch : name) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '_';
    }
    write_file_atomic(out_dir / ("finetuned_generations_" + name + ".json"), array.dump(2) + "\n");
  }
}

}  // namespace tabqa::eval
