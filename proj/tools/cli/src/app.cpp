#include "tabqa/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "tabqa/cli/config.hpp"
#include "tabqa/dataset/curation.hpp"
#include "tabqa/dataset/export.hpp"
#include "tabqa/dataset/split.hpp"
#include "tabqa/error.hpp"
#include "tabqa/eval/judge.hpp"
#include "tabqa/eval/report.hpp"
#include "tabqa/gateway/gateway.hpp"
#include "tabqa/ingest/ingest.hpp"
#include "tabqa/lora/adapter_io.hpp"
#include "tabqa/lora/target_modules.hpp"
#include "tabqa/runners/runner.hpp"

namespace fs = std::filesystem;

namespace tabqa::cli {

namespace {

class Logger {
 public:
  Logger(std::ostream& err, bool json_lines) : err_(err), json_(json_lines) {}

  void info(std::string_view msg, const json& fields = json::object()) { write("info", msg, fields); }
  void warn(std::string_view msg, const json& fields = json::object()) { write("warn", msg, fields); }

 private:
  void write(std::string_view level, std::string_view msg, const json& fields) {
    if (json_) {
      ordered_json line = {{"level", level}, {"msg", msg}};
      for (const auto& [k, v] : fields.items()) line[k] = v;
      err_ << line.dump() << "\n";
    } else {
      err_ << "tabqa: " << level << ": " << msg;
      if (!fields.empty()) err_ << " " << fields.dump();
      err_ << "\n";
    }
  }

  std::ostream& err_;
  bool json_;
};

struct Context {
  PipelineConfig config;
  bool dry_run = false;
  Logger log;
  std::ostream& out;
  std::shared_ptr<gateway::AuditLog> audit;

  std::shared_ptr<gateway::AuditLog> audit_log() {
    if (!audit) {
      fs::path p = config.resolve(config.paths.audit_log);
      fs::create_directories(p.parent_path());
      audit = std::make_shared<gateway::FileAuditLog>(p);
    }
    return audit;
  }

  std::shared_ptr<gateway::ModelGateway> client(const gateway::EndpointConfig& endpoint, const std::string& role) {
    gateway::ModelGateway::Options o;
    o.role = role;
    o.audit = audit_log();
    o.dry_run = dry_run;
    return std::make_shared<gateway::ModelGateway>(endpoint, std::move(o));
  }

  ingest::Manifest manifest(bool must_exist = true) const {
    fs::path p = config.resolve(config.paths.images) / ingest::Manifest::kFileName;
    if (must_exist && !fs::exists(p)) throw ConfigError("no image manifest at " + p.string() + "; run ingest first");
    return ingest::Manifest(p);
  }

  fs::path split_path() const { return config.resolve(config.paths.dataset) / "split.json"; }

  dataset::DatasetSplit load_split() const {
    if (!fs::exists(split_path())) throw ConfigError("no split at " + split_path().string() + "; run split first");
    return dataset::split_from_json(json::parse(read_file(split_path())));
  }
};

std::vector<int> parse_pages(const std::string& spec) {
  std::vector<int> pages;
  for (const auto& part : split(spec, ',')) {
    auto item = normalize_whitespace(part);
    if (item.empty()) continue;
    try {
      auto dash = item.find('-');
      if (dash == std::string::npos) {
        pages.push_back(std::stoi(item));
      } else {
        int a = std::stoi(item.substr(0, dash)), b = std::stoi(item.substr(dash + 1));
        if (b < a) throw ConfigError("bad page range " + item);
        for (int p = a; p <= b; ++p) pages.push_back(p);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad page list: " + spec);
    }
  }
  std::sort(pages.begin(), pages.end());
  pages.erase(std::unique(pages.begin(), pages.end()), pages.end());
  if (pages.empty() || pages.front() < 1) throw ConfigError("page numbers are 1-based: " + spec);
  return pages;
}

std::vector<fs::path> expand_pdfs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        auto ext = to_lower_ascii(e.path().extension().string());
        if (e.is_regular_file() && ext == ".pdf") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(in)) {
      out.push_back(in);
    } else {
      throw UnreadableDocument("no such document: " + in.string());
    }
  }
  return out;
}

void emit(Context& ctx, const ordered_json& summary) { ctx.out << summary.dump() << "\n"; }

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::vector<std::string> pdfs;
  std::string out_dir;
  std::optional<double> zoom;
  std::string pages;
  std::string from_images;
  int default_dpi = 300;
};

void cmd_ingest(Context& ctx, const IngestArgs& a) {
  fs::path out_dir = !a.out_dir.empty()       ? fs::path(a.out_dir)
                     : !a.from_images.empty() ? fs::path(a.from_images)
                                              : ctx.config.resolve(ctx.config.paths.images);
  ingest::Manifest manifest(out_dir / ingest::Manifest::kFileName);
  ordered_json summary = {{"command", "ingest"}, {"manifest", manifest.path().string()}};

  if (!a.from_images.empty()) {
    if (ctx.dry_run) {
      summary["dry_run"] = true;
      emit(ctx, summary);
      return;
    }
    auto pages = ingest::import_images(a.from_images, manifest, a.default_dpi);
    summary["images"] = pages.size();
    emit(ctx, summary);
    return;
  }

  std::vector<fs::path> inputs;
  for (const auto& p : a.pdfs) inputs.emplace_back(p);
  if (inputs.empty()) inputs.push_back(ctx.config.resolve(ctx.config.paths.corpus));
  ingest::IngestOptions options;
  options.zoom = a.zoom.value_or(ctx.config.zoom);
  options.parallelism = ctx.config.ingest_parallelism;
  if (!a.pages.empty()) options.pages = parse_pages(a.pages);

  ordered_json docs = ordered_json::array();
  for (const auto& path : expand_pdfs(inputs)) {
    auto pdf = ingest::PdfDocument::open(path);
    ordered_json doc = {{"doc_id", pdf.doc_id()}, {"page_count", pdf.page_count()}};
    if (ctx.dry_run) {
      doc["table_pages"] = options.pages ? *options.pages : ingest::scan_for_table_pages(pdf);
    } else {
      auto rendered = ingest::ingest_pdf(pdf, manifest, options);
      ordered_json images = ordered_json::array();
      for (const auto& p : rendered) images.push_back(p.image_path);
      doc["images"] = std::move(images);
      ctx.log.info("ingested", {{"doc_id", pdf.doc_id()}, {"pages", rendered.size()}});
    }
    docs.push_back(std::move(doc));
  }
  summary["dpi"] = ingest::dpi_for_zoom(options.zoom);
  summary["documents"] = std::move(docs);
  if (ctx.dry_run) summary["dry_run"] = true;
  emit(ctx, summary);
}

// ---------------------------------------------------------------- curate

struct CurateArgs {
  std::string apply_edits;
};

void cmd_curate(Context& ctx, const CurateArgs& a) {
  auto manifest = ctx.manifest();
  dataset::TripletStore store(ctx.config.resolve(ctx.config.paths.dataset));
  ordered_json summary = {{"command", "curate"}};

  if (!a.apply_edits.empty()) {
    std::vector<dataset::TripletEdit> edits;
    if (!fs::exists(a.apply_edits)) throw IoError("no such edits file: " + a.apply_edits);
    for (const auto& j : read_json_lines(a.apply_edits)) edits.push_back(dataset::edit_from_json(j));
    if (ctx.dry_run) {
      dataset::replay_edits(store.triplets(), edits, manifest);
    } else {
      store.apply_edits(edits, manifest);
    }
    summary["edits"] = edits.size();
    summary["triplets"] = store.triplets().size();
    if (ctx.dry_run) summary["dry_run"] = true;
    emit(ctx, summary);
    return;
  }

  if (!ctx.config.generator) throw ConfigError("endpoints.generator is not configured");
  if (ctx.dry_run) {
    std::set<std::string> curated;
    for (const auto& t : store.generated()) curated.insert(t.image_file);
    std::size_t pending = 0;
    for (const auto& p : manifest.entries()) pending += curated.count(p.image_path) ? 0 : 1;
    summary["pending_pages"] = pending;
    summary["dry_run"] = true;
    emit(ctx, summary);
    return;
  }
  auto generator = ctx.client(ctx.config.generator->endpoint, "generator");
  dataset::CurationOptions options;
  options.generation.model_id = ctx.config.generator->model_id;
  if (ctx.config.generation_prompt) options.generation.prompt = *ctx.config.generation_prompt;
  options.generation.max_output_tokens = ctx.config.generation_max_tokens;
  options.parallelism = std::min<std::size_t>(ctx.config.curate_parallelism,
                                              static_cast<std::size_t>(ctx.config.generator->endpoint.max_in_flight));
  auto s = dataset::curate(manifest, store, *generator, options);
  summary["pages"] = s.pages_considered;
  summary["skipped"] = s.pages_skipped;
  summary["added"] = s.triplets_added;
  summary["failures"] = s.failures;
  summary["triplets"] = store.triplets().size();
  if (s.failures) ctx.log.warn("curation failures recorded", {{"count", s.failures}});
  emit(ctx, summary);
}

// ---------------------------------------------------------------- split

struct SplitArgs {
  std::optional<std::size_t> train_size;
  std::optional<std::uint64_t> seed;
};

void cmd_split(Context& ctx, const SplitArgs& a) {
  dataset::TripletStore store(ctx.config.resolve(ctx.config.paths.dataset));
  auto triplets = store.triplets();
  auto problems = dataset::verify_triplets(triplets, ctx.manifest());
  if (!problems.empty()) throw MissingImage("dataset integrity: " + problems.front());
  auto split = dataset::split_dataset(triplets, a.train_size.value_or(ctx.config.train_size),
                                      a.seed.value_or(ctx.config.seed));
  if (!ctx.dry_run) write_file_atomic(ctx.split_path(), dataset::to_json(split).dump(2) + "\n");
  ordered_json summary = {{"command", "split"},
                          {"train", split.train.size()},
                          {"test", split.test.size()},
                          {"seed", split.seed}};
  if (ctx.dry_run) summary["dry_run"] = true;
  emit(ctx, summary);
}

// ---------------------------------------------------------------- export

struct ExportArgs {
  std::string subset = "train";
  std::string out;
  std::optional<std::string> system_prompt;
};

void cmd_export(Context& ctx, const ExportArgs& a) {
  auto subset = dataset::subset_from_string(a.subset);
  auto split = ctx.load_split();
  dataset::TripletStore store(ctx.config.resolve(ctx.config.paths.dataset));
  auto triplets = store.triplets();
  fs::path out = a.out.empty() ? ctx.config.resolve(ctx.config.paths.dataset) / ("chat_" + a.subset + ".json")
                               : fs::path(a.out);
  ordered_json summary = {{"command", "export"}, {"subset", a.subset}, {"records", split.ids(subset).size()}};
  if (ctx.dry_run) {
    summary["dry_run"] = true;
  } else {
    dataset::export_chat_dataset(split, subset, triplets, ctx.manifest(),
                                 a.system_prompt.value_or(ctx.config.export_system_prompt), out);
    summary["out"] = out.string();
  }
  emit(ctx, summary);
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string run_id;
  std::string method = "direct";
  std::vector<std::string> models;
  std::string subset = "test";
  bool include_image = false;
};

void cmd_run(Context& ctx, const RunArgs& a) {
  runners::RunRequest req;
  req.run_id = a.run_id;
  req.method = runners::method_from_string(a.method);
  req.subset = dataset::subset_from_string(a.subset);
  req.dry_run = ctx.dry_run;
  req.answer = ctx.config.answer;
  if (a.include_image) req.answer.indirect_include_image = true;
  req.parallelism = ctx.config.run_parallelism;
  if (a.models.empty()) {
    for (const auto& [model, cfg] : ctx.config.answerers) req.models.push_back(model);
  } else {
    for (const auto& m : a.models) {
      for (const auto& part : split(m, ',')) {
        auto name = normalize_whitespace(part);
        if (!name.empty()) req.models.push_back(name);
      }
    }
  }
  if (req.models.empty()) throw ConfigError("no answerer models configured or selected");
  std::map<std::string, std::shared_ptr<gateway::ModelGateway>> clients;
  for (const auto& m : req.models) {
    auto it = ctx.config.answerers.find(m);
    if (it == ctx.config.answerers.end()) throw ConfigError("model '" + m + "' has no endpoint in endpoints.answerers");
    clients[m] = ctx.client(it->second, "answerer");
  }
  if (req.method == runners::Method::kIndirect) {
    if (!ctx.config.converter) throw ConfigError("indirect runs need endpoints.converter");
    clients[""] = ctx.client(ctx.config.converter->endpoint, "converter");
  }
  req.config_hash = run_config_hash(ctx.config, req.method);

  auto split = ctx.load_split();
  dataset::TripletStore store(ctx.config.resolve(ctx.config.paths.dataset));
  auto triplets = store.triplets();
  auto resolver = [&](const std::string& model) -> gateway::ChatClient& {
    auto it = clients.find(model);
    if (it == clients.end()) throw ConfigError("no client for model '" + model + "'");
    return *it->second;
  };
  auto m = runners::run_split(split, triplets, ctx.manifest(), resolver,
                              ctx.config.resolve(ctx.config.paths.runs), req);
  ordered_json summary = {{"command", "run"},
                          {"run_id", m.run_id},
                          {"method", std::string(runners::to_string(m.method))},
                          {"models", m.models},
                          {"triplets", m.triplet_count},
                          {"executed", m.executed},
                          {"records", m.record_count}};
  if (ctx.dry_run) summary["dry_run"] = true;
  emit(ctx, summary);
}

// ---------------------------------------------------------------- judge

struct JudgeArgs {
  std::vector<std::string> run_ids;
  bool include_image = false;
  bool matcher_only = false;
};

void cmd_judge(Context& ctx, const JudgeArgs& a) {
  dataset::TripletStore store(ctx.config.resolve(ctx.config.paths.dataset));
  auto triplets = store.triplets();
  auto options = ctx.config.judge_options;
  if (a.include_image) options.include_image = true;
  std::shared_ptr<gateway::ModelGateway> judge;
  if (!a.matcher_only) {
    if (ctx.config.judge) {
      judge = ctx.client(ctx.config.judge->endpoint, "judge");
    } else {
      ctx.log.warn("endpoints.judge is not configured; grading with the matcher only");
    }
  }
  auto manifest = ctx.manifest(false);
  ordered_json runs = ordered_json::array();
  for (const auto& run_id : a.run_ids) {
    fs::path dir = ctx.config.resolve(ctx.config.paths.runs) / run_id;
    if (ctx.dry_run) {
      runners::RecordStore records(dir);
      std::set<eval::Verdict::Key> done;
      for (const auto& v : eval::VerdictStore(dir).verdicts()) done.insert(v.key());
      std::size_t pending = 0;
      for (const auto& r : records.records()) pending += done.count({r.model_id, r.triplet_id, r.method}) ? 0 : 1;
      runs.push_back({{"run_id", run_id}, {"pending", pending}});
      continue;
    }
    auto s = eval::judge_run(dir, triplets, manifest, judge.get(), options, ctx.config.judge_parallelism);
    runs.push_back({{"run_id", run_id}, {"records", s.records}, {"graded", s.graded}, {"fallbacks", s.fallbacks}});
  }
  ordered_json summary = {{"command", "judge"}, {"runs", std::move(runs)}};
  if (ctx.dry_run) summary["dry_run"] = true;
  emit(ctx, summary);
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> run_ids;
  std::string out_dir;
};

void cmd_report(Context& ctx, const ReportArgs& a) {
  const fs::path runs_root = ctx.config.resolve(ctx.config.paths.runs);
  std::vector<std::string> runs = a.run_ids;
  if (runs.empty() && fs::is_directory(runs_root)) {
    for (const auto& e : fs::directory_iterator(runs_root)) {
      if (e.is_directory() && fs::exists(e.path() / eval::VerdictStore::kFileName)) {
        runs.push_back(e.path().filename().string());
      }
    }
  }
  auto data = eval::build_report(runs_root, runs, ctx.config.comparisons);
  const fs::path out = a.out_dir.empty() ? ctx.config.resolve(ctx.config.paths.reports) : fs::path(a.out_dir);
  if (!ctx.dry_run) {
    eval::emit_report(data, out);
    const fs::path dataset_dir = ctx.config.resolve(ctx.config.paths.dataset);
    if (!ctx.config.comparisons.empty() && fs::exists(dataset_dir / dataset::TripletStore::kTripletsFile)) {
      auto triplets = dataset::TripletStore(dataset_dir).triplets();
      eval::export_finetuned_generations(runs_root, ctx.config.comparisons, triplets, out);
    }
    ctx.log.info("report written", {{"dir", out.string()}});
  }
  ctx.out << eval::report_text(data);
}

// ---------------------------------------------------------------- merge-adapter

struct MergeArgs {
  std::string weight;
  std::string adapter;
  std::string module;
  std::string out;
  std::string scale_mode = "unscaled";
};

void cmd_merge(Context& ctx, const MergeArgs& a) {
  auto mode = lora::scale_mode_from_string(a.scale_mode);
  auto adapters = lora::read_adapters(a.adapter);
  const lora::NamedAdapter* chosen = nullptr;
  if (a.module.empty()) {
    if (adapters.size() != 1) throw ConfigError("adapter file holds several modules; pass --module");
    chosen = &adapters.front();
  } else {
    for (const auto& ad : adapters) {
      if (ad.module == a.module) chosen = &ad;
    }
    if (!chosen) throw ConfigError("adapter file has no module '" + a.module + "'");
  }
  if (!lora::TargetModuleSet(lora::default_target_modules()).matches(chosen->module)) {
    ctx.log.warn("module is outside the default target set", {{"module", chosen->module}});
  }
  auto w = lora::read_weight(a.weight);
  auto merged = lora::merge(w, chosen->update, mode);
  if (!ctx.dry_run) lora::write_weight(a.out, merged);
  ordered_json summary = {{"command", "merge-adapter"},
                          {"module", chosen->module},
                          {"d", merged.rows},
                          {"k", merged.cols},
                          {"r", chosen->update.r},
                          {"alpha", chosen->update.alpha},
                          {"scale_mode", std::string(lora::to_string(mode))},
                          {"delta_rank", lora::delta_rank_bound(chosen->update)}};
  if (ctx.dry_run) {
    summary["dry_run"] = true;
  } else {
    summary["out"] = a.out;
  }
  emit(ctx, summary);
}

void print_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table question-answering evaluation pipeline", "tabqa"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool dry_run = false;
  bool log_json = false;
  app.add_option("--config", config_path, "Pipeline config (JSON, ${VAR} interpolation)");
  app.add_flag("--dry-run", dry_run, "Plan and audit without mutating stores or sending requests");
  app.add_flag("--log-json", log_json, "Emit log lines as JSON");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Render table pages of PDFs into the image manifest");
  ingest->add_option("--pdf", ingest_args.pdfs, "PDF files or directories (default: corpus path)");
  ingest->add_option("--out-dir", ingest_args.out_dir, "Image directory holding manifest.jsonl");
  ingest->add_option("--zoom", ingest_args.zoom, "Render zoom; 3.0 is 300 DPI")->check(CLI::PositiveNumber);
  ingest->add_option("--pages", ingest_args.pages, "Pages to render, e.g. 2,5-7 (skips detection)");
  ingest->add_option("--from-images", ingest_args.from_images, "Register pre-rendered PNGs instead")
      ->check(CLI::ExistingDirectory);
  ingest->add_option("--default-dpi", ingest_args.default_dpi, "DPI for PNGs without resolution metadata");

  CurateArgs curate_args;
  auto* curate = app.add_subcommand("curate", "Generate QA triplets or apply manual edits");
  curate->add_option("--apply-edits", curate_args.apply_edits, "NDJSON edit log to validate and append");

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Page-grouped train/test split");
  split_cmd->add_option("--train-size", split_args.train_size, "Triplets in the training side");
  split_cmd->add_option("--seed", split_args.seed, "Shuffle seed");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Write the chat-message dataset for fine-tuning");
  export_cmd->add_option("--subset", export_args.subset, "train or test")->check(CLI::IsMember({"train", "test"}));
  export_cmd->add_option("--out", export_args.out, "Output JSON file");
  export_cmd->add_option("--system-prompt", export_args.system_prompt, "System message text");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Answer a split with the direct or indirect method");
  run->add_option("--run-id", run_args.run_id, "Run directory name")->required();
  run->add_option("--method", run_args.method, "direct or indirect")->check(CLI::IsMember({"direct", "indirect"}));
  run->add_option("--models", run_args.models, "Answerer model ids (default: all configured)")->delimiter(',');
  run->add_option("--subset", run_args.subset, "train or test")->check(CLI::IsMember({"train", "test"}));
  run->add_flag("--include-image", run_args.include_image, "Indirect: send the page image with the LaTeX");

  JudgeArgs judge_args;
  auto* judge = app.add_subcommand("judge", "Grade run records against ground truth");
  judge->add_option("--run-id", judge_args.run_ids, "Run(s) to grade")->required()->delimiter(',');
  judge->add_flag("--include-image", judge_args.include_image, "Send the page image to the judge");
  judge->add_flag("--matcher-only", judge_args.matcher_only, "Skip the judge endpoint");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Accuracy, confusion and stability report");
  report->add_option("--runs", report_args.run_ids, "Runs to include (default: all graded runs)")->delimiter(',');
  report->add_option("--out-dir", report_args.out_dir, "Report directory (default: reports path)");

  MergeArgs merge_args;
  auto* merge = app.add_subcommand("merge-adapter", "Merge a LoRA adapter into a weight matrix");
  merge->add_option("--weight", merge_args.weight, "WMAT weight file")->required()->check(CLI::ExistingFile);
  merge->add_option("--adapter", merge_args.adapter, "LORA adapter file")->required()->check(CLI::ExistingFile);
  merge->add_option("--module", merge_args.module, "Module record to merge");
  merge->add_option("--out", merge_args.out, "Merged WMAT output")->required();
  merge->add_option("--scale-mode", merge_args.scale_mode, "unscaled or alpha_over_r")
      ->check(CLI::IsMember({"unscaled", "alpha_over_r"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "tabqa: " << e.what() << "\n";
    auto* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failed->help();
    return 2;
  }

  try {
    PipelineConfig config = config_path.empty() ? default_config(fs::current_path()) : load_config(config_path);
    Context ctx{std::move(config), dry_run, Logger(err, log_json), out, nullptr};
    if (ingest->parsed()) {
      cmd_ingest(ctx, ingest_args);
    } else if (curate->parsed()) {
      cmd_curate(ctx, curate_args);
    } else if (split_cmd->parsed()) {
      cmd_split(ctx, split_args);
    } else if (export_cmd->parsed()) {
      cmd_export(ctx, export_args);
    } else if (run->parsed()) {
      cmd_run(ctx, run_args);
    } else if (judge->parsed()) {
      cmd_judge(ctx, judge_args);
    } else if (report->parsed()) {
      cmd_report(ctx, report_args);
    } else if (merge->parsed()) {
      cmd_merge(ctx, merge_args);
    }
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    return 1;
  }
  return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"tabqa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tabqa::cli
