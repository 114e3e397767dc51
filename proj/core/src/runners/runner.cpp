#include "tabqa/runners/runner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tabqa/error.hpp"
#include "tabqa/table/latex.hpp"

namespace fs = std::filesystem;

namespace tabqa::runners {

const std::string& default_answer_system_prompt() {
  static const std::string kPrompt =
      "Answer the question from the table you are given. Reply with the value and its unit only.";
  return kPrompt;
}

const std::string& default_conversion_prompt() {
  static const std::string kPrompt =
      "Transcribe the table in this image into a LaTeX tabular environment. Represent merged "
      "cells with \\multicolumn and \\multirow. Reply with the LaTeX code only.";
  return kPrompt;
}

namespace {

using gateway::ChatMessage;
using gateway::ChatRequest;
using gateway::ContentPart;
using gateway::Role;

ChatRequest base_request(const std::string& model_id, const AnswerOptions& options) {
  ChatRequest r;
  r.model_id = model_id;
  r.max_output_tokens = options.max_output_tokens;
  r.temperature = options.temperature;
  if (!options.system_prompt.empty()) {
    r.messages.push_back({Role::kSystem, {ContentPart::of_text(options.system_prompt)}});
  }
  return r;
}

gateway::ImagePayload png(const std::string& bytes) { return {bytes, "image/png"}; }

std::string trim(std::string s) {
  auto n = s.find_last_not_of(" \t\r\n");
  s.erase(n == std::string::npos ? 0 : n + 1);
  s.erase(0, std::min(s.size(), s.find_first_not_of(" \t\r\n")));
  return s;
}

// Converters often fence their LaTeX in markdown; the fence is not part of
// the table.
std::string strip_code_fence(const std::string& text) {
  auto open = text.find("```");
  if (open == std::string::npos) return text;
  auto body = text.find('\n', open);
  auto close = body == std::string::npos ? std::string::npos : text.find("```", body);
  if (close == std::string::npos) return text;
  return text.substr(body + 1, close - body - 1);
}

}  // namespace

GenerationRecord run_direct(const dataset::QATriplet& triplet, const std::string& image_png,
                            gateway::ChatClient& answerer, const std::string& model_id,
                            const AnswerOptions& options) {
  GenerationRecord rec;
  rec.triplet_id = triplet.id;
  rec.method = Method::kDirect;
  rec.model_id = model_id;

  ChatRequest req = base_request(model_id, options);
  req.messages.push_back(
      {Role::kUser, {ContentPart::of_image(png(image_png)), ContentPart::of_text(triplet.question)}});
  try {
    auto resp = answerer.complete(req);
    rec.generated_answer = trim(resp.text);
    rec.latency_ms = resp.latency_ms;
  } catch (const EndpointError& e) {
    rec.status = RecordStatus::kEndpointFailed;
    rec.error = e.kind() + ": " + e.what();
  }
  return rec;
}

GenerationRecord run_indirect(const dataset::QATriplet& triplet, const std::string& image_png,
                              gateway::ChatClient& converter, gateway::ChatClient& answerer,
                              const std::string& model_id, const AnswerOptions& options) {
  GenerationRecord rec;
  rec.triplet_id = triplet.id;
  rec.method = Method::kIndirect;
  rec.model_id = model_id;

  ChatRequest convert;
  convert.model_id = options.converter_model_id.empty() ? "converter" : options.converter_model_id;
  convert.max_output_tokens = options.conversion_max_output_tokens;
  convert.temperature = options.temperature;
  convert.messages.push_back({Role::kUser,
                              {ContentPart::of_image(png(image_png)),
                               ContentPart::of_text(options.conversion_prompt)}});
  std::string latex;
  try {
    auto resp = converter.complete(convert);
    latex = resp.text;
    rec.latency_ms += resp.latency_ms;
  } catch (const EndpointError& e) {
    rec.status = RecordStatus::kEndpointFailed;
    rec.error = "converter " + e.kind() + ": " + e.what();
    return rec;
  }
  rec.intermediate_latex = latex;
  try {
    table::parse_latex_table(strip_code_fence(latex));
  } catch (const MalformedTable& e) {
    rec.status = RecordStatus::kConversionFailed;
    rec.error = std::string("conversion: ") + e.what();
  }

  ChatRequest req = base_request(model_id, options);
  ChatMessage user{Role::kUser, {}};
  if (options.indirect_include_image) user.parts.push_back(ContentPart::of_image(png(image_png)));
  user.parts.push_back(ContentPart::of_text(latex));
  user.parts.push_back(ContentPart::of_text(triplet.question));
  req.messages.push_back(std::move(user));
  try {
    auto resp = answerer.complete(req);
    rec.generated_answer = trim(resp.text);
    rec.latency_ms += resp.latency_ms;
  } catch (const EndpointError& e) {
    rec.status = RecordStatus::kEndpointFailed;
    rec.error = e.kind() + ": " + e.what();
  }
  return rec;
}

ordered_json to_json(const RunManifest& m) {
  return {{"run_id", m.run_id},
          {"method", std::string(to_string(m.method))},
          {"subset", std::string(dataset::to_string(m.subset))},
          {"models", m.models},
          {"config_hash", m.config_hash},
          {"split_seed", m.split_seed},
          {"triplet_count", m.triplet_count},
          {"record_count", m.record_count}};
}

RunManifest run_manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.method = method_from_string(j.at("method").get<std::string>());
    m.subset = dataset::subset_from_string(j.at("subset").get<std::string>());
    m.models = j.at("models").get<std::vector<std::string>>();
    m.config_hash = j.value("config_hash", "");
    m.split_seed = j.value("split_seed", std::uint64_t{0});
    m.triplet_count = j.value("triplet_count", std::size_t{0});
    m.record_count = j.value("record_count", std::size_t{0});
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad run manifest: ") + e.what());
  }
}

RunManifest run_split(const dataset::DatasetSplit& split, std::span<const dataset::QATriplet> triplets,
                      const ingest::Manifest& images, const ClientResolver& clients,
                      const fs::path& runs_root, const RunRequest& request) {
  if (request.run_id.empty() || request.run_id.find('/') != std::string::npos ||
      request.run_id == "." || request.run_id == "..") {
    throw ConfigError("invalid run id: '" + request.run_id + "'");
  }
  const fs::path run_dir = runs_root / request.run_id;
  const fs::path manifest_path = run_dir / "manifest.json";

  RunManifest manifest;
  manifest.run_id = request.run_id;
  manifest.method = request.method;
  manifest.subset = request.subset;
  manifest.config_hash = request.config_hash;
  manifest.split_seed = split.seed;
  std::set<std::string> models(request.models.begin(), request.models.end());
  if (fs::exists(manifest_path)) {
    auto prior = run_manifest_from_json(json::parse(read_file(manifest_path)));
    if (prior.config_hash != request.config_hash || prior.method != request.method ||
        prior.subset != request.subset) {
      throw ConfigError("run '" + request.run_id +
                        "' exists with a different configuration; choose a new run id");
    }
    models.insert(prior.models.begin(), prior.models.end());
  }
  manifest.models.assign(models.begin(), models.end());

  std::map<std::string, const dataset::QATriplet*> by_id;
  for (const auto& t : triplets) by_id[t.id] = &t;
  std::vector<const dataset::QATriplet*> subset;
  for (const auto& id : split.ids(request.subset)) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ConfigError("split names unknown triplet " + id);
    subset.push_back(it->second);
  }
  manifest.triplet_count = subset.size();

  RecordStore store(run_dir);
  struct Task {
    const dataset::QATriplet* triplet;
    std::string model;
  };
  std::vector<Task> tasks;
  for (const auto& model : request.models) {
    clients(model);  // fail fast on unknown models
    for (const auto* t : subset) {
      if (!store.contains({t->id, request.method, model})) tasks.push_back({t, model});
    }
  }
  gateway::ChatClient* converter = nullptr;
  if (request.method == Method::kIndirect && !tasks.empty()) converter = &clients("");

  if (!request.dry_run) {
    fs::create_directories(run_dir);
    write_file_atomic(manifest_path, to_json(manifest).dump(2) + "\n");
  }

  parallel_for(tasks.size(), request.parallelism, [&](std::size_t i) {
    const auto& task = tasks[i];
    if (!images.find(task.triplet->image_file)) {
      throw MissingImage(task.triplet->id + ": " + task.triplet->image_file + " not in manifest");
    }
    const fs::path image = images.root() / task.triplet->image_file;
    if (!fs::exists(image)) throw MissingImage(image.string() + " does not exist");
    const std::string bytes = read_file(image);
    auto& answerer = clients(task.model);
    GenerationRecord rec =
        request.method == Method::kDirect
            ? run_direct(*task.triplet, bytes, answerer, task.model, request.answer)
            : run_indirect(*task.triplet, bytes, *converter, answerer, task.model, request.answer);
    if (!request.dry_run) store.append(rec);
  });
  manifest.executed = tasks.size();

  if (!request.dry_run) {
    store.compact();
    manifest.record_count = store.size();
    write_file_atomic(manifest_path, to_json(manifest).dump(2) + "\n");
  }
  return manifest;
}

}  // namespace tabqa::runners
