#include "tabqa/cli/config.hpp"

#include <cstdlib>
#include <set>

#include "tabqa/dataset/export.hpp"
#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::cli {

fs::path PipelineConfig::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : (base_dir / p).lexically_normal();
}

std::string interpolate_env(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      auto close = text.find('}', i + 2);
      if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config");
      std::string name(text.substr(i + 2, close - i - 2));
      const char* value = std::getenv(name.c_str());
      if (!value) throw ConfigError("config references unset environment variable " + name);
      out += value;
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

RoleEndpoint role_endpoint(const json& j, const std::string& role) {
  RoleEndpoint r;
  json copy = j;
  r.model_id = copy.value("model_id", role);
  copy.erase("model_id");
  r.endpoint = gateway::endpoint_config_from_json(copy);
  return r;
}

template <typename T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void take_path(const json& j, const char* key, fs::path& into) {
  if (j.contains(key)) into = fs::path(j.at(key).get<std::string>());
}

}  // namespace

PipelineConfig default_config(const fs::path& base_dir) {
  PipelineConfig c;
  c.base_dir = base_dir;
  c.export_system_prompt = dataset::kDefaultExportSystemPrompt;
  return c;
}

PipelineConfig parse_config(const json& j, const fs::path& base_dir) {
  PipelineConfig c = default_config(base_dir);
  try {
    reject_unknown(j, {"paths", "ingest", "endpoints", "curate", "split", "export", "run", "judge",
                       "comparisons"},
                   "config");
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      reject_unknown(p, {"corpus", "images", "dataset", "runs", "reports", "audit_log"}, "paths");
      take_path(p, "corpus", c.paths.corpus);
      take_path(p, "images", c.paths.images);
      take_path(p, "dataset", c.paths.dataset);
      take_path(p, "runs", c.paths.runs);
      take_path(p, "reports", c.paths.reports);
      take_path(p, "audit_log", c.paths.audit_log);
    }
    if (j.contains("ingest")) {
      reject_unknown(j["ingest"], {"zoom", "parallelism"}, "ingest");
      take(j["ingest"], "zoom", c.zoom);
      take(j["ingest"], "parallelism", c.ingest_parallelism);
    }
    if (j.contains("endpoints")) {
      const auto& e = j["endpoints"];
      reject_unknown(e, {"generator", "converter", "judge", "answerers"}, "endpoints");
      if (e.contains("generator")) c.generator = role_endpoint(e["generator"], "generator");
      if (e.contains("converter")) c.converter = role_endpoint(e["converter"], "converter");
      if (e.contains("judge")) c.judge = role_endpoint(e["judge"], "judge");
      if (e.contains("answerers")) {
        if (!e["answerers"].is_object()) throw ConfigError("endpoints.answerers must map model ids to endpoints");
        for (const auto& [model, cfg] : e["answerers"].items()) {
          c.answerers.emplace(model, gateway::endpoint_config_from_json(cfg));
        }
      }
    }
    if (j.contains("curate")) {
      const auto& s = j["curate"];
      reject_unknown(s, {"parallelism", "prompt", "max_output_tokens"}, "curate");
      take(s, "parallelism", c.curate_parallelism);
      if (s.contains("prompt")) c.generation_prompt = s["prompt"].get<std::string>();
      take(s, "max_output_tokens", c.generation_max_tokens);
    }
    if (j.contains("split")) {
      reject_unknown(j["split"], {"train_size", "seed"}, "split");
      take(j["split"], "train_size", c.train_size);
      take(j["split"], "seed", c.seed);
    }
    if (j.contains("export")) {
      reject_unknown(j["export"], {"system_prompt"}, "export");
      take(j["export"], "system_prompt", c.export_system_prompt);
    }
    if (j.contains("run")) {
      const auto& s = j["run"];
      reject_unknown(s, {"parallelism", "system_prompt", "conversion_prompt", "max_output_tokens",
                         "conversion_max_output_tokens", "temperature", "indirect_include_image"},
                     "run");
      take(s, "parallelism", c.run_parallelism);
      take(s, "system_prompt", c.answer.system_prompt);
      take(s, "conversion_prompt", c.answer.conversion_prompt);
      take(s, "max_output_tokens", c.answer.max_output_tokens);
      take(s, "conversion_max_output_tokens", c.answer.conversion_max_output_tokens);
      take(s, "temperature", c.answer.temperature);
      take(s, "indirect_include_image", c.answer.indirect_include_image);
    }
    if (j.contains("judge")) {
      const auto& s = j["judge"];
      reject_unknown(s, {"parallelism", "include_image", "max_output_tokens"}, "judge");
      take(s, "parallelism", c.judge_parallelism);
      take(s, "include_image", c.judge_options.include_image);
      take(s, "max_output_tokens", c.judge_options.max_output_tokens);
    }
    if (j.contains("comparisons")) {
      for (const auto& cmp : j["comparisons"]) c.comparisons.push_back(eval::comparison_from_json(cmp));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.converter) c.answer.converter_model_id = c.converter->model_id;
  if (c.judge) c.judge_options.model_id = c.judge->model_id;
  if (c.zoom <= 0) throw ConfigError("ingest.zoom must be positive");
  if (c.curate_parallelism == 0 || c.run_parallelism == 0 || c.judge_parallelism == 0 ||
      c.ingest_parallelism == 0) {
    throw ConfigError("parallelism settings must be at least 1");
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  const std::string text = interpolate_env(read_file(path));
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
  return parse_config(j, fs::absolute(path).parent_path());
}

std::string run_config_hash(const PipelineConfig& c, runners::Method method) {
  ordered_json j = {{"method", std::string(runners::to_string(method))},
                    {"system_prompt", c.answer.system_prompt},
                    {"max_output_tokens", c.answer.max_output_tokens},
                    {"temperature", c.answer.temperature}};
  if (method == runners::Method::kIndirect) {
    j["conversion_prompt"] = c.answer.conversion_prompt;
    j["conversion_max_output_tokens"] = c.answer.conversion_max_output_tokens;
    j["indirect_include_image"] = c.answer.indirect_include_image;
    j["converter"] = c.converter ? c.converter->model_id + "|" + c.converter->endpoint.model : "";
  }
  return sha256_hex(j.dump());
}

}  // namespace tabqa::cli
