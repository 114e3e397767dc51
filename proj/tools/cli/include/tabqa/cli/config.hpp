#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/eval/judge.hpp"
#include "tabqa/eval/report.hpp"
#include "tabqa/gateway/endpoint_config.hpp"
#include "tabqa/runners/runner.hpp"
#include "tabqa/util.hpp"

namespace tabqa::cli {

/// An endpoint plus the model id written into requests and records.
struct RoleEndpoint {
  std::string model_id;
  gateway::EndpointConfig endpoint;
};

struct PipelineConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this

  struct Paths {
    std::filesystem::path corpus = "corpus";
    std::filesystem::path images = "data/images";
    std::filesystem::path dataset = "data/dataset";
    std::filesystem::path runs = "runs";
    std::filesystem::path reports = "reports";
    std::filesystem::path audit_log = "logs/audit.jsonl";
  } paths;

  double zoom = 3.0;
  std::size_t ingest_parallelism = 4;

  std::optional<RoleEndpoint> generator;
  std::optional<RoleEndpoint> converter;
  std::optional<RoleEndpoint> judge;
  std::map<std::string, gateway::EndpointConfig> answerers;  // by model id

  std::size_t curate_parallelism = 4;
  std::optional<std::string> generation_prompt;
  int generation_max_tokens = 1024;

  std::size_t train_size = 400;
  std::uint64_t seed = 0;

  std::string export_system_prompt;

  std::size_t run_parallelism = 4;
  runners::AnswerOptions answer;

  std::size_t judge_parallelism = 4;
  eval::JudgeOptions judge_options;

  std::vector<eval::Comparison> comparisons;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Replaces ${NAME} with the environment variable NAME. Throws ConfigError
/// when a referenced variable is unset.
std::string interpolate_env(std::string_view text);

/// Parses a JSON config (after env interpolation). Unknown top-level keys
/// are rejected. Throws ConfigError.
PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
/// Defaults with paths under `base_dir`.
PipelineConfig default_config(const std::filesystem::path& base_dir);

/// Hash of the settings shared by every model of a run: prompts, decoding
/// parameters and, for the indirect method, the converter. Models may be
/// added to an existing run; these settings may not change.
std::string run_config_hash(const PipelineConfig& config, runners::Method method);

}  // namespace tabqa::cli
