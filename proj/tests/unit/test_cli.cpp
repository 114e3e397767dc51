#include <cstdlib>
#include <random>

#include "doctest.h"
#include "support/images.hpp"
#include "support/pipeline_fixture.hpp"
#include "support/workspace.hpp"
#include "tabqa/cli/config.hpp"
#include "tabqa/dataset/triplet.hpp"
#include "tabqa/error.hpp"
#include "tabqa/eval/verdict.hpp"
#include "tabqa/lora/adapter_io.hpp"
#include "tabqa/testkit/pdf_writer.hpp"

using namespace tabqa;
using testsupport::run_cli;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  ::setenv("TABQA_CLI_TEST_URL", "http://127.0.0.1:9/v1", 1);
  CHECK(cli::interpolate_env("a ${TABQA_CLI_TEST_URL} b") == "a http://127.0.0.1:9/v1 b");
  CHECK_THROWS_AS(cli::interpolate_env("${TABQA_SURELY_UNSET_VAR}"), ConfigError);

  json j = {{"paths", {{"runs", "out/runs"}}},
            {"endpoints",
             {{"judge", {{"model_id", "judge-x"}, {"base_url", "http://h/v1"}, {"api_key_env", "JUDGE_KEY"}}},
              {"answerers", {{"a", {{"base_url", "http://h/v1"}}}}}}},
            {"split", {{"train_size", 4}}}};
  auto c = cli::parse_config(j, "/base");
  CHECK(c.resolve(c.paths.runs) == fs::path("/base/out/runs"));
  CHECK(c.judge_options.model_id == "judge-x");
  CHECK(c.judge->endpoint.api_key_env == "JUDGE_KEY");
  CHECK(c.answerers.count("a") == 1);
  CHECK(c.train_size == 4);

  CHECK_THROWS_AS(cli::parse_config(json{{"bogus", 1}}, "/"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json{{"paths", {{"bogus", "x"}}}}, "/"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json{{"ingest", {{"zoom", -1}}}}, "/"), ConfigError);

  auto d = cli::default_config("/w");
  const auto direct = cli::run_config_hash(d, runners::Method::kDirect);
  CHECK(direct != cli::run_config_hash(d, runners::Method::kIndirect));
  d.answer.conversion_prompt = "changed";
  CHECK(cli::run_config_hash(d, runners::Method::kDirect) == direct);
  d.answer.max_output_tokens = 7;
  CHECK(cli::run_config_hash(d, runners::Method::kDirect) != direct);
}

TEST_CASE("exit codes and error lines") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"run"}).code == 2);
  auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("merge-adapter") != std::string::npos);

  auto missing = run_cli({"--config", "/nonexistent/tabqa.json", "report"});
  CHECK(missing.code == 1);
  auto err = json::parse(missing.err);
  CHECK(err["error"]["kind"] == "ConfigError");
}

TEST_CASE("pre-rendered images through curate edits, split and export") {
  testsupport::TempDir dir;
  auto manifest = testsupport::make_image_manifest(dir.path() / "data", 3);
  auto pages = manifest.entries();
  write_file_atomic(dir.path() / "config.json",
                    json{{"paths", {{"images", "data"}, {"dataset", "ds"}}}, {"split", {{"train_size", 2}}}}.dump());
  const std::string cfg = (dir.path() / "config.json").string();

  // triplets added by hand: two on page 0, one each on pages 1 and 2
  std::string edits;
  int n = 0;
  for (int p : {0, 0, 1, 2}) {
    edits += json{{"op", "add"},
                  {"image_file", pages[p].image_path},
                  {"Question", "question " + std::to_string(n)},
                  {"Answer", std::to_string(n) + " mm"}}
                 .dump() +
             "\n";
    ++n;
  }
  write_file_atomic(dir.path() / "edits.jsonl", edits);
  auto dry = run_cli({"--config", cfg, "--dry-run", "curate", "--apply-edits", (dir.path() / "edits.jsonl").string()});
  REQUIRE(dry.code == 0);
  CHECK_FALSE(fs::exists(dir.path() / "ds" / dataset::TripletStore::kEditsFile));
  auto applied = run_cli({"--config", cfg, "curate", "--apply-edits", (dir.path() / "edits.jsonl").string()});
  REQUIRE(applied.code == 0);
  CHECK(json::parse(applied.out)["triplets"] == 4);

  auto split = run_cli({"--config", cfg, "split", "--seed", "3"});
  REQUIRE(split.code == 0);
  CHECK(json::parse(split.out)["train"] == 2);
  auto bad_split = run_cli({"--config", cfg, "split", "--train-size", "9"});
  CHECK(bad_split.code == 1);
  CHECK(json::parse(bad_split.err)["error"]["kind"] == "InsufficientData");

  auto exported = run_cli({"--config", cfg, "export", "--subset", "train"});
  REQUIRE(exported.code == 0);
  auto records = json::parse(read_file(dir.path() / "ds" / "chat_train.json"));
  CHECK(records.size() == 2);
  CHECK(records[0]["messages"][1]["content"][0]["image"].get<std::string>().rfind("../data/", 0) == 0);
}

TEST_CASE("ingest from the fixture pdf and dry runs") {
  testsupport::TempDir dir;
  const auto cfg = testsupport::write_pipeline_workspace(dir.path(), "http://127.0.0.1:1/v1").string();
  auto plan = run_cli({"--config", cfg, "--dry-run", "ingest"});
  REQUIRE(plan.code == 0);
  CHECK(json::parse(plan.out)["documents"][0]["table_pages"] == json::array({2}));
  CHECK_FALSE(fs::exists(dir.path() / "data/images/manifest.jsonl"));

  auto pages = run_cli({"--config", cfg, "ingest", "--pages", "1,3", "--zoom", "1"});
  REQUIRE(pages.code == 0);
  auto out = json::parse(pages.out);
  CHECK(out["dpi"] == 100);
  CHECK(out["documents"][0]["images"].size() == 2);
  CHECK(run_cli({"--config", cfg, "ingest", "--pages", "x-y"}).code == 1);

  // generation is planned but nothing is sent or stored
  auto curate = run_cli({"--config", cfg, "--dry-run", "curate"});
  REQUIRE(curate.code == 0);
  CHECK(json::parse(curate.out)["pending_pages"] == 2);
  CHECK_FALSE(fs::exists(dir.path() / "data/dataset/triplets.jsonl"));
}

TEST_CASE("dry-run requests reach the audit log only") {
  testkit::MockChatServer server(testkit::rules_from_json(testsupport::pipeline_script()));
  server.start();
  testsupport::TempDir dir;
  const auto cfg = testsupport::write_pipeline_workspace(dir.path(), server.base_url()).string();
  for (auto stage : {"ingest", "curate", "split"}) REQUIRE(run_cli({"--config", cfg, stage}).code == 0);
  const auto before = server.received().size();
  auto dry = run_cli({"--config", cfg, "--dry-run", "run", "--run-id", "d"});
  REQUIRE(dry.code == 0);
  CHECK(server.received().size() == before);
  CHECK_FALSE(fs::exists(dir.path() / "runs/d/records.jsonl"));
  std::size_t dry_entries = 0;
  for (const auto& line : read_json_lines(dir.path() / "logs/audit.jsonl")) {
    dry_entries += line["outcome"] == "dry_run" ? 1 : 0;
    CHECK_FALSE(line.contains("body"));
  }
  CHECK(dry_entries == 4);

  auto unknown = run_cli({"--config", cfg, "run", "--run-id", "d", "--models", "nobody"});
  CHECK(unknown.code == 1);
  auto log = run_cli({"--config", cfg, "--log-json", "run", "--run-id", "d", "--models", "base-model"});
  REQUIRE(log.code == 0);
  auto changed = run_cli({"--config", cfg, "run", "--run-id", "d", "--method", "indirect"});
  CHECK(changed.code == 1);
  CHECK(json::parse(changed.err)["error"]["kind"] == "ConfigError");
  server.stop();
}

TEST_CASE("report reproduces the stability table from stored verdicts") {
  struct Row {
    const char* model;
    long both, ft_only, pre_only, neither;
    const char* ratio;
  };
  const Row rows[] = {{"llama-3.2-11b", 36, 12, 6, 46, "2.0"},
                      {"qwen2-vl-2b", 33, 13, 5, 49, "2.6"},
                      {"qwen2-vl-7b", 17, 31, 10, 42, "3.1"},
                      {"qwen2.5-vl-3b", 11, 30, 9, 50, "3.33"},
                      {"qwen2.5-vl-7b", 14, 22, 5, 59, "4.4"}};
  testsupport::TempDir dir;
  json comparisons = json::array();
  std::mt19937_64 rng(11);
  for (const auto& r : rows) {
    std::vector<std::pair<bool, bool>> cases;
    cases.insert(cases.end(), r.both, {true, true});
    cases.insert(cases.end(), r.ft_only, {false, true});
    cases.insert(cases.end(), r.pre_only, {true, false});
    cases.insert(cases.end(), r.neither, {false, false});
    std::shuffle(cases.begin(), cases.end(), rng);
    std::vector<eval::Verdict> pre, ft;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      eval::Verdict v;
      v.triplet_id = "t" + std::to_string(1000 + i);
      v.grader = eval::Grader::kMatcher;
      v.model_id = r.model;
      v.label = cases[i].first ? eval::Label::kCorrect : eval::Label::kIncorrect;
      pre.push_back(v);
      v.model_id = std::string(r.model) + "-ft";
      v.label = cases[i].second ? eval::Label::kCorrect : eval::Label::kIncorrect;
      ft.push_back(v);
    }
    eval::VerdictStore(dir.path() / "runs" / "pretrained").upsert(pre);
    eval::VerdictStore(dir.path() / "runs" / "finetuned").upsert(ft);
    comparisons.push_back({{"label", r.model},
                           {"base", {{"run", "pretrained"}, {"model", r.model}}},
                           {"finetuned", {{"run", "finetuned"}, {"model", std::string(r.model) + "-ft"}}},
                           {"method", "direct"}});
  }
  write_file_atomic(dir.path() / "config.json", json{{"comparisons", comparisons}}.dump());
  const std::string cfg = (dir.path() / "config.json").string();
  auto rep = run_cli({"--config", cfg, "report"});
  REQUIRE(rep.code == 0);
  std::istringstream lines(rep.out);
  std::string line;
  std::map<std::string, std::string> ratio_by_model;
  bool in_stability = false;
  while (std::getline(lines, line)) {
    if (line.rfind("Fine-tuning stability", 0) == 0) in_stability = true;
    if (!in_stability) continue;
    std::istringstream cols(line);
    std::vector<std::string> words;
    for (std::string w; cols >> w;) words.push_back(w);
    if (words.size() == 4) ratio_by_model[words[0]] = words[3];
  }
  for (const auto& r : rows) CHECK(ratio_by_model[r.model] == r.ratio);
  CHECK(read_file(dir.path() / "reports/report.txt") == rep.out);
  auto again = run_cli({"--config", cfg, "report"});
  CHECK(again.out == rep.out);
}

TEST_CASE("merge-adapter") {
  testsupport::TempDir dir;
  lora::LoraUpdate u;
  u.a = lora::WeightMatrix(3, 2, 0.5);
  u.b = lora::WeightMatrix(2, 4, 0.25);
  u.r = 2;
  u.alpha = 32;
  lora::write_adapters(dir.path() / "a.lora", {{"model.layers.0.self_attn.q_proj", u}, {"lm_head", u}});
  lora::write_weight(dir.path() / "w.wmat", lora::WeightMatrix(3, 4, 1.0));
  const auto out = (dir.path() / "merged.wmat").string();
  std::vector<std::string> base = {"merge-adapter", "--weight", (dir.path() / "w.wmat").string(),
                                   "--adapter", (dir.path() / "a.lora").string(), "--out", out};
  auto ambiguous = run_cli(base);
  CHECK(ambiguous.code == 1);

  auto args = base;
  args.insert(args.end(), {"--module", "model.layers.0.self_attn.q_proj"});
  auto r = run_cli(args);
  REQUIRE(r.code == 0);
  auto summary = json::parse(r.out);
  CHECK(summary["delta_rank"] == 1);
  CHECK(summary["scale_mode"] == "unscaled");
  auto merged = lora::read_weight(out);
  CHECK(merged.at(2, 3) == doctest::Approx(1.25));

  args.insert(args.end(), {"--scale-mode", "alpha_over_r"});
  REQUIRE(run_cli(args).code == 0);
  CHECK(lora::read_weight(out).at(0, 0) == doctest::Approx(1.0 + 16.0 * 0.25));

  auto mismatch = base;
  lora::write_weight(dir.path() / "w.wmat", lora::WeightMatrix(4, 4, 1.0));
  mismatch.insert(mismatch.end(), {"--module", "lm_head"});
  auto bad = run_cli(mismatch);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("outside the default target set") != std::string::npos);
  const auto last = bad.err.substr(bad.err.rfind('\n', bad.err.size() - 2) + 1);
  CHECK(json::parse(last)["error"]["kind"] == "ShapeMismatch");
}

TEST_CASE("mock endpoints end to end with a 4/1 split") {
  testkit::PdfWriter pdf;
  for (const char* title : {"Nails", "Screws", "Staples"}) pdf.add_page(testkit::table_page(title, testkit::fastener_table()));
  auto qa = [](int i) { return json{{"Question", "Question number " + std::to_string(i) + "?"}, {"Answer", "51 mm"}}.dump(); };
  json script = {{"rules",
                  {{{"model", "gen-model"},
                    {"contains", {"Two QA pair"}},
                    {"replies",
                     {{{"text", qa(1) + qa(2)}}, {{"text", qa(3) + qa(4)}}, {{"text", qa(5)}}}}},
                   {{"model", "base-model"}, {"contains", {"Question number"}}, {"replies", {{{"text", "51 mm"}}}}},
                   {{"model", "judge-model"}, {"contains", {"CORRECT or INCORRECT"}}, {"replies", {{{"text", "CORRECT"}}}}}}}};
  testkit::MockChatServer server(testkit::rules_from_json(script));
  server.start();
  testsupport::TempDir dir;
  auto config = testsupport::pipeline_config(server.base_url());
  config["split"] = {{"train_size", 4}, {"seed", 1}};
  config["comparisons"] = json::array();
  config["endpoints"]["answerers"].erase("ft-model");
  fs::create_directories(dir.path() / "corpus");
  write_file_atomic(dir.path() / "corpus" / "three_tables.pdf", pdf.bytes());
  write_file_atomic(dir.path() / "config.json", config.dump());
  const std::string cfg = (dir.path() / "config.json").string();

  auto ingest = run_cli({"--config", cfg, "ingest"});
  REQUIRE(ingest.code == 0);
  CHECK(json::parse(ingest.out)["documents"][0]["images"].size() == 3);
  REQUIRE(run_cli({"--config", cfg, "curate"}).code == 0);
  auto split = run_cli({"--config", cfg, "split"});
  REQUIRE(split.code == 0);
  CHECK(json::parse(split.out)["train"] == 4);
  CHECK(json::parse(split.out)["test"] == 1);
  REQUIRE(run_cli({"--config", cfg, "run", "--run-id", "r"}).code == 0);
  REQUIRE(run_cli({"--config", cfg, "judge", "--run-id", "r"}).code == 0);
  auto report = run_cli({"--config", cfg, "report"});
  REQUIRE(report.code == 0);
  CHECK(report.out.find("r    base-model  direct  1        1      100.00%") != std::string::npos);
  server.stop();
}
