#include "doctest.h"
#include "support/images.hpp"
#include "support/workspace.hpp"
#include "tabqa/error.hpp"
#include "tabqa/runners/runner.hpp"
#include "tabqa/testkit/fakes.hpp"

using namespace tabqa;
using namespace tabqa::runners;
using testkit::ScriptedClient;

namespace {

const char* kLatex = "\\begin{tabular}{ll} Item & Value \\\\ \\hline a & 1 \\\\ \\end{tabular}";

dataset::QATriplet triplet(const std::string& id, const std::string& image) {
  return {id, "What is the value for " + id + "?", "1", image, dataset::Provenance::kGenerated};
}

}  // namespace

TEST_CASE("direct method sends image and question") {
  ScriptedClient answerer({"  1 mm \n"});
  AnswerOptions opts;
  auto rec = run_direct(triplet("t1", "img.png"), "PNGDATA", answerer, "model-a", opts);
  CHECK(rec.status == RecordStatus::kOk);
  CHECK(rec.generated_answer == "1 mm");
  CHECK(rec.method == Method::kDirect);
  auto reqs = answerer.requests();
  REQUIRE(reqs.size() == 1);
  CHECK(reqs[0].model_id == "model-a");
  CHECK(reqs[0].messages.front().role == gateway::Role::kSystem);
  CHECK(reqs[0].image_count() == 1);
  CHECK(reqs[0].messages.back().parts.back().text == "What is the value for t1?");

  ScriptedClient failing({ScriptedClient::kFail});
  auto failed = run_direct(triplet("t1", "img.png"), "PNGDATA", failing, "model-a", opts);
  CHECK(failed.status == RecordStatus::kEndpointFailed);
  CHECK(failed.generated_answer.empty());
  CHECK_FALSE(failed.error.empty());
}

TEST_CASE("indirect method transcribes then answers from text") {
  ScriptedClient converter({std::string("```latex\n") + kLatex + "\n```"});
  ScriptedClient answerer({"1"});
  AnswerOptions opts;
  opts.converter_model_id = "conv";
  auto rec = run_indirect(triplet("t1", "img.png"), "PNGDATA", converter, answerer, "model-a", opts);
  CHECK(rec.status == RecordStatus::kOk);
  REQUIRE(rec.intermediate_latex.has_value());
  CHECK(rec.intermediate_latex->find("tabular") != std::string::npos);
  CHECK(converter.requests()[0].model_id == "conv");
  CHECK(converter.requests()[0].image_count() == 1);
  auto areq = answerer.requests().at(0);
  CHECK(areq.image_count() == 0);
  CHECK(areq.messages.back().parts.front().text.find("tabular") != std::string::npos);

  opts.indirect_include_image = true;
  ScriptedClient answerer2({"1"});
  run_indirect(triplet("t1", "img.png"), "PNGDATA", converter, answerer2, "model-a", opts);
  CHECK(answerer2.requests().at(0).image_count() == 1);
}

TEST_CASE("indirect failure modes") {
  AnswerOptions opts;
  ScriptedClient garbled({"I cannot see a table"});
  ScriptedClient answerer({"guess"});
  auto rec = run_indirect(triplet("t1", "i"), "P", garbled, answerer, "m", opts);
  CHECK(rec.status == RecordStatus::kConversionFailed);
  CHECK(rec.generated_answer == "guess");

  ScriptedClient down({ScriptedClient::kFail});
  ScriptedClient unused({"x"});
  rec = run_indirect(triplet("t1", "i"), "P", down, unused, "m", opts);
  CHECK(rec.status == RecordStatus::kEndpointFailed);
  CHECK_FALSE(rec.intermediate_latex.has_value());
  CHECK(unused.requests().empty());

  ScriptedClient converter({kLatex});
  ScriptedClient answer_down({ScriptedClient::kFail});
  rec = run_indirect(triplet("t1", "i"), "P", converter, answer_down, "m", opts);
  CHECK(rec.status == RecordStatus::kEndpointFailed);
  CHECK(rec.intermediate_latex.has_value());
}

TEST_CASE("record store rejects duplicates and compacts deterministically") {
  testsupport::TempDir dir;
  RecordStore store(dir.path() / "run");
  GenerationRecord a{"t2", Method::kDirect, "m", "x", std::nullopt, RecordStatus::kOk, 5, ""};
  GenerationRecord b{"t1", Method::kDirect, "m", "y", std::nullopt, RecordStatus::kOk, 7, ""};
  store.append(a);
  store.append(b);
  CHECK_THROWS_AS(store.append(a), DuplicateRecord);
  store.compact();
  auto recs = store.records();
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].triplet_id == "t1");
  RecordStore reopened(dir.path() / "run");
  CHECK(reopened.contains(a.key()));
  CHECK(reopened.size() == 2);
  CHECK(record_from_json(to_json(a)).generated_answer == "x");

  append_json_line(dir.path() / "run" / RecordStore::kFileName, to_json(a));
  CHECK_THROWS_AS(RecordStore(dir.path() / "run"), DuplicateRecord);
}

TEST_CASE("run_split resumes and guards its configuration") {
  testsupport::TempDir dir;
  auto manifest = testsupport::make_image_manifest(dir.path(), 2);
  auto pages = manifest.entries();
  std::vector<dataset::QATriplet> ts{triplet("t1", pages[0].image_path), triplet("t2", pages[1].image_path),
                                     triplet("t3", pages[1].image_path)};
  dataset::DatasetSplit split{{"t1"}, {"t2", "t3"}, 9};
  ScriptedClient m1({"1"}), m2({"2"});
  ClientResolver resolve = [&](const std::string& id) -> gateway::ChatClient& {
    if (id == "m1") return m1;
    if (id == "m2") return m2;
    throw ConfigError("unknown model " + id);
  };
  RunRequest req;
  req.run_id = "r1";
  req.models = {"m1"};
  req.config_hash = "h";
  req.parallelism = 2;
  const auto runs = dir.path() / "runs";
  auto man = run_split(split, ts, manifest, resolve, runs, req);
  CHECK(man.record_count == 2);
  CHECK(man.executed == 2);
  CHECK(man.split_seed == 9);
  const auto bytes = read_file(runs / "r1" / RecordStore::kFileName);

  man = run_split(split, ts, manifest, resolve, runs, req);
  CHECK(man.executed == 0);
  CHECK(read_file(runs / "r1" / RecordStore::kFileName) == bytes);
  CHECK(m1.requests().size() == 2);

  req.models = {"m2"};
  man = run_split(split, ts, manifest, resolve, runs, req);
  CHECK(man.record_count == 4);
  CHECK(man.models == std::vector<std::string>{"m1", "m2"});
  auto stored = run_manifest_from_json(json::parse(read_file(runs / "r1" / "manifest.json")));
  CHECK(stored.models == man.models);

  req.config_hash = "other";
  CHECK_THROWS_AS(run_split(split, ts, manifest, resolve, runs, req), ConfigError);
  req.config_hash = "h";
  req.method = Method::kIndirect;
  CHECK_THROWS_AS(run_split(split, ts, manifest, resolve, runs, req), ConfigError);

  RunRequest dry = req;
  dry.run_id = "dry";
  dry.method = Method::kDirect;
  dry.dry_run = true;
  run_split(split, ts, manifest, resolve, runs, dry);
  CHECK_FALSE(std::filesystem::exists(runs / "dry" / RecordStore::kFileName));

  RunRequest bad = req;
  bad.run_id = "../escape";
  CHECK_THROWS_AS(run_split(split, ts, manifest, resolve, runs, bad), ConfigError);
}
