#include "doctest.h"
#include "support/images.hpp"
#include "support/workspace.hpp"
#include "tabqa/error.hpp"
#include "tabqa/eval/judge.hpp"
#include "tabqa/eval/matcher.hpp"
#include "tabqa/eval/metrics.hpp"
#include "tabqa/eval/report.hpp"
#include "tabqa/runners/record.hpp"
#include "tabqa/testkit/fakes.hpp"

using namespace tabqa;
using namespace tabqa::eval;
using testkit::ScriptedClient;

namespace {

Verdict verdict(const std::string& id, bool correct, const std::string& model = "m") {
  Verdict v;
  v.triplet_id = id;
  v.model_id = model;
  v.grader = Grader::kMatcher;
  v.label = correct ? Label::kCorrect : Label::kIncorrect;
  return v;
}

}  // namespace

TEST_CASE("answer normalization and quantities") {
  CHECK(normalize_answer("  **158\nMM**.  ") == "158 mm.");
  CHECK(normalize_answer("`45` min") == "45 min");
  auto q = extract_quantities(normalize_answer("Use 1,200 mm or 0.50 m², 2 per support"));
  REQUIRE(q.size() == 3);
  CHECK(q[0] == Quantity{"1200", "mm"});
  CHECK(q[1] == Quantity{"0.5", "m2"});
  CHECK(q[2] == Quantity{"2", ""});
  CHECK(extract_quantities("type s2 panel").empty());
  auto dims = extract_quantities("38x89 lumber");
  REQUIRE(dims.size() == 2);
  CHECK(dims[1].value == "89");
  CHECK(extract_quantities("12 kn/m")[0].unit == "kn/m");
}

TEST_CASE("matcher grading") {
  CHECK(grade_with_matcher("It is 3.64 m.", "3.64 m") == Label::kCorrect);
  CHECK(grade_with_matcher("3.640", "3.64 m") == Label::kCorrect);
  CHECK(grade_with_matcher("The answer is Not Permitted.", "not permitted") == Label::kCorrect);
  CHECK(grade_with_matcher("unpermitted", "permitted") == Label::kIncorrect);
  CHECK(grade_with_matcher("45 min and 60 min", "45 min") == Label::kCorrect);
  CHECK(grade_with_matcher("", "45 min") == Label::kIncorrect);
  CHECK(grade_with_matcher("1,200 mm", "1200 mm") == Label::kCorrect);
}

TEST_CASE("judge reply parsing") {
  CHECK(parse_judge_reply("CORRECT") == Label::kCorrect);
  CHECK(parse_judge_reply(" incorrect. ") == Label::kIncorrect);
  CHECK(parse_judge_reply("\"Correct\"") == Label::kCorrect);
  CHECK_FALSE(parse_judge_reply("mostly correct").has_value());
  CHECK_FALSE(parse_judge_reply("").has_value());
  auto p = judge_prompt("Q?", "51 mm", "51");
  CHECK(p.find("Ground truth: 51 mm") != std::string::npos);
  CHECK(p.find("CORRECT or INCORRECT") != std::string::npos);
}

TEST_CASE("judge grading with retries and fallback") {
  JudgeOptions opts;
  ScriptedClient ok({"INCORRECT"});
  auto g = grade_with_judge("q", "51 mm", "51 mm", &ok, opts);
  CHECK(g.grader == Grader::kJudge);
  CHECK(g.label == Label::kIncorrect);
  CHECK(g.judge_raw == "INCORRECT");

  ScriptedClient second_try({"hmm", "CORRECT"});
  g = grade_with_judge("q", "51 mm", "fifty-one", &second_try, opts);
  CHECK(g.grader == Grader::kJudge);
  CHECK(g.label == Label::kCorrect);
  CHECK(second_try.requests().size() == 2);

  ScriptedClient garbage({"hmm"});
  g = grade_with_judge("q", "51 mm", "51", &garbage, opts);
  CHECK(g.grader == Grader::kMatcher);
  CHECK(g.label == Label::kCorrect);
  CHECK(garbage.requests().size() == 2);

  ScriptedClient down({ScriptedClient::kFail});
  g = grade_with_judge("q", "51 mm", "52 mm", &down, opts);
  CHECK(g.grader == Grader::kMatcher);
  CHECK(g.label == Label::kIncorrect);

  ScriptedClient never({"CORRECT"});
  g = grade_with_judge("q", "51 mm", "   ", &never, opts);
  CHECK(g.label == Label::kIncorrect);
  CHECK(never.requests().empty());

  opts.include_image = true;
  const std::string png = "PNG";
  ScriptedClient with_image({"CORRECT"});
  grade_with_judge("q", "a", "a", &with_image, opts, &png);
  CHECK(with_image.requests()[0].image_count() == 1);
}

TEST_CASE("metrics") {
  std::vector<Verdict> none;
  CHECK_THROWS_AS(accuracy(none), EmptyRun);
  CHECK_THROWS_AS(relative_gain(0.0, 0.3), UndefinedGain);
  CHECK(relative_gain(0.5, 0.25) == doctest::Approx(-50.0));

  std::vector<Verdict> base{verdict("a", true), verdict("b", false), verdict("c", true)};
  std::vector<Verdict> ft{verdict("c", false), verdict("a", true), verdict("b", true)};
  auto m = confusion(base, ft);
  CHECK(m == ConfusionMatrix{1, 1, 1, 0});
  std::vector<Verdict> short_ft{verdict("a", true)};
  CHECK_THROWS_AS(confusion(base, short_ft), MisalignedRuns);
  std::vector<Verdict> other{verdict("a", true), verdict("b", true), verdict("z", true)};
  CHECK_THROWS_AS(confusion(base, other), MisalignedRuns);
  std::vector<Verdict> dup{verdict("a", true), verdict("a", true), verdict("b", true)};
  CHECK_THROWS_AS(confusion(dup, base), MisalignedRuns);

  CHECK(correction_to_regression({0, 3, 0, 1}).kind == Ratio::Kind::kUnbounded);
  CHECK(correction_to_regression({0, 0, 0, 1}).kind == Ratio::Kind::kUndefined);
  CHECK(format_ratio(Ratio{Ratio::Kind::kUnbounded, 0}) == "unbounded");
  CHECK(format_ratio(Ratio{Ratio::Kind::kUndefined, 0}) == "n/a");
  CHECK(format_ratio(2.0) == "2.0");
  CHECK(format_ratio(10.0 / 3.0) == "3.33");
  CHECK(format_ratio(4.4) == "4.4");
  CHECK(format_ratio(1.005) == "1.0");

  CHECK(implied_regressions(12, 2.0) == 6);
  CHECK(implied_regressions(30, 3.33) == 9);
  CHECK_FALSE(implied_regressions(7, 2.2).has_value());
  auto s = stability({36, 12, 6, 46}, 0.42, 0.48);
  CHECK(s.relative_gain == doctest::Approx(14.2857).epsilon(1e-4));
  CHECK(s.correction_to_regression.value == doctest::Approx(2.0));
}

TEST_CASE("verdict store upserts by key") {
  testsupport::TempDir dir;
  VerdictStore store(dir.path());
  std::vector<Verdict> first{verdict("b", true), verdict("a", false)};
  store.upsert(first);
  std::vector<Verdict> second{verdict("a", true)};
  store.upsert(second);
  auto all = store.verdicts();
  REQUIRE(all.size() == 2);
  CHECK(all[0].triplet_id == "a");
  CHECK(all[0].correct());
  auto j = to_json(all[0]);
  CHECK_FALSE(j.contains("judge_raw"));
  j["grader"] = "judge";
  CHECK_THROWS(verdict_from_json(j));
}

TEST_CASE("judge_run grades missing verdicts only") {
  testsupport::TempDir dir;
  auto manifest = testsupport::make_image_manifest(dir.path(), 1);
  const auto image = manifest.entries()[0].image_path;
  std::vector<dataset::QATriplet> ts{{"t1", "q1", "51 mm", image, dataset::Provenance::kGenerated},
                                     {"t2", "q2", "45 mm", image, dataset::Provenance::kGenerated}};
  const auto run = dir.path() / "runs" / "r";
  runners::RecordStore records(run);
  records.append({"t1", runners::Method::kDirect, "m", "51 mm", std::nullopt, runners::RecordStatus::kOk, 1, ""});
  records.append({"t2", runners::Method::kDirect, "m", "", std::nullopt, runners::RecordStatus::kEndpointFailed, 1,
                  "down"});
  ScriptedClient judge({"CORRECT"});
  JudgeOptions opts;
  auto s = judge_run(run, ts, manifest, &judge, opts, 2);
  CHECK(s.records == 2);
  CHECK(s.graded == 2);
  CHECK(judge.requests().size() == 1);
  auto vs = VerdictStore(run).verdicts();
  REQUIRE(vs.size() == 2);
  CHECK(vs[1].label == Label::kIncorrect);
  auto again = judge_run(run, ts, manifest, &judge, opts, 2);
  CHECK(again.graded == 0);
  CHECK(judge.requests().size() == 1);
}

TEST_CASE("report tables") {
  testsupport::TempDir dir;
  const auto runs = dir.path() / "runs";
  std::vector<Verdict> pre, ft;
  for (int i = 0; i < 10; ++i) {
    auto id = "t" + std::to_string(i);
    pre.push_back(verdict(id, i < 4, "base"));
    ft.push_back(verdict(id, i >= 2 && i < 8, "tuned"));
  }
  VerdictStore(runs / "pre").upsert(pre);
  VerdictStore(runs / "ft").upsert(ft);
  Comparison c{"tuned vs base", {"pre", "base"}, {"ft", "tuned"}, runners::Method::kDirect};
  auto data = build_report(runs, {"pre", "ft"}, {c});
  REQUIRE(data.runs.size() == 2);
  REQUIRE(data.comparisons.size() == 1);
  CHECK(data.comparisons[0].matrix == ConfusionMatrix{2, 4, 2, 2});
  auto text = report_text(data);
  CHECK(text.find("Correction-to-Regression Ratio") != std::string::npos);
  CHECK(text.find("2.0") != std::string::npos);
  CHECK(text.find("50.00%") != std::string::npos);
  CHECK(report_text(ReportData{}) == "no runs\n");

  emit_report(data, dir.path() / "out");
  const auto bytes = read_file(dir.path() / "out" / "report.json");
  emit_report(build_report(runs, {"ft", "pre"}, {c}), dir.path() / "out");
  CHECK(read_file(dir.path() / "out" / "report.json") == bytes);
  auto j = report_json(data);
  CHECK(j["comparisons"][0]["label"] == c.label);
  CHECK(j["comparisons"][0]["correction_to_regression"] == 2.0);

  Comparison missing{"x", {"pre", "nobody"}, {"ft", "tuned"}, runners::Method::kDirect};
  CHECK_THROWS_AS(build_report(runs, {"pre", "ft"}, {missing}), MisalignedRuns);
  Comparison nobody{"y", {"pre", "nobody"}, {"ft", "nobody"}, runners::Method::kDirect};
  CHECK_THROWS_AS(build_report(runs, {"pre", "ft"}, {nobody}), EmptyRun);
}
