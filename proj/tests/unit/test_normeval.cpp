#include <doctest.h>

#include <cmath>
#include <fstream>

#include "figcap/baselines.hpp"
#include "figcap/error.hpp"
#include "figcap/metrics.hpp"
#include "figcap/normeval.hpp"
#include "unit/helpers.hpp"

using namespace figcap;
using figcap::test::TempDir;

namespace {

RandomCurve line_curve(std::string metric, std::vector<Anchor> anchors) {
  RandomCurve c;
  c.metric_id = std::move(metric);
  c.anchors = std::move(anchors);
  return c;
}

const MentionIndex& fixture_index() {
  static const MentionIndex index = build_mention_index(test::fixture());
  return index;
}

std::map<std::string, std::string> fixture_references() {
  std::map<std::string, std::string> refs;
  for (const FigureRecord& f : test::fixture().figures()) refs[f.figure_id] = f.caption_text;
  return refs;
}

std::vector<PredictionRecord> reuse_all(SourceKind kind) {
  std::vector<PredictionRecord> out;
  for (const FigureRecord& f : test::fixture().figures()) {
    if (fixture_index().is_excluded(f.figure_id)) continue;
    out.push_back(reuse_prediction(test::fixture(), fixture_index(), f, kind));
  }
  return out;
}

}  // namespace

TEST_SUITE("normeval") {

TEST_CASE("interpolation between anchors and clamping outside") {
  const RandomCurve c = line_curve("rouge1", {{10, 0.15}, {20, 0.20}});
  CHECK(random_of_length(c, 15) == doctest::Approx(0.175));
  CHECK(random_of_length(c, 10) == doctest::Approx(0.15));
  CHECK(random_of_length(c, 20) == doctest::Approx(0.20));
  CHECK(random_of_length(c, 2) == doctest::Approx(0.15));
  CHECK(random_of_length(c, 400) == doctest::Approx(0.20));

  const RandomCurve three = line_curve("rouge1", {{4, 0.1}, {8, 0.3}, {16, 0.2}});
  CHECK(random_of_length(three, 6) == doctest::Approx(0.2));
  CHECK(random_of_length(three, 12) == doctest::Approx(0.25));
}

TEST_CASE("interpolation is monotone between monotone anchors") {
  const RandomCurve c = line_curve("rouge2", {{4, 0.02}, {9, 0.04}, {30, 0.09}, {80, 0.1}});
  double prev = random_of_length(c, 0);
  for (double x = 0; x <= 100; x += 0.25) {
    const double y = random_of_length(c, x);
    CHECK(y >= prev - 1e-15);
    CHECK(y >= 0.02);
    CHECK(y <= 0.1);
    prev = y;
  }
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(line_curve("rouge1", {{10, 0.1}}).validate(), Error);
  CHECK_THROWS_AS(line_curve("rouge1", {{10, 0.1}, {10, 0.2}}).validate(), Error);
  CHECK_THROWS_AS(line_curve("rouge1", {{10, 0.1}, {5, 0.2}}).validate(), Error);
  CHECK_THROWS_AS(line_curve("rouge1", {{10, 0.1}, {12, NAN}}).validate(), Error);
  CHECK_NOTHROW(line_curve("rouge1", {{10, 0.1}, {12, 0.1}}).validate());
  CHECK(default_curve_seeds().size() == 10);
}

TEST_CASE("random curve on the fixture is deterministic and well formed") {
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  const RandomCurve a = build_random_curve(test::fixture(), fixture_index(), kRouge1, seeds);
  const RandomCurve b = build_random_curve(test::fixture(), fixture_index(), kRouge1, seeds);
  REQUIRE(a.anchors.size() == b.anchors.size());
  for (std::size_t i = 0; i < a.anchors.size(); ++i) {
    CHECK(a.anchors[i].length == b.anchors[i].length);
    CHECK(a.anchors[i].score == b.anchors[i].score);
  }
  CHECK(a.seeds == seeds);
  CHECK(a.anchors.size() >= 2);
  CHECK(a.anchors.size() <= 24);
  CHECK_NOTHROW(a.validate());

  const RandomCurve other = build_random_curve(test::fixture(), fixture_index(), kRouge1,
                                               std::vector<std::uint64_t>{5, 6, 7});
  bool differs = false;
  for (std::size_t i = 0; i < std::min(a.anchors.size(), other.anchors.size()); ++i) {
    differs |= a.anchors[i].score != other.anchors[i].score;
  }
  CHECK(differs);
}

TEST_CASE("shortest anchor equals an independent recomputation of the t=4 truncation") {
  const std::vector<std::uint64_t> seeds{3, 4};
  const RandomCurve curve =
      build_random_curve(test::fixture(), fixture_index(), kRouge2, seeds);
  double len = 0, score = 0;
  std::size_t n = 0;
  for (std::uint64_t seed : seeds) {
    double f1_sum = 0;
    std::size_t figs = 0;
    for (const FigureRecord& f : test::fixture().figures()) {
      if (fixture_index().is_excluded(f.figure_id)) continue;
      const auto p = truncated_prediction(test::fixture(), fixture_index(), f, 4, seed);
      len += static_cast<double>(token_length(p.text));
      const auto cfg = TokenizerConfig::scoring();
      f1_sum += rouge(tokenize(p.text, cfg), tokenize(f.caption_text, cfg),
                      RougeVariant::kRouge2).f1;
      ++figs;
      ++n;
    }
    score += f1_sum / static_cast<double>(figs);
  }
  CHECK(curve.anchors.front().length == doctest::Approx(len / static_cast<double>(n)));
  CHECK(curve.anchors.front().score == doctest::Approx(score / 2.0));
}

TEST_CASE("curve building rejects unusable input") {
  CHECK_THROWS_AS(build_random_curve(test::fixture(), fixture_index(), "mover",
                                     default_curve_seeds()),
                  Error);
  CHECK_THROWS_AS(build_random_curve(test::fixture(), fixture_index(), kRouge1,
                                     std::vector<std::uint64_t>{}),
                  Error);
}

TEST_CASE("curve file round trip") {
  TempDir dir;
  RandomCurve c = line_curve("bleu4", {{4.5, 0.01}, {11.25, 0.031}});
  c.seeds = {0, 1};
  write_curve(c, dir / "curve.json");
  const RandomCurve back = read_curve(dir / "curve.json");
  CHECK(back.metric_id == "bleu4");
  CHECK(back.seeds == c.seeds);
  REQUIRE(back.anchors.size() == 2);
  CHECK(back.anchors[1].length == 11.25);
  CHECK(back.anchors[1].score == 0.031);

  std::ofstream(dir / "bad.json") << R"({"metric_id":"x","anchors":[[3,0.1]]})";
  CHECK_THROWS_WITH_AS(read_curve(dir / "bad.json"), doctest::Contains("bad.json"), Error);
}

TEST_CASE("normalize_report arithmetic") {
  const std::map<std::string, std::string> refs{{"a", "the cat sat on the mat"},
                                                {"b", "dogs bark loudly"}};
  const std::vector<PredictionRecord> preds{{"a", "sys", "the cat sat"},
                                            {"b", "sys", "dogs bark loudly today ."}};
  const std::map<std::string, RandomCurve> curves{
      {"rouge1", line_curve("rouge1", {{2, 0.1}, {6, 0.3}})}};
  const std::vector<std::string> metrics{"rouge1"};
  const ScoreReport r = normalize_report({preds, &refs, &curves, metrics, {}});
  REQUIRE(r.metrics.size() == 1);
  const MetricScore& m = r.metrics[0];
  CHECK(r.system_id == "sys");
  CHECK(r.figure_count == 2);
  CHECK(m.mean_length == doctest::Approx(4.0));
  // F1 = 2/3 for "a", 2*(3/4)(1)/(7/4) = 6/7 for "b".
  CHECK(m.raw_score == doctest::Approx((2.0 / 3 + 6.0 / 7) / 2));
  CHECK(m.random_score == doctest::Approx(0.2));
  REQUIRE(m.normalized_score);
  CHECK(*m.normalized_score == doctest::Approx(m.raw_score / 0.2));
  CHECK(m.beats_random());
}

TEST_CASE("normalized score is invariant to a common rescaling of score and curve") {
  const std::map<std::string, std::string> refs{{"a", "x"}, {"b", "y"}};
  const std::vector<PredictionRecord> preds{{"a", "s", "one two three"}, {"b", "s", "four five"}};
  const std::vector<std::string> metrics{"mover"};
  const std::vector<ExternalScore> ext{{"a", "s", "mover", 0.52}, {"b", "s", "mover", 0.55}};
  std::vector<ExternalScore> ext100 = ext;
  for (auto& e : ext100) e.score *= 100;
  const std::map<std::string, RandomCurve> curves{
      {"mover", line_curve("mover", {{1, 0.50}, {5, 0.52}})}};
  const std::map<std::string, RandomCurve> curves100{
      {"mover", line_curve("mover", {{1, 50}, {5, 52}})}};
  const auto r1 = normalize_report({preds, &refs, &curves, metrics, ext});
  const auto r100 = normalize_report({preds, &refs, &curves100, metrics, ext100});
  CHECK(r1.metrics[0].raw_score == doctest::Approx(0.535));
  CHECK(r1.metrics[0].random_score == doctest::Approx(0.5075));
  CHECK(*r1.metrics[0].normalized_score == doctest::Approx(*r100.metrics[0].normalized_score));
}

TEST_CASE("beats_random matches normalized > 1") {
  for (double raw : {0.05, 0.1, 0.2}) {
    MetricScore m{"rouge1", 10, raw, 0.1, raw / 0.1};
    CHECK(m.beats_random() == (*m.normalized_score > 1.0));
  }
}

TEST_CASE("report errors name the missing piece") {
  const std::map<std::string, std::string> refs{{"a", "x"}};
  const std::map<std::string, RandomCurve> curves{
      {"rouge1", line_curve("rouge1", {{1, 0.1}, {2, 0.2}})}};
  const std::vector<std::string> r1{"rouge1"}, r2{"rouge2"}, ext{"bert"};
  const std::vector<PredictionRecord> missing_ref{{"zz", "s", "text"}};
  CHECK_THROWS_WITH_AS(normalize_report({missing_ref, &refs, &curves, r1, {}}),
                       doctest::Contains("zz"), Error);
  const std::vector<PredictionRecord> ok{{"a", "s", "text"}};
  CHECK_THROWS_WITH_AS(normalize_report({ok, &refs, &curves, r2, {}}),
                       doctest::Contains("rouge2"), Error);
  CHECK_THROWS_WITH_AS(normalize_report({ok, &refs, &curves, ext, {}}),
                       doctest::Contains("bert"), Error);
  const std::vector<PredictionRecord> mixed{{"a", "s", "t"}, {"a", "u", "t"}};
  CHECK_THROWS_AS(normalize_report({mixed, &refs, &curves, r1, {}}), Error);
  CHECK_THROWS_AS(native_metric_score("meteor", {}), Error);
}

TEST_CASE("non-positive random leaves the normalized score empty") {
  const std::map<std::string, std::string> refs{{"a", "x"}};
  const std::map<std::string, RandomCurve> curves{
      {"rouge1", line_curve("rouge1", {{1, 0.0}, {2, 0.0}})}};
  const std::vector<std::string> metrics{"rouge1"};
  const std::vector<PredictionRecord> preds{{"a", "s", "x"}};
  const auto r = normalize_report({preds, &refs, &curves, metrics, {}});
  CHECK_FALSE(r.metrics[0].normalized_score.has_value());
  CHECK(format_report_csv(std::vector<ScoreReport>{r}) ==
        "system_id,metric,length,score,random,normalized\n"
        "s,rouge1,1.000000,1.000000,0.000000,\n");
}

TEST_CASE("beam reports partition the predictions") {
  const auto preds = reuse_all(SourceKind::parse("Mention"));
  const auto refs = fixture_references();
  const std::map<std::string, RandomCurve> curves{
      {"rouge1", line_curve("rouge1", {{4, 0.1}, {200, 0.2}})}};
  const std::vector<std::string> metrics{"rouge1"};
  QualityBeam helpful{"helpful", {}}, unhelpful{"unhelpful", {}}, empty{"empty", {}};
  for (std::size_t i = 0; i < preds.size(); ++i) {
    (i % 3 == 0 ? helpful : unhelpful).figure_ids.insert(preds[i].figure_id);
  }
  const std::vector<QualityBeam> beams{helpful, unhelpful, empty};
  const ReportInputs in{preds, &refs, &curves, metrics, {}};
  const auto reports = beam_split_eval(in, beams);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].figure_count + reports[1].figure_count == preds.size());
  CHECK(reports[0].label == "helpful");
  CHECK(reports[2].empty());
  CHECK(reports[2].system_id == "reuse-Mention");
  const std::string csv = format_report_csv(reports);
  CHECK(csv.find("reuse-Mention@helpful,rouge1,") != std::string::npos);
  CHECK(csv.find("reuse-Mention@empty,rouge1,,,,\n") != std::string::npos);

  // Length-weighted recombination of the beam ROUGE means recovers the overall mean.
  const auto all = normalize_report(in);
  const double combined = (reports[0].metrics[0].raw_score * reports[0].figure_count +
                           reports[1].metrics[0].raw_score * reports[1].figure_count) /
                          static_cast<double>(preds.size());
  CHECK(combined == doctest::Approx(all.metrics[0].raw_score));

  QualityBeam overlap{"overlap", {preds[0].figure_id}};
  const std::vector<QualityBeam> bad{helpful, overlap};
  CHECK_THROWS_AS(beam_split_eval(in, bad), Error);
}

TEST_CASE("external score ingestion") {
  TempDir dir;
  std::ofstream(dir / "ext.jsonl")
      << R"({"figure_id":"a","system_id":"s","metric_id":"mover","score":0.5})" "\n"
      << R"({"figure_id":"b","system_id":"s","metric_id":"mover"})" "\n";
  CHECK_THROWS_WITH_AS(read_external_scores(dir / "ext.jsonl"), doctest::Contains(":2"), Error);
}

}
