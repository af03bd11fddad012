#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "figcap/baselines.hpp"
#include "figcap/corpus.hpp"
#include "figcap/mentions.hpp"

namespace figcap {

// Native metric ids. Anything else is an external metric whose per-figure
// scores are ingested from external_scores.jsonl.
inline constexpr std::string_view kRouge1 = "rouge1";
inline constexpr std::string_view kRouge2 = "rouge2";
inline constexpr std::string_view kRougeL = "rougeL";
inline constexpr std::string_view kBleu4 = "bleu4";

bool is_native_metric(std::string_view metric_id);

struct ScoredText {
  std::string candidate;
  std::string reference;
};

// System-level score of a native metric: mean F1 over the pairs for ROUGE,
// corpus-level aggregation for BLEU-4. Unknown metric -> Error.
double native_metric_score(std::string_view metric_id,
                           std::span<const ScoredText> pairs);

struct Anchor {
  double length = 0;
  double score = 0;
};

struct RandomCurve {
  std::string metric_id;
  std::vector<Anchor> anchors;  // strictly increasing lengths
  std::vector<std::uint64_t> seeds;

  void validate() const;
};

std::vector<std::uint64_t> default_curve_seeds();  // 0..9

// Random predictions (truncations to 4,6,...,30 tokens and k = 1..10 sampled
// sentences) scored against the captions of every non-excluded figure. Each
// anchor is (mean length, mean score) over all figures and seeds; anchors
// with equal mean length are merged.
RandomCurve build_random_curve(const Corpus& corpus, const MentionIndex& index,
                               std::string_view metric_id,
                               std::span<const std::uint64_t> seeds);

// Piecewise-linear interpolation, clamped to the end anchors.
double random_of_length(const RandomCurve& curve, double length);

struct MetricScore {
  std::string metric_id;
  double mean_length = 0;
  double raw_score = 0;
  double random_score = 0;
  std::optional<double> normalized_score;  // absent when random_score <= 0

  bool beats_random() const { return raw_score > random_score; }
};

struct ScoreReport {
  std::string system_id;
  std::string label;  // beam label, empty for an overall report
  std::size_t figure_count = 0;
  std::vector<MetricScore> metrics;

  bool empty() const { return figure_count == 0; }
  const MetricScore* find(std::string_view metric_id) const;
};

struct ExternalScore {
  std::string figure_id;
  std::string system_id;
  std::string metric_id;
  double score = 0;
};

std::vector<ExternalScore> read_external_scores(
    const std::filesystem::path& path);

struct ReportInputs {
  std::span<const PredictionRecord> predictions;  // one system
  const std::map<std::string, std::string>* references = nullptr;
  const std::map<std::string, RandomCurve>* curves = nullptr;
  std::span<const std::string> metrics;
  std::span<const ExternalScore> external;
};

// raw = system-level metric score, random = Random(mean prediction length),
// normalized = raw / random.
ScoreReport normalize_report(const ReportInputs& inputs);

struct QualityBeam {
  std::string label;
  std::set<std::string> figure_ids;
};

// One report per beam over the predictions whose figure is in the beam.
ScoreReport beam_report(const ReportInputs& inputs, const QualityBeam& beam);
std::vector<ScoreReport> beam_split_eval(const ReportInputs& inputs,
                                         std::span<const QualityBeam> beams);

void write_curve(const RandomCurve& curve, const std::filesystem::path& path);
RandomCurve read_curve(const std::filesystem::path& path);

// report.csv: system_id,metric,length,score,random,normalized
std::string format_report_csv(std::span<const ScoreReport> reports);

}  // namespace figcap
