#include <cstdio>
#include <map>
#include <tuple>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "figcap/normeval.hpp"

namespace figcap {

const MetricScore* ScoreReport::find(std::string_view metric_id) const {
  for (const MetricScore& m : metrics) {
    if (m.metric_id == metric_id) return &m;
  }
  return nullptr;
}

std::vector<ExternalScore> read_external_scores(
    const std::filesystem::path& path) {
  std::vector<ExternalScore> out;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    out.push_back({require_string(rec, "figure_id"),
                   require_string(rec, "system_id"),
                   require_string(rec, "metric_id"),
                   require_number(rec, "score")});
  });
  return out;
}

ScoreReport normalize_report(const ReportInputs& inputs) {
  ScoreReport report;
  report.figure_count = inputs.predictions.size();
  if (!inputs.predictions.empty()) {
    report.system_id = inputs.predictions.front().system_id;
  }
  for (const PredictionRecord& p : inputs.predictions) {
    if (p.system_id != report.system_id) {
      throw Error("report mixes systems '" + report.system_id + "' and '" +
                  p.system_id + "'");
    }
  }
  if (inputs.predictions.empty()) {
    for (const std::string& metric : inputs.metrics) {
      report.metrics.push_back({metric, 0, 0, 0, std::nullopt});
    }
    return report;
  }
  if (inputs.references == nullptr || inputs.curves == nullptr) {
    throw Error("report needs references and curves");
  }

  std::vector<ScoredText> pairs;
  double length_sum = 0;
  for (const PredictionRecord& p : inputs.predictions) {
    auto ref = inputs.references->find(p.figure_id);
    if (ref == inputs.references->end()) {
      throw Error("no reference caption for figure '" + p.figure_id + "'");
    }
    pairs.push_back({p.text, ref->second});
    length_sum += static_cast<double>(token_length(p.text));
  }
  const double mean_length =
      length_sum / static_cast<double>(inputs.predictions.size());

  for (const std::string& metric : inputs.metrics) {
    MetricScore score;
    score.metric_id = metric;
    score.mean_length = mean_length;
    if (is_native_metric(metric)) {
      score.raw_score = native_metric_score(metric, pairs);
    } else {
      std::map<std::string, double> by_figure;
      for (const ExternalScore& e : inputs.external) {
        if (e.system_id == report.system_id && e.metric_id == metric) {
          by_figure[e.figure_id] = e.score;
        }
      }
      double sum = 0;
      for (const PredictionRecord& p : inputs.predictions) {
        auto it = by_figure.find(p.figure_id);
        if (it == by_figure.end()) {
          throw Error("no external " + metric + " score for (" + p.figure_id +
                      ", " + report.system_id + ")");
        }
        sum += it->second;
      }
      score.raw_score = sum / static_cast<double>(inputs.predictions.size());
    }
    auto curve = inputs.curves->find(metric);
    if (curve == inputs.curves->end()) {
      throw Error("no random curve for metric '" + metric + "'");
    }
    score.random_score = random_of_length(curve->second, mean_length);
    if (score.random_score > 0) {
      score.normalized_score = score.raw_score / score.random_score;
    }
    report.metrics.push_back(std::move(score));
  }
  return report;
}

ScoreReport beam_report(const ReportInputs& inputs, const QualityBeam& beam) {
  std::vector<PredictionRecord> selected;
  for (const PredictionRecord& p : inputs.predictions) {
    if (beam.figure_ids.count(p.figure_id)) selected.push_back(p);
  }
  ReportInputs sub = inputs;
  sub.predictions = selected;
  ScoreReport report = normalize_report(sub);
  if (report.system_id.empty() && !inputs.predictions.empty()) {
    report.system_id = inputs.predictions.front().system_id;
  }
  report.label = beam.label;
  return report;
}

std::vector<ScoreReport> beam_split_eval(const ReportInputs& inputs,
                                         std::span<const QualityBeam> beams) {
  std::map<std::string, std::string> owner;
  for (const QualityBeam& beam : beams) {
    for (const std::string& id : beam.figure_ids) {
      auto [it, fresh] = owner.emplace(id, beam.label);
      if (!fresh) {
        throw Error("figure '" + id + "' is in beams '" + it->second +
                    "' and '" + beam.label + "'");
      }
    }
  }
  std::vector<ScoreReport> out;
  for (const QualityBeam& beam : beams) out.push_back(beam_report(inputs, beam));
  return out;
}

namespace {

std::string fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_report_csv(std::span<const ScoreReport> reports) {
  std::string out = "system_id,metric,length,score,random,normalized\n";
  for (const ScoreReport& r : reports) {
    const std::string system =
        csv_field(r.label.empty() ? r.system_id : r.system_id + "@" + r.label);
    for (const MetricScore& m : r.metrics) {
      out += system + "," + csv_field(m.metric_id) + ",";
      if (r.empty()) {
        out += ",,,\n";
        continue;
      }
      out += fixed(m.mean_length) + "," + fixed(m.raw_score) + "," +
             fixed(m.random_score) + "," +
             (m.normalized_score ? fixed(*m.normalized_score) : "") + "\n";
    }
  }
  return out;
}

}  // namespace figcap
