#include <algorithm>
#include <cmath>
#include <functional>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "figcap/normeval.hpp"

namespace figcap {

bool is_native_metric(std::string_view metric_id) {
  return metric_id == kRouge1 || metric_id == kRouge2 ||
         metric_id == kRougeL || metric_id == kBleu4;
}

double native_metric_score(std::string_view metric_id,
                           std::span<const ScoredText> pairs) {
  if (!is_native_metric(metric_id)) {
    throw Error("unknown native metric '" + std::string(metric_id) + "'");
  }
  if (pairs.empty()) return 0.0;
  if (metric_id == kBleu4) {
    const TokenizerConfig config = bleu_tokenizer();
    std::vector<TokenPair> tokens;
    tokens.reserve(pairs.size());
    for (const ScoredText& p : pairs) {
      tokens.push_back({tokenize(p.candidate, config), tokenize(p.reference, config)});
    }
    return bleu4_corpus(tokens);
  }
  const RougeVariant variant = metric_id == kRouge1   ? RougeVariant::kRouge1
                               : metric_id == kRouge2 ? RougeVariant::kRouge2
                                                      : RougeVariant::kRougeL;
  const TokenizerConfig config = TokenizerConfig::scoring();
  double sum = 0;
  for (const ScoredText& p : pairs) {
    sum += rouge(tokenize(p.candidate, config), tokenize(p.reference, config),
                 variant)
               .f1;
  }
  return sum / static_cast<double>(pairs.size());
}

void RandomCurve::validate() const {
  if (anchors.size() < 2) {
    throw Error("curve '" + metric_id + "' needs at least 2 anchors");
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!std::isfinite(anchors[i].length) || !std::isfinite(anchors[i].score)) {
      throw Error("curve '" + metric_id + "' has a non-finite anchor");
    }
    if (i > 0 && !(anchors[i].length > anchors[i - 1].length)) {
      throw Error("curve '" + metric_id +
                  "' anchor lengths must be strictly increasing");
    }
  }
}

std::vector<std::uint64_t> default_curve_seeds() {
  std::vector<std::uint64_t> seeds(10);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

RandomCurve build_random_curve(const Corpus& corpus, const MentionIndex& index,
                               std::string_view metric_id,
                               std::span<const std::uint64_t> seeds) {
  if (!is_native_metric(metric_id)) {
    throw Error("cannot build a random curve for metric '" +
                std::string(metric_id) + "'; supply curve.json instead");
  }
  if (seeds.empty()) throw Error("random curve needs at least one seed");
  std::vector<const FigureRecord*> figures;
  for (const FigureRecord& fig : corpus.figures()) {
    if (!index.is_excluded(fig.figure_id) && !index.of(fig.figure_id).empty()) {
      figures.push_back(&fig);
    }
  }
  if (figures.empty()) throw Error("no figure with a mention to build a curve");

  using Generator =
      std::function<PredictionRecord(const FigureRecord&, std::uint64_t)>;
  std::vector<Generator> generators;
  for (int t = kMinTruncation; t <= kMaxTruncation; t += 2) {
    generators.push_back([&, t](const FigureRecord& f, std::uint64_t seed) {
      return truncated_prediction(corpus, index, f, t, seed);
    });
  }
  for (int k = 1; k <= kMaxRandomSentences; ++k) {
    generators.push_back([&, k](const FigureRecord& f, std::uint64_t seed) {
      return random_sentence_prediction(corpus, index, f, k, seed);
    });
  }

  std::vector<Anchor> raw;
  for (const Generator& generate : generators) {
    double length_sum = 0;
    double score_sum = 0;
    for (std::uint64_t seed : seeds) {
      std::vector<ScoredText> pairs;
      pairs.reserve(figures.size());
      for (const FigureRecord* fig : figures) {
        PredictionRecord p = generate(*fig, seed);
        length_sum += static_cast<double>(token_length(p.text));
        pairs.push_back({std::move(p.text), fig->caption_text});
      }
      score_sum += native_metric_score(metric_id, pairs);
    }
    const double n = static_cast<double>(seeds.size());
    raw.push_back({length_sum / (n * static_cast<double>(figures.size())),
                   score_sum / n});
  }

  std::stable_sort(raw.begin(), raw.end(), [](const Anchor& a, const Anchor& b) {
    return a.length < b.length;
  });
  RandomCurve curve;
  curve.metric_id = std::string(metric_id);
  curve.seeds.assign(seeds.begin(), seeds.end());
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    double score_sum = 0;
    while (j < raw.size() && raw[j].length == raw[i].length) {
      score_sum += raw[j].score;
      ++j;
    }
    curve.anchors.push_back(
        {raw[i].length, score_sum / static_cast<double>(j - i)});
    i = j;
  }
  curve.validate();
  return curve;
}

double random_of_length(const RandomCurve& curve, double length) {
  const auto& a = curve.anchors;
  if (a.empty()) throw Error("curve '" + curve.metric_id + "' has no anchors");
  if (length <= a.front().length) return a.front().score;
  if (length >= a.back().length) return a.back().score;
  auto hi = std::upper_bound(
      a.begin(), a.end(), length,
      [](double value, const Anchor& anchor) { return value < anchor.length; });
  auto lo = hi - 1;
  const double t = (length - lo->length) / (hi->length - lo->length);
  return lo->score + t * (hi->score - lo->score);
}

void write_curve(const RandomCurve& curve, const std::filesystem::path& path) {
  Json anchors = Json::array();
  for (const Anchor& a : curve.anchors) anchors.push_back({a.length, a.score});
  Json doc = {{"metric_id", curve.metric_id},
              {"seeds", curve.seeds},
              {"anchors", std::move(anchors)}};
  write_file(path, doc.dump(2) + "\n");
}

RandomCurve read_curve(const std::filesystem::path& path) {
  RandomCurve curve;
  try {
    Json doc = Json::parse(read_file(path));
    curve.metric_id = require_string(doc, "metric_id");
    if (doc.contains("seeds")) {
      curve.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    }
    for (const Json& a : doc.at("anchors")) {
      if (!a.is_array() || a.size() != 2) {
        throw Error("anchor must be [length, score]");
      }
      curve.anchors.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    curve.validate();
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return curve;
}

}  // namespace figcap
