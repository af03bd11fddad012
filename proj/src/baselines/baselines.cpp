#include "figcap/baselines.hpp"

#include <set>
#include <utility>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "figcap/rng.hpp"

namespace figcap {
namespace {

// Stream tags keep the two random baselines independent for equal k/target.
constexpr std::uint64_t kSentenceStream = 0x100;
constexpr std::uint64_t kTruncateStream = 0x200;

}  // namespace

PredictionRecord reuse_prediction(const Corpus& corpus,
                                  const MentionIndex& index,
                                  const FigureRecord& figure,
                                  SourceKind kind) {
  if (kind.uses_ocr()) {
    throw Error("reuse baseline takes text-only kinds, got " + kind.name());
  }
  SourceText source = build_source_text(corpus, index, figure, kind);
  return {figure.figure_id, "reuse-" + kind.name(), std::move(source.text)};
}

PredictionRecord random_sentence_prediction(const Corpus& corpus,
                                            const MentionIndex& index,
                                            const FigureRecord& figure, int k,
                                            std::uint64_t seed) {
  if (k < 1 || k > kMaxRandomSentences) {
    throw Error("random sentence count must be in 1.." +
                std::to_string(kMaxRandomSentences) + ", got " +
                std::to_string(k));
  }
  const Paragraph& paragraph = first_mention_paragraph(corpus, index, figure);
  Rng rng(derive_seed(seed, figure.figure_id, kSentenceStream + k));
  std::string text;
  for (std::size_t i : rng.sample_without_replacement(
           paragraph.sentences.size(), static_cast<std::size_t>(k))) {
    if (!text.empty()) text += ' ';
    text += paragraph.sentences[i].text;
  }
  return {figure.figure_id,
          "random-k" + std::to_string(k) + "-seed" + std::to_string(seed),
          std::move(text)};
}

PredictionRecord truncated_prediction(const Corpus& corpus,
                                      const MentionIndex& index,
                                      const FigureRecord& figure,
                                      int target_tokens, std::uint64_t seed) {
  if (target_tokens < kMinTruncation || target_tokens > kMaxTruncation ||
      target_tokens % 2 != 0) {
    throw Error("truncation target must be even and in " +
                std::to_string(kMinTruncation) + ".." +
                std::to_string(kMaxTruncation) + ", got " +
                std::to_string(target_tokens));
  }
  const Paragraph& paragraph = first_mention_paragraph(corpus, index, figure);
  if (paragraph.sentences.empty()) {
    throw Error("figure '" + figure.figure_id + "' has an empty paragraph");
  }
  Rng rng(derive_seed(seed, figure.figure_id, kTruncateStream + target_tokens));
  const std::string& sentence =
      paragraph.sentences[rng.uniform(paragraph.sentences.size())].text;
  std::vector<TokenSpan> spans = split_tokens(sentence);
  std::string text;
  if (!spans.empty()) {
    std::size_t keep =
        std::min(spans.size(), static_cast<std::size_t>(target_tokens));
    text = sentence.substr(spans.front().begin,
                           spans[keep - 1].end - spans.front().begin);
  }
  return {figure.figure_id,
          "truncate-t" + std::to_string(target_tokens) + "-seed" +
              std::to_string(seed),
          std::move(text)};
}

std::vector<PredictionRecord> read_predictions(
    const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    PredictionRecord p{require_string(rec, "figure_id"),
                       require_string(rec, "system_id"),
                       require_string(rec, "text")};
    if (p.text.empty()) throw Error("empty prediction text");
    if (!seen.emplace(p.figure_id, p.system_id).second) {
      throw Error("duplicate prediction for (" + p.figure_id + ", " +
                  p.system_id + ")");
    }
    out.push_back(std::move(p));
  });
  return out;
}

void write_predictions(std::span<const PredictionRecord> predictions,
                       const std::filesystem::path& path) {
  std::vector<Json> records;
  records.reserve(predictions.size());
  for (const PredictionRecord& p : predictions) {
    records.push_back(
        {{"figure_id", p.figure_id}, {"system_id", p.system_id}, {"text", p.text}});
  }
  write_jsonl(path, records);
}

}  // namespace figcap
