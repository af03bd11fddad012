#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "figcap/corpus.hpp"
#include "figcap/mentions.hpp"

namespace figcap {

struct PredictionRecord {
  std::string figure_id;
  std::string system_id;
  std::string text;

  bool operator==(const PredictionRecord&) const = default;
};

inline constexpr int kMaxRandomSentences = 10;
inline constexpr int kMinTruncation = 4;
inline constexpr int kMaxTruncation = 30;

// The source text itself, used as the caption. OCR kinds are rejected.
PredictionRecord reuse_prediction(const Corpus& corpus,
                                  const MentionIndex& index,
                                  const FigureRecord& figure, SourceKind kind);

// k sentences of the first-mention paragraph, sampled without replacement
// and emitted in document order.
PredictionRecord random_sentence_prediction(const Corpus& corpus,
                                            const MentionIndex& index,
                                            const FigureRecord& figure, int k,
                                            std::uint64_t seed);

// One random sentence of the first-mention paragraph cut to its first
// `target_tokens` length tokens (4, 6, ..., 30).
PredictionRecord truncated_prediction(const Corpus& corpus,
                                      const MentionIndex& index,
                                      const FigureRecord& figure,
                                      int target_tokens, std::uint64_t seed);

std::vector<PredictionRecord> read_predictions(
    const std::filesystem::path& path);
void write_predictions(std::span<const PredictionRecord> predictions,
                       const std::filesystem::path& path);

}  // namespace figcap
