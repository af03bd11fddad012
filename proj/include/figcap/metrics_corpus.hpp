#pragma once

#include <cstdint>
#include <string>

#include "figcap/corpus.hpp"
#include "figcap/mentions.hpp"
#include "figcap/metrics.hpp"

namespace figcap {

// Alignment pair ids are "<figure_id>::<source kind name>".
std::string alignment_pair_id(std::string_view figure_id,
                              const SourceKind& kind);

struct CoverageRow {
  std::string source_kind;
  double caption_percent = 0;
  double source_percent = 0;
  std::size_t figures = 0;
};

// Macro average (per-figure mean) of coverage pairs, in percent. Figures that
// cannot provide the source (no mention, or no OCR for OCR kinds) are skipped.
// With `alignments` the coverage comes from the ingested links instead of the
// built-in matcher; a missing pair is an error.
CoverageRow macro_coverage(const Corpus& corpus, const MentionIndex& index,
                           const SourceKind& kind,
                           const AlignmentSet* alignments = nullptr,
                           const TokenizerConfig& content =
                               TokenizerConfig::content_words());

enum class MentionMode { kFirst, kRandom };
enum class CaptionMode { kFirst, kWhole };

// Corpus BLEU-4 between (chosen mention + `context` following sentences) and
// the first caption sentence or the whole caption. Returned on the 0..1 scale.
double mention_caption_overlap(const Corpus& corpus, const MentionIndex& index,
                               MentionMode mention_mode, int context,
                               CaptionMode caption_mode, std::uint64_t seed);

}  // namespace figcap
