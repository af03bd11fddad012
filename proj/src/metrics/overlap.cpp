#include "figcap/docparse.hpp"
#include "figcap/error.hpp"
#include "figcap/metrics_corpus.hpp"
#include "figcap/rng.hpp"

namespace figcap {

std::string alignment_pair_id(std::string_view figure_id,
                              const SourceKind& kind) {
  return std::string(figure_id) + "::" + kind.name();
}

CoverageRow macro_coverage(const Corpus& corpus, const MentionIndex& index,
                           const SourceKind& kind,
                           const AlignmentSet* alignments,
                           const TokenizerConfig& content) {
  CoverageRow row;
  row.source_kind = kind.name();
  double caption_sum = 0;
  double source_sum = 0;
  for (const FigureRecord& fig : corpus.figures()) {
    if (kind.needs_mention() && index.is_excluded(fig.figure_id)) continue;
    if (kind.uses_ocr() && fig.ocr.empty()) continue;
    CoveragePair pair;
    if (alignments != nullptr) {
      const std::string id = alignment_pair_id(fig.figure_id, kind);
      auto it = alignments->find(id);
      if (it == alignments->end()) {
        throw Error("no alignment for pair '" + id + "'");
      }
      pair = coverage_pair(it->second);
    } else {
      SourceText source = build_source_text(corpus, index, fig, kind);
      pair = coverage_pair(fig.caption_text, source.text, content);
    }
    caption_sum += pair.caption_coverage;
    source_sum += pair.source_coverage;
    ++row.figures;
  }
  if (row.figures > 0) {
    row.caption_percent = 100.0 * caption_sum / row.figures;
    row.source_percent = 100.0 * source_sum / row.figures;
  }
  return row;
}

double mention_caption_overlap(const Corpus& corpus, const MentionIndex& index,
                               MentionMode mention_mode, int context,
                               CaptionMode caption_mode, std::uint64_t seed) {
  if (context < 0) throw Error("context must be non-negative");
  const TokenizerConfig config = bleu_tokenizer();
  const SegmenterConfig segmenter = SegmenterConfig::defaults();
  std::vector<TokenPair> pairs;
  for (const FigureRecord& fig : corpus.figures()) {
    const auto& list = index.of(fig.figure_id);
    if (list.empty()) continue;
    std::size_t pick = 0;
    if (mention_mode == MentionMode::kRandom) {
      Rng rng(derive_seed(seed, fig.figure_id, 0x300));
      pick = rng.uniform(list.size());
    }
    const std::string candidate =
        extract_window(corpus.document_of(fig), list[pick], {0, context}).text;
    std::string reference = fig.caption_text;
    if (caption_mode == CaptionMode::kFirst) {
      std::string normalized = normalize_whitespace(fig.caption_text);
      auto sentences = segment_sentences(normalized, segmenter);
      if (!sentences.empty()) reference = sentences.front().text;
    }
    pairs.push_back({tokenize(candidate, config), tokenize(reference, config)});
  }
  if (pairs.empty()) return 0.0;
  return bleu4_corpus(pairs);
}

}  // namespace figcap
