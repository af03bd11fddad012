#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "figcap/corpus.hpp"

namespace figcap {

struct FigureRef {
  int figure_label = 0;
  std::size_t begin = 0;  // byte span of the whole reference in the sentence
  std::size_t end = 0;
  std::string pattern_id;

  bool operator==(const FigureRef&) const = default;
};

// Finds "Figure N", "Fig. N", "FIG. N", "Figs. N and M", "Figures 2-4",
// subfigure suffixes ("3(b)", "3b"), case-insensitively. Roman numerals and
// appendix labels ("Figure A1") are not recognised.
std::vector<FigureRef> detect_figure_refs(std::string_view sentence);

struct MentionRef {
  std::string paragraph_id;
  std::size_t sentence_index = 0;

  bool operator==(const MentionRef&) const = default;
};

// figure_id -> mentions in document order. Figures without any mention are
// listed in `excluded` (and map to an empty list).
struct MentionIndex {
  std::map<std::string, std::vector<MentionRef>> mentions;
  std::set<std::string> excluded;

  bool is_excluded(std::string_view figure_id) const;
  const std::vector<MentionRef>& of(std::string_view figure_id) const;
  bool operator==(const MentionIndex&) const = default;
};

MentionIndex build_mention_index(const Document& document,
                                 std::span<const FigureRecord> figures);
MentionIndex build_mention_index(const Corpus& corpus);

void write_mentions(const MentionIndex& index, const Corpus& corpus,
                    const std::filesystem::path& path);
MentionIndex read_mentions(const std::filesystem::path& path,
                           const Corpus& corpus);

struct WindowSpec {
  int preceding = 0;
  int following = 0;

  bool operator==(const WindowSpec&) const = default;
};

WindowSpec parse_window(std::string_view text);  // "n,m"

enum class SourceBase { kMention, kWindow, kParagraph, kOcr };

struct SourceKind {
  SourceBase base = SourceBase::kMention;
  WindowSpec window;
  bool with_ocr = false;

  bool needs_mention() const { return base != SourceBase::kOcr; }
  bool uses_ocr() const { return with_ocr || base == SourceBase::kOcr; }
  // "Mention", "Paragraph", "OCR", "Window[1,1]", with "+OCR" appended.
  std::string name() const;
  // Accepts name() output and the short forms M, P, O, W[n,m], M+O, P+O.
  static SourceKind parse(std::string_view text);

  bool operator==(const SourceKind&) const = default;
};

struct SourceText {
  std::string figure_id;
  SourceKind kind;
  std::string text;
  std::size_t token_length = 0;
};

// The mention sentence plus up to n preceding / m following sentences of the
// same paragraph, joined with single spaces.
SourceText extract_window(const Document& document, const MentionRef& mention,
                          WindowSpec spec);

SourceText build_source_text(const Corpus& corpus, const MentionIndex& index,
                             const FigureRecord& figure, SourceKind kind);

// Paragraph containing the figure's first mention.
const Paragraph& first_mention_paragraph(const Corpus& corpus,
                                         const MentionIndex& index,
                                         const FigureRecord& figure);

struct GoldSentence {
  std::string text;
  std::set<int> labels;
};

struct DetectorScore {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0;
  double recall = 0;
};

// TSV: sentence TAB comma-separated labels (empty = no mention).
std::vector<GoldSentence> load_gold_set(const std::filesystem::path& path);
DetectorScore evaluate_detector(std::span<const GoldSentence> gold);

}  // namespace figcap
