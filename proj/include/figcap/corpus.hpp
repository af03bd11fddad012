#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace figcap {

struct SegmenterConfig;

enum class Split { kTrain, kVal, kTest, kUnassigned };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

// One OCR detection inside a figure image, in pixel coordinates.
struct OcrBox {
  std::string text;
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  bool operator==(const OcrBox&) const = default;
};

struct FigureRecord {
  std::string figure_id;
  std::string paper_id;
  int figure_label = 1;  // the figure number as printed in the paper
  std::string caption_text;
  std::vector<OcrBox> ocr;
  Split split = Split::kUnassigned;

  bool operator==(const FigureRecord&) const = default;
};

// A sentence of a paragraph; [begin, end) indexes the paragraph text.
struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Sentence&) const = default;
};

struct Paragraph {
  std::string paragraph_id;
  std::string text;  // whitespace-normalized
  std::vector<Sentence> sentences;

  bool operator==(const Paragraph&) const = default;
};

struct Document {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::vector<Paragraph> paragraphs;
  std::vector<std::string> figure_ids;

  const Paragraph* find_paragraph(std::string_view paragraph_id) const;
  bool operator==(const Document&) const = default;
};

// Immutable collection of papers and their figures. Construction validates
// the cross references: unique figure ids, captions non-empty, labels >= 1,
// every figure's paper present. Document::figure_ids is rebuilt from the
// figure list (file order).
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> documents, std::vector<FigureRecord> figures);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<FigureRecord>& figures() const { return figures_; }

  const Document* find_document(std::string_view paper_id) const;
  const FigureRecord* find_figure(std::string_view figure_id) const;
  const Document& document_of(const FigureRecord& figure) const;

  bool operator==(const Corpus& other) const {
    return documents_ == other.documents_ && figures_ == other.figures_;
  }

 private:
  std::vector<Document> documents_;
  std::vector<FigureRecord> figures_;
  std::unordered_map<std::string, std::size_t> document_index_;
  std::unordered_map<std::string, std::size_t> figure_index_;
};

// Reads papers.jsonl, figures.jsonl and the optional ocr.jsonl / splits.json
// from `dir`. Paragraph text is whitespace-normalized and segmented.
Corpus load_corpus(const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir,
                   const SegmenterConfig& segmenter);

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

using SplitAssignment = std::map<std::string, Split>;  // paper_id -> split

// Shuffles the papers (sorted by id first) with `seed` and cuts the shuffled
// list by largest-remainder rounding of the ratios. Figures inherit their
// paper's split through apply_splits.
SplitAssignment resplit_by_paper(const Corpus& corpus, SplitRatios ratios,
                                 std::uint64_t seed);
Corpus apply_splits(const Corpus& corpus, const SplitAssignment& splits);

SplitAssignment read_splits(const std::filesystem::path& path);
void write_splits(const SplitAssignment& splits,
                  const std::filesystem::path& path);

// Keeps figures whose caption has at least `min_tokens` length tokens.
// Documents without surviving figures are dropped.
Corpus filter_better(const Corpus& corpus, int min_tokens = 30);

}  // namespace figcap
