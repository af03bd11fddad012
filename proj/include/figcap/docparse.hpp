#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "figcap/corpus.hpp"
#include "figcap/error.hpp"

namespace figcap {

struct SegmenterConfig {
  // Strings that never end a sentence ("Fig.", "et al.", ...). Matched
  // case-insensitively against the text that ends at a terminator.
  std::vector<std::string> abbreviations;
  std::string terminators = ".!?";

  static SegmenterConfig defaults();
  void validate() const;
};

class XmlParseError : public Error {
 public:
  XmlParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParsedDocument {
  Document document;
  std::vector<std::string> warnings;
};

// Parses TEI-style XML. Every <p> beneath <body> (or anywhere, when the file
// has no body) becomes one paragraph; inline markup is dropped, <formula>
// content is replaced by the token "MATH" and whitespace is collapsed.
ParsedDocument parse_document(std::string_view xml, std::string paper_id,
                              const SegmenterConfig& segmenter =
                                  SegmenterConfig::defaults());

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::vector<Sentence> segment_sentences(std::string_view text,
                                        const SegmenterConfig& config);

// Reading order for OCR boxes: rows (y within `row_tolerance` of the row's
// first box), top to bottom, then left to right inside a row.
std::string order_ocr(std::span<const OcrBox> boxes, double row_tolerance);
std::string order_ocr(std::span<const OcrBox> boxes);

// Half the median box height; 0 for an empty list.
double default_row_tolerance(std::span<const OcrBox> boxes);

}  // namespace figcap
