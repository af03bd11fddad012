#include <algorithm>
#include <cctype>
#include <charconv>

#include "figcap/docparse.hpp"
#include "figcap/error.hpp"
#include "figcap/mentions.hpp"
#include "figcap/metrics.hpp"

namespace figcap {
namespace {

int parse_count(std::string_view text, std::string_view whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  int value = -1;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      value < 0) {
    throw Error("bad window '" + std::string(whole) +
                "': expected two non-negative integers n,m");
  }
  return value;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

WindowSpec parse_window(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw Error("bad window '" + std::string(text) +
                "': expected two non-negative integers n,m");
  }
  return {parse_count(text.substr(0, comma), text),
          parse_count(text.substr(comma + 1), text)};
}

std::string SourceKind::name() const {
  std::string out;
  switch (base) {
    case SourceBase::kMention: out = "Mention"; break;
    case SourceBase::kParagraph: out = "Paragraph"; break;
    case SourceBase::kOcr: return "OCR";
    case SourceBase::kWindow:
      out = "Window[" + std::to_string(window.preceding) + "," +
            std::to_string(window.following) + "]";
      break;
  }
  if (with_ocr) out += "+OCR";
  return out;
}

SourceKind SourceKind::parse(std::string_view text) {
  SourceKind kind;
  std::string_view rest = text;
  for (std::string_view suffix : {"+OCR", "+O"}) {
    if (rest.size() > suffix.size() &&
        starts_with_ci(rest.substr(rest.size() - suffix.size()), suffix)) {
      kind.with_ocr = true;
      rest.remove_suffix(suffix.size());
      break;
    }
  }
  auto equals_ci = [&](std::string_view a) {
    return rest.size() == a.size() && starts_with_ci(rest, a);
  };
  if (equals_ci("Mention") || equals_ci("M")) {
    kind.base = SourceBase::kMention;
  } else if (equals_ci("Paragraph") || equals_ci("P")) {
    kind.base = SourceBase::kParagraph;
  } else if (!kind.with_ocr && (equals_ci("OCR") || equals_ci("O"))) {
    kind.base = SourceBase::kOcr;
  } else if ((starts_with_ci(rest, "Window[") || starts_with_ci(rest, "W[")) &&
             rest.back() == ']') {
    kind.base = SourceBase::kWindow;
    auto open = rest.find('[');
    kind.window = parse_window(rest.substr(open + 1, rest.size() - open - 2));
  } else {
    throw Error("unknown source kind '" + std::string(text) + "'");
  }
  return kind;
}

SourceText extract_window(const Document& document, const MentionRef& mention,
                          WindowSpec spec) {
  if (spec.preceding < 0 || spec.following < 0) {
    throw Error("window sizes must be non-negative");
  }
  const Paragraph* paragraph = document.find_paragraph(mention.paragraph_id);
  if (paragraph == nullptr ||
      mention.sentence_index >= paragraph->sentences.size()) {
    throw Error("mention (" + mention.paragraph_id + ", " +
                std::to_string(mention.sentence_index) +
                ") does not resolve in paper '" + document.paper_id + "'");
  }
  const std::size_t first =
      mention.sentence_index -
      std::min<std::size_t>(mention.sentence_index, spec.preceding);
  const std::size_t last =
      std::min(paragraph->sentences.size() - 1,
               mention.sentence_index + static_cast<std::size_t>(spec.following));
  SourceText out;
  out.kind.base = SourceBase::kWindow;
  out.kind.window = spec;
  for (std::size_t i = first; i <= last; ++i) {
    if (i > first) out.text += ' ';
    out.text += paragraph->sentences[i].text;
  }
  out.token_length = token_length(out.text);
  return out;
}

const Paragraph& first_mention_paragraph(const Corpus& corpus,
                                         const MentionIndex& index,
                                         const FigureRecord& figure) {
  const auto& list = index.of(figure.figure_id);
  if (list.empty()) {
    throw Error("figure '" + figure.figure_id +
                "' has no mention and is excluded from summarization");
  }
  const Document& doc = corpus.document_of(figure);
  const Paragraph* p = doc.find_paragraph(list.front().paragraph_id);
  if (p == nullptr) {
    throw Error("mention paragraph '" + list.front().paragraph_id +
                "' missing from paper '" + doc.paper_id + "'");
  }
  return *p;
}

SourceText build_source_text(const Corpus& corpus, const MentionIndex& index,
                             const FigureRecord& figure, SourceKind kind) {
  SourceText out;
  if (kind.needs_mention()) {
    const auto& list = index.of(figure.figure_id);
    if (list.empty()) {
      throw Error("figure '" + figure.figure_id +
                  "' has no mention and is excluded from summarization");
    }
    const Document& doc = corpus.document_of(figure);
    switch (kind.base) {
      case SourceBase::kMention:
        out.text = extract_window(doc, list.front(), {0, 0}).text;
        break;
      case SourceBase::kWindow:
        out.text = extract_window(doc, list.front(), kind.window).text;
        break;
      case SourceBase::kParagraph:
        out.text = first_mention_paragraph(corpus, index, figure).text;
        break;
      case SourceBase::kOcr:
        break;
    }
  }
  if (kind.uses_ocr()) {
    std::string ocr = order_ocr(figure.ocr);
    if (!out.text.empty() && !ocr.empty()) out.text += ' ';
    out.text += ocr;
  }
  out.figure_id = figure.figure_id;
  out.kind = kind;
  out.token_length = token_length(out.text);
  return out;
}

}  // namespace figcap
