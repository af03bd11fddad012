#include <fstream>
#include <set>

#include "figcap/corpus.hpp"
#include "figcap/docparse.hpp"
#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"

namespace figcap {

namespace fs = std::filesystem;

namespace {

Document document_from_json(const Json& rec, const SegmenterConfig& segmenter) {
  Document doc;
  doc.paper_id = require_string(rec, "paper_id");
  doc.title = rec.value("title", "");
  doc.abstract = rec.value("abstract", "");
  auto paragraphs = rec.find("paragraphs");
  if (paragraphs == rec.end() || !paragraphs->is_array()) {
    throw Error("missing field 'paragraphs'");
  }
  std::set<std::string> seen;
  for (const Json& p : *paragraphs) {
    Paragraph paragraph;
    paragraph.paragraph_id = require_string(p, "paragraph_id");
    if (!seen.insert(paragraph.paragraph_id).second) {
      throw Error("duplicate paragraph_id '" + paragraph.paragraph_id + "'");
    }
    paragraph.text = normalize_whitespace(require_string(p, "text"));
    paragraph.sentences = segment_sentences(paragraph.text, segmenter);
    doc.paragraphs.push_back(std::move(paragraph));
  }
  return doc;
}

FigureRecord figure_from_json(const Json& rec) {
  FigureRecord fig;
  fig.figure_id = require_string(rec, "figure_id");
  fig.paper_id = require_string(rec, "paper_id");
  fig.figure_label = static_cast<int>(require_int(rec, "figure_label"));
  fig.caption_text = require_string(rec, "caption_text");
  if (fig.figure_label < 1) throw Error("figure_label must be >= 1");
  if (normalize_whitespace(fig.caption_text).empty()) {
    throw Error("caption_text is empty");
  }
  return fig;
}

std::vector<OcrBox> boxes_from_json(const Json& rec) {
  std::vector<OcrBox> boxes;
  auto it = rec.find("boxes");
  if (it == rec.end() || !it->is_array()) throw Error("missing field 'boxes'");
  for (const Json& b : *it) {
    OcrBox box;
    box.text = require_string(b, "text");
    box.x = require_number(b, "x");
    box.y = require_number(b, "y");
    box.width = require_number(b, "w");
    box.height = require_number(b, "h");
    if (box.width < 0 || box.height < 0) {
      throw Error("OCR box with negative size");
    }
    if (box.text.empty()) throw Error("OCR box with empty text");
    boxes.push_back(std::move(box));
  }
  return boxes;
}

}  // namespace

Corpus load_corpus(const fs::path& dir) {
  return load_corpus(dir, SegmenterConfig::defaults());
}

Corpus load_corpus(const fs::path& dir, const SegmenterConfig& segmenter) {
  segmenter.validate();
  std::vector<Document> documents;
  for_each_jsonl(dir / "papers.jsonl", [&](const Json& rec, std::size_t) {
    documents.push_back(document_from_json(rec, segmenter));
  });

  std::vector<FigureRecord> figures;
  std::map<std::string, std::size_t> by_id;
  for_each_jsonl(dir / "figures.jsonl", [&](const Json& rec, std::size_t) {
    FigureRecord fig = figure_from_json(rec);
    if (!by_id.emplace(fig.figure_id, figures.size()).second) {
      throw Error("duplicate figure_id '" + fig.figure_id + "'");
    }
    figures.push_back(std::move(fig));
  });

  if (fs::exists(dir / "ocr.jsonl")) {
    for_each_jsonl(dir / "ocr.jsonl", [&](const Json& rec, std::size_t) {
      std::string id = require_string(rec, "figure_id");
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw Error("OCR record for unknown figure '" + id + "'");
      }
      figures[it->second].ocr = boxes_from_json(rec);
    });
  }

  Corpus corpus(std::move(documents), std::move(figures));
  if (fs::exists(dir / "splits.json")) {
    corpus = apply_splits(corpus, read_splits(dir / "splits.json"));
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<Json> papers;
  for (const Document& doc : corpus.documents()) {
    Json paragraphs = Json::array();
    for (const Paragraph& p : doc.paragraphs) {
      paragraphs.push_back({{"paragraph_id", p.paragraph_id}, {"text", p.text}});
    }
    papers.push_back({{"paper_id", doc.paper_id},
                      {"title", doc.title},
                      {"abstract", doc.abstract},
                      {"paragraphs", std::move(paragraphs)}});
  }
  write_jsonl(dir / "papers.jsonl", papers);

  std::vector<Json> figures;
  std::vector<Json> ocr;
  SplitAssignment splits;
  for (const FigureRecord& fig : corpus.figures()) {
    figures.push_back({{"figure_id", fig.figure_id},
                       {"paper_id", fig.paper_id},
                       {"figure_label", fig.figure_label},
                       {"caption_text", fig.caption_text}});
    if (!fig.ocr.empty()) {
      Json boxes = Json::array();
      for (const OcrBox& b : fig.ocr) {
        boxes.push_back({{"text", b.text},
                         {"x", b.x},
                         {"y", b.y},
                         {"w", b.width},
                         {"h", b.height}});
      }
      ocr.push_back({{"figure_id", fig.figure_id}, {"boxes", std::move(boxes)}});
    }
    if (fig.split != Split::kUnassigned) splits[fig.paper_id] = fig.split;
  }
  write_jsonl(dir / "figures.jsonl", figures);
  write_jsonl(dir / "ocr.jsonl", ocr);
  if (!splits.empty()) write_splits(splits, dir / "splits.json");
}

SplitAssignment read_splits(const fs::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(path.string() + ": expected an object");
  SplitAssignment splits;
  for (auto& [paper, split] : doc.items()) {
    if (!split.is_string()) {
      throw Error(path.string() + ": split of '" + paper + "' must be a string");
    }
    Split s = parse_split(split.get<std::string>());
    if (s == Split::kUnassigned) {
      throw Error(path.string() + ": '" + paper + "' has no split");
    }
    splits[paper] = s;
  }
  return splits;
}

void write_splits(const SplitAssignment& splits, const fs::path& path) {
  Json doc = Json::object();
  for (const auto& [paper, split] : splits) doc[paper] = to_string(split);
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace figcap
