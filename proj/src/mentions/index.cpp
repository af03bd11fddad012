#include <map>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/mentions.hpp"

namespace figcap {

bool MentionIndex::is_excluded(std::string_view figure_id) const {
  return excluded.count(std::string(figure_id)) > 0;
}

const std::vector<MentionRef>& MentionIndex::of(
    std::string_view figure_id) const {
  static const std::vector<MentionRef> kNone;
  auto it = mentions.find(std::string(figure_id));
  return it == mentions.end() ? kNone : it->second;
}

MentionIndex build_mention_index(const Document& document,
                                 std::span<const FigureRecord> figures) {
  // label -> figures of this paper carrying it
  std::map<int, std::vector<const FigureRecord*>> by_label;
  MentionIndex index;
  for (const FigureRecord& fig : figures) {
    if (fig.paper_id != document.paper_id) continue;
    by_label[fig.figure_label].push_back(&fig);
    index.mentions[fig.figure_id];
  }
  for (const Paragraph& paragraph : document.paragraphs) {
    for (const Sentence& sentence : paragraph.sentences) {
      std::set<int> labels;
      for (const FigureRef& ref : detect_figure_refs(sentence.text)) {
        labels.insert(ref.figure_label);
      }
      for (int label : labels) {
        auto it = by_label.find(label);
        if (it == by_label.end()) continue;
        for (const FigureRecord* fig : it->second) {
          index.mentions[fig->figure_id].push_back(
              {paragraph.paragraph_id, sentence.index});
        }
      }
    }
  }
  for (const auto& [figure_id, list] : index.mentions) {
    if (list.empty()) index.excluded.insert(figure_id);
  }
  return index;
}

MentionIndex build_mention_index(const Corpus& corpus) {
  MentionIndex all;
  for (const Document& doc : corpus.documents()) {
    std::vector<FigureRecord> figures;
    for (const std::string& id : doc.figure_ids) {
      figures.push_back(*corpus.find_figure(id));
    }
    MentionIndex part = build_mention_index(doc, figures);
    all.mentions.merge(part.mentions);
    all.excluded.merge(part.excluded);
  }
  return all;
}

void write_mentions(const MentionIndex& index, const Corpus& corpus,
                    const std::filesystem::path& path) {
  std::vector<Json> records;
  for (const FigureRecord& fig : corpus.figures()) {
    Json list = Json::array();
    for (const MentionRef& m : index.of(fig.figure_id)) {
      list.push_back(
          {{"paragraph_id", m.paragraph_id}, {"sentence_index", m.sentence_index}});
    }
    records.push_back({{"figure_id", fig.figure_id}, {"mentions", std::move(list)}});
  }
  write_jsonl(path, records);
}

MentionIndex read_mentions(const std::filesystem::path& path,
                           const Corpus& corpus) {
  MentionIndex index;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    std::string figure_id = require_string(rec, "figure_id");
    const FigureRecord* fig = corpus.find_figure(figure_id);
    if (fig == nullptr) throw Error("unknown figure '" + figure_id + "'");
    const Document& doc = corpus.document_of(*fig);
    auto& list = index.mentions[figure_id];
    for (const Json& m : rec.at("mentions")) {
      MentionRef ref{require_string(m, "paragraph_id"),
                     static_cast<std::size_t>(require_int(m, "sentence_index"))};
      const Paragraph* p = doc.find_paragraph(ref.paragraph_id);
      if (p == nullptr || ref.sentence_index >= p->sentences.size()) {
        throw Error("mention of '" + figure_id + "' does not resolve in paper '" +
                    doc.paper_id + "'");
      }
      list.push_back(std::move(ref));
    }
    if (list.empty()) index.excluded.insert(figure_id);
  });
  return index;
}

}  // namespace figcap
