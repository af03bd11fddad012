#include <algorithm>
#include <array>
#include <set>
#include <cmath>
#include <numeric>

#include "figcap/corpus.hpp"
#include "figcap/docparse.hpp"
#include "figcap/error.hpp"
#include "figcap/metrics.hpp"
#include "figcap/rng.hpp"

namespace figcap {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  if (name == "unassigned") return Split::kUnassigned;
  throw Error("unknown split '" + std::string(name) + "'");
}

const Paragraph* Document::find_paragraph(std::string_view paragraph_id) const {
  for (const Paragraph& p : paragraphs) {
    if (p.paragraph_id == paragraph_id) return &p;
  }
  return nullptr;
}

Corpus::Corpus(std::vector<Document> documents,
               std::vector<FigureRecord> figures)
    : documents_(std::move(documents)), figures_(std::move(figures)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    auto [it, inserted] = document_index_.emplace(documents_[i].paper_id, i);
    if (!inserted) {
      throw Error("duplicate paper_id '" + documents_[i].paper_id + "'");
    }
    documents_[i].figure_ids.clear();
  }
  std::vector<std::string> orphans;
  for (std::size_t i = 0; i < figures_.size(); ++i) {
    const FigureRecord& fig = figures_[i];
    if (!figure_index_.emplace(fig.figure_id, i).second) {
      throw Error("duplicate figure_id '" + fig.figure_id + "'");
    }
    if (normalize_whitespace(fig.caption_text).empty()) {
      throw Error("figure '" + fig.figure_id + "' has an empty caption");
    }
    if (fig.figure_label < 1) {
      throw Error("figure '" + fig.figure_id + "' has label < 1");
    }
    auto doc = document_index_.find(fig.paper_id);
    if (doc == document_index_.end()) {
      orphans.push_back(fig.figure_id + " (paper_id '" + fig.paper_id + "')");
      continue;
    }
    documents_[doc->second].figure_ids.push_back(fig.figure_id);
  }
  if (!orphans.empty()) {
    std::string msg = "figures reference unknown papers:";
    for (const std::string& o : orphans) msg += " " + o;
    throw Error(msg);
  }
}

const Document* Corpus::find_document(std::string_view paper_id) const {
  auto it = document_index_.find(std::string(paper_id));
  return it == document_index_.end() ? nullptr : &documents_[it->second];
}

const FigureRecord* Corpus::find_figure(std::string_view figure_id) const {
  auto it = figure_index_.find(std::string(figure_id));
  return it == figure_index_.end() ? nullptr : &figures_[it->second];
}

const Document& Corpus::document_of(const FigureRecord& figure) const {
  const Document* doc = find_document(figure.paper_id);
  if (doc == nullptr) throw Error("unknown paper '" + figure.paper_id + "'");
  return *doc;
}

SplitAssignment resplit_by_paper(const Corpus& corpus, SplitRatios ratios,
                                 std::uint64_t seed) {
  const double r[3] = {ratios.train, ratios.val, ratios.test};
  for (double v : r) {
    if (!(v >= 0)) throw Error("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error("split ratios must sum to 1");
  }
  if (corpus.documents().empty()) throw Error("cannot resplit an empty corpus");

  std::vector<std::string> papers;
  for (const Document& doc : corpus.documents()) papers.push_back(doc.paper_id);
  std::sort(papers.begin(), papers.end());
  Rng rng(derive_seed(seed, "resplit", 0));
  rng.shuffle(papers);

  // Largest-remainder apportionment; ties go to the earlier split.
  const std::size_t n = papers.size();
  std::size_t counts[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int s = 0; s < 3; ++s) {
    const double exact = r[s] * static_cast<double>(n);
    counts[s] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders[s] = exact - static_cast<double>(counts[s]);
    assigned += counts[s];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainders[a] > remainders[b];
  });
  for (int k = 0; assigned < n; k = (k + 1) % 3) {
    ++counts[order[k]];
    ++assigned;
  }

  const Split kinds[3] = {Split::kTrain, Split::kVal, Split::kTest};
  SplitAssignment assignment;
  std::size_t pos = 0;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < counts[s]; ++i) {
      assignment[papers[pos++]] = kinds[s];
    }
  }
  return assignment;
}

Corpus apply_splits(const Corpus& corpus, const SplitAssignment& splits) {
  std::vector<FigureRecord> figures = corpus.figures();
  for (FigureRecord& fig : figures) {
    auto it = splits.find(fig.paper_id);
    fig.split = it == splits.end() ? Split::kUnassigned : it->second;
  }
  return Corpus(corpus.documents(), std::move(figures));
}

Corpus filter_better(const Corpus& corpus, int min_tokens) {
  if (min_tokens <= 0) throw Error("filter_better: min_tokens must be positive");
  std::vector<FigureRecord> kept;
  std::set<std::string> papers;
  for (const FigureRecord& fig : corpus.figures()) {
    if (token_length(fig.caption_text) >= static_cast<std::size_t>(min_tokens)) {
      kept.push_back(fig);
      papers.insert(fig.paper_id);
    }
  }
  std::vector<Document> documents;
  for (const Document& doc : corpus.documents()) {
    if (papers.count(doc.paper_id)) documents.push_back(doc);
  }
  return Corpus(std::move(documents), std::move(kept));
}

}  // namespace figcap
