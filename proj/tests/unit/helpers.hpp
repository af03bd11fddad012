#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "figcap/corpus.hpp"
#include "figcap/docparse.hpp"

namespace figcap::test {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("figcap-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline Paragraph make_paragraph(std::string id, const std::string& text) {
  Paragraph p;
  p.paragraph_id = std::move(id);
  p.text = normalize_whitespace(text);
  p.sentences = segment_sentences(p.text, SegmenterConfig::defaults());
  return p;
}

inline Document make_document(std::string paper_id,
                              const std::vector<std::string>& paragraphs) {
  Document d;
  d.paper_id = std::move(paper_id);
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    d.paragraphs.push_back(
        make_paragraph("p" + std::to_string(i + 1), paragraphs[i]));
  }
  return d;
}

inline FigureRecord make_figure(std::string figure_id, std::string paper_id,
                                int label, std::string caption) {
  FigureRecord f;
  f.figure_id = std::move(figure_id);
  f.paper_id = std::move(paper_id);
  f.figure_label = label;
  f.caption_text = std::move(caption);
  return f;
}

inline const Corpus& fixture() {
  static const Corpus corpus = load_corpus(FIGCAP_FIXTURE_DIR);
  return corpus;
}

}  // namespace figcap::test
