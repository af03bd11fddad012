#include <doctest.h>

#include <fstream>
#include <map>
#include <numeric>

#include "figcap/corpus.hpp"
#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "unit/helpers.hpp"

using namespace figcap;
using figcap::test::TempDir;

namespace {

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
}

Corpus small_corpus(int papers, int figures_per_paper) {
  std::vector<Document> docs;
  std::vector<FigureRecord> figs;
  for (int p = 0; p < papers; ++p) {
    const std::string id = "P" + std::to_string(p);
    docs.push_back(test::make_document(id, {"Figure 1 shows it."}));
    for (int f = 1; f <= figures_per_paper; ++f) {
      figs.push_back(test::make_figure(id + "-" + std::to_string(f), id, f,
                                       "A caption."));
    }
  }
  return Corpus(docs, figs);
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("two papers and three figures load with counts preserved") {
  TempDir dir;
  write_lines(dir / "papers.jsonl",
              {R"({"paper_id":"a","title":"T","abstract":"","paragraphs":[{"paragraph_id":"p1","text":"Figure 1 shows x."}]})",
               R"({"paper_id":"b","paragraphs":[{"paragraph_id":"p1","text":"Fig. 2 too. And  more."}]})"});
  write_lines(dir / "figures.jsonl",
              {R"({"figure_id":"a1","paper_id":"a","figure_label":1,"caption_text":"c1"})",
               R"({"figure_id":"b1","paper_id":"b","figure_label":1,"caption_text":"c2"})",
               R"({"figure_id":"b2","paper_id":"b","figure_label":2,"caption_text":"c3"})"});
  const Corpus c = load_corpus(dir.path());
  CHECK(c.documents().size() == 2);
  CHECK(c.figures().size() == 3);
  CHECK(c.find_document("b")->figure_ids == std::vector<std::string>{"b1", "b2"});
  CHECK(c.find_document("b")->paragraphs[0].text == "Fig. 2 too. And more.");
  CHECK(c.find_document("b")->paragraphs[0].sentences.size() == 2);
  CHECK(&c.document_of(*c.find_figure("a1")) == c.find_document("a"));
}

TEST_CASE("schema and integrity errors name the problem") {
  TempDir dir;
  write_lines(dir / "papers.jsonl",
              {R"({"paper_id":"a","paragraphs":[]})"});
  SUBCASE("missing caption_text reports file and line") {
    write_lines(dir / "figures.jsonl",
                {R"({"figure_id":"a1","paper_id":"a","figure_label":1,"caption_text":"x"})",
                 R"({"figure_id":"a2","paper_id":"a","figure_label":2})"});
    try {
      load_corpus(dir.path());
      FAIL("expected an error");
    } catch (const Error& e) {
      const std::string what = e.what();
      CHECK(what.find("figures.jsonl:2") != std::string::npos);
      CHECK(what.find("caption_text") != std::string::npos);
    }
  }
  SUBCASE("orphan figure lists the unknown paper id") {
    write_lines(dir / "figures.jsonl",
                {R"({"figure_id":"z1","paper_id":"zzz","figure_label":1,"caption_text":"x"})"});
    try {
      load_corpus(dir.path());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("zzz") != std::string::npos);
    }
  }
  SUBCASE("duplicate figure id") {
    write_lines(dir / "figures.jsonl",
                {R"({"figure_id":"a1","paper_id":"a","figure_label":1,"caption_text":"x"})",
                 R"({"figure_id":"a1","paper_id":"a","figure_label":2,"caption_text":"y"})"});
    CHECK_THROWS_WITH_AS(load_corpus(dir.path()), doctest::Contains("duplicate"), Error);
  }
  SUBCASE("blank caption and zero label") {
    write_lines(dir / "figures.jsonl",
                {R"({"figure_id":"a1","paper_id":"a","figure_label":1,"caption_text":"   "})"});
    CHECK_THROWS_AS(load_corpus(dir.path()), Error);
    write_lines(dir / "figures.jsonl",
                {R"({"figure_id":"a1","paper_id":"a","figure_label":0,"caption_text":"x"})"});
    CHECK_THROWS_AS(load_corpus(dir.path()), Error);
  }
  SUBCASE("malformed json line") {
    write_lines(dir / "figures.jsonl", {"{not json"});
    CHECK_THROWS_WITH_AS(load_corpus(dir.path()),
                         doctest::Contains("figures.jsonl:1"), Error);
  }
}

TEST_CASE("write_corpus then load_corpus yields an equal corpus") {
  TempDir dir;
  Corpus c = test::fixture();
  c = apply_splits(c, resplit_by_paper(c, {}, 5));
  write_corpus(c, dir.path());
  CHECK(load_corpus(dir.path()) == c);
}

TEST_CASE("fixture corpus shape") {
  const Corpus& c = test::fixture();
  CHECK(c.documents().size() == 50);
  CHECK(c.figures().size() == 100);
  std::size_t with_ocr = 0;
  for (const auto& f : c.figures()) with_ocr += !f.ocr.empty();
  CHECK(with_ocr == 80);
}

TEST_CASE("resplit of 10 papers at 0.8/0.1/0.1 is 8/1/1 and repeatable") {
  const Corpus c = small_corpus(10, 1);
  const SplitAssignment a = resplit_by_paper(c, {0.8, 0.1, 0.1}, 42);
  CHECK(a == resplit_by_paper(c, {0.8, 0.1, 0.1}, 42));
  std::map<Split, int> counts;
  for (const auto& [paper, split] : a) ++counts[split];
  CHECK(counts[Split::kTrain] == 8);
  CHECK(counts[Split::kVal] == 1);
  CHECK(counts[Split::kTest] == 1);
}

TEST_CASE("resplit keeps a paper's figures together for seeds 0..99") {
  const Corpus c = small_corpus(7, 4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Corpus split = apply_splits(c, resplit_by_paper(c, {0.6, 0.2, 0.2}, seed));
    std::map<std::string, std::set<Split>> seen;
    for (const auto& f : split.figures()) seen[f.paper_id].insert(f.split);
    for (const auto& [paper, splits] : seen) {
      CHECK(splits.size() == 1);
      CHECK(*splits.begin() != Split::kUnassigned);
    }
  }
}

TEST_CASE("resplit sizes deviate from the ratios by at most one paper") {
  for (int n : {1, 2, 3, 7, 10, 11, 50}) {
    const Corpus c = small_corpus(n, 1);
    for (SplitRatios r : {SplitRatios{0.8, 0.1, 0.1}, SplitRatios{0.5, 0.25, 0.25},
                          SplitRatios{1, 0, 0}, SplitRatios{0.34, 0.33, 0.33}}) {
      std::map<Split, int> counts;
      for (const auto& [p, s] : resplit_by_paper(c, r, 1)) ++counts[s];
      CHECK(std::abs(counts[Split::kTrain] - r.train * n) <= 1.0);
      CHECK(std::abs(counts[Split::kVal] - r.val * n) <= 1.0);
      CHECK(std::abs(counts[Split::kTest] - r.test * n) <= 1.0);
    }
  }
}

TEST_CASE("resplit rejects ratios that do not sum to one") {
  const Corpus c = small_corpus(3, 1);
  CHECK_THROWS_AS(resplit_by_paper(c, {0.8, 0.1, 0.2}, 0), Error);
  CHECK_THROWS_AS(resplit_by_paper(c, {1.1, -0.1, 0}, 0), Error);
  CHECK_THROWS_AS(resplit_by_paper(Corpus(), {}, 0), Error);
}

TEST_CASE("splits.json round trip") {
  TempDir dir;
  const SplitAssignment s{{"a", Split::kTrain}, {"b", Split::kTest}};
  write_splits(s, dir / "splits.json");
  CHECK(read_splits(dir / "splits.json") == s);
}

TEST_CASE("filter_better threshold is inclusive at 30") {
  auto caption = [](int tokens) {
    std::string s;
    for (int i = 0; i < tokens; ++i) s += (i ? " w" : "w");
    return s;
  };
  std::vector<Document> docs{test::make_document("p", {"x."})};
  std::vector<FigureRecord> figs{test::make_figure("f29", "p", 1, caption(29)),
                                 test::make_figure("f30", "p", 2, caption(30)),
                                 test::make_figure("f31", "p", 3, caption(31))};
  const Corpus c(docs, figs);
  const Corpus kept = filter_better(c);
  CHECK(kept.find_figure("f29") == nullptr);
  CHECK(kept.find_figure("f30") != nullptr);
  CHECK(kept.find_figure("f31") != nullptr);
  CHECK(c.figures().size() == 3);
  CHECK_THROWS_AS(filter_better(c, 0), Error);
}

TEST_CASE("fixture captions average 26.8 tokens and >= 30 is a strict minority") {
  const Corpus& c = test::fixture();
  double total = 0;
  std::size_t long_captions = 0;
  for (const auto& f : c.figures()) {
    const std::size_t n = token_length(f.caption_text);
    total += static_cast<double>(n);
    long_captions += n >= 30;
  }
  CHECK(total / static_cast<double>(c.figures().size()) == doctest::Approx(26.8));
  const Corpus better = filter_better(c);
  CHECK(better.figures().size() == long_captions);
  CHECK(2 * better.figures().size() < c.figures().size());
}

TEST_CASE("filter_better is monotone in the threshold") {
  const Corpus& c = test::fixture();
  for (int t1 = 1; t1 <= 45; t1 += 4) {
    for (int t2 = t1; t2 <= 45; t2 += 4) {
      const Corpus a = filter_better(c, t1);
      const Corpus b = filter_better(c, t2);
      for (const auto& f : b.figures()) CHECK(a.find_figure(f.figure_id) != nullptr);
    }
  }
}

}
