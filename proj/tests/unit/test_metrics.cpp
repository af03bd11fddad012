#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "figcap/metrics_corpus.hpp"
#include "unit/helpers.hpp"

using namespace figcap;
using figcap::test::TempDir;
using Tokens = std::vector<std::string>;

namespace {

Tokens words(std::string_view s) { return tokenize(s, TokenizerConfig::scoring()); }

// Reference n-gram overlap: counts via sorted n-gram lists.
std::size_t oracle_overlap(const Tokens& a, const Tokens& b, std::size_t n) {
  auto grams = [n](const Tokens& t) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      std::string g;
      for (std::size_t k = 0; k < n; ++k) g += t[i + k] + '\x1f';
      out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::string> common;
  const auto ga = grams(a), gb = grams(b);
  std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(),
                        std::back_inserter(common));
  return common.size();
}

// Reference LCS by memoized recursion.
std::size_t oracle_lcs(const Tokens& a, const Tokens& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == a.size() || j == b.size()) return std::size_t{0};
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    std::size_t v = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    return memo[{i, j}] = v;
  };
  return go(0, 0);
}

double f1(double overlap, double cand, double ref) {
  if (cand == 0 || ref == 0 || overlap == 0) return 0;
  const double p = overlap / cand, r = overlap / ref;
  return 2 * p * r / (p + r);
}

// Maximum bipartite matching of equal tokens by augmenting paths.
std::size_t oracle_matching(const Tokens& a, const Tokens& b) {
  std::vector<int> owner(b.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t i, std::vector<bool>& visited) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (a[i] != b[j] || visited[j]) continue;
          visited[j] = true;
          if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), visited)) {
            owner[j] = static_cast<int>(i);
            return true;
          }
        }
        return false;
      };
  std::size_t matched = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> visited(b.size(), false);
    matched += augment(i, visited);
  }
  return matched;
}

Tokens random_tokens(std::mt19937& gen, std::size_t max_len, int vocab) {
  Tokens t(gen() % (max_len + 1));
  for (auto& w : t) w = "w" + std::to_string(gen() % vocab);
  return t;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("tokenizer examples") {
  TokenizerConfig stem = TokenizerConfig::scoring();
  CHECK(tokenize("Running cats", stem) == Tokens{"run", "cat"});
  CHECK(tokenize("ABC", TokenizerConfig{}) == Tokens{"abc"});
  CHECK(tokenize("", stem).empty());
  CHECK(tokenize("Fig. 3(b), x-y!", TokenizerConfig::length()) ==
        Tokens{"Fig", ".", "3", "(", "b", ")", ",", "x", "-", "y", "!"});
  CHECK(tokenize("Fig. 3(b), x-y!", stem) == Tokens{"fig", "3", "b", "x", "y"});
  CHECK(token_length("Fig. 3(b), x-y!") == 11);
  CHECK(tokenize("caf\xC3\xA9 au lait", TokenizerConfig{}) ==
        Tokens{"caf\xC3\xA9", "au", "lait"});
  // Tokens of three characters or fewer are not stemmed.
  CHECK(tokenize("was has sees", stem) == Tokens{"was", "has", "see"});
}

TEST_CASE("content words drop stopwords before stemming") {
  const auto cw = TokenizerConfig::content_words();
  CHECK(tokenize("We observe that accuracy increases as depth grows", cw) ==
        Tokens{"observ", "accuraci", "increas", "depth", "grow"});
}

TEST_CASE("tokenizer config validation") {
  TokenizerConfig c;
  c.stopword_list = "en-v1";
  CHECK_THROWS(c.validate());  // stopwords need punctuation dropping
  c.drop_punctuation = true;
  CHECK_NOTHROW(c.validate());
  c.stopword_list = "no-such-list";
  CHECK_THROWS(c.validate());
}

TEST_CASE("tokenize of joined lowercase tokens is idempotent") {
  std::mt19937 gen(11);
  for (int i = 0; i < 200; ++i) {
    const Tokens t = random_tokens(gen, 12, 30);
    std::string joined;
    for (const auto& w : t) joined += w + " ";
    const auto once = tokenize(joined, TokenizerConfig{});
    std::string again;
    for (const auto& w : once) again += w + " ";
    CHECK(tokenize(again, TokenizerConfig{}) == once);
  }
}

TEST_CASE("stopword list en-v1") {
  const auto& sw = stopword_list("en-v1");
  CHECK(sw.size() == 153);
  for (const char* w : {"the", "with", "we", "that", "as", "a", "of", "and"}) {
    CHECK(sw.count(w) == 1);
  }
  CHECK(sw.count("accuracy") == 0);
  TempDir dir;
  {
    std::ofstream out(dir / "mine.txt");
    out << "foo\nbar\n";
  }
  CHECK(stopword_list((dir / "mine.txt").string()).size() == 2);
}

TEST_CASE("Porter stems match the reference implementation") {
  std::ifstream in(std::string(FIGCAP_TEST_DATA) + "/porter_reference.tsv");
  REQUIRE(in);
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string word = line.substr(0, tab);
    // Words of one or two letters are returned unchanged, as in the
    // reference C implementation; the tokenizer never stems them anyway.
    if (word.size() <= 2) continue;
    CHECK_MESSAGE(porter_stem(word) == line.substr(tab + 1), word);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("ROUGE hand examples") {
  auto r1 = rouge(words("the cat sat"), words("the cat sat on the mat"), RougeVariant::kRouge1);
  CHECK(r1.precision == doctest::Approx(1.0));
  CHECK(r1.recall == doctest::Approx(0.5));
  CHECK(r1.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  auto r2 = rouge(words("a b c d"), words("a b c"), RougeVariant::kRouge2);
  CHECK(r2.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r2.recall == doctest::Approx(1.0));
  CHECK(r2.f1 == doctest::Approx(0.8));
  CHECK(rouge(words("same text here"), words("same text here"), RougeVariant::kRougeL).f1 ==
        doctest::Approx(1.0));
  CHECK(rouge({}, words("x"), RougeVariant::kRouge1).f1 == 0);
  CHECK(rouge(words("x"), {}, RougeVariant::kRougeL).f1 == 0);
}

TEST_CASE("ROUGE agrees with reference counting on random inputs") {
  std::mt19937 gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const Tokens a = random_tokens(gen, 10, 5), b = random_tokens(gen, 10, 5);
    for (std::size_t n : {1, 2}) {
      const auto got = rouge(a, b, n == 1 ? RougeVariant::kRouge1 : RougeVariant::kRouge2);
      const double ca = a.size() >= n ? a.size() - n + 1 : 0;
      const double cb = b.size() >= n ? b.size() - n + 1 : 0;
      CHECK(got.f1 == doctest::Approx(f1(oracle_overlap(a, b, n), ca, cb)));
    }
    const auto l = rouge(a, b, RougeVariant::kRougeL);
    CHECK(l.f1 == doctest::Approx(f1(oracle_lcs(a, b), a.size(), b.size())));
  }
}

TEST_CASE("ROUGE symmetry and F1 bounds") {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Tokens a = random_tokens(gen, 8, 4), b = random_tokens(gen, 8, 4);
    for (auto v : {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL}) {
      const auto ab = rouge(a, b, v), ba = rouge(b, a, v);
      CHECK(ab.precision == doctest::Approx(ba.recall));
      CHECK(ab.recall == doctest::Approx(ba.precision));
      CHECK(ab.f1 == doctest::Approx(ba.f1));
      for (double x : {ab.precision, ab.recall, ab.f1}) {
        CHECK(x >= 0);
        CHECK(x <= 1);
      }
      if (ab.precision > 0 && ab.recall > 0) {
        CHECK(ab.f1 <= std::max(ab.precision, ab.recall) + 1e-12);
        CHECK(ab.f1 >= std::min(ab.precision, ab.recall) - 1e-12);
      }
    }
  }
  CHECK(ScoreTriple::from(0, 0).f1 == 0);
  CHECK(std::abs(ScoreTriple::from(0.3, 0.6).f1 - 0.4) < 1e-12);
}

TEST_CASE("BLEU-4 hand computations") {
  const auto tok = [](std::string_view s) { return tokenize(s, bleu_tokenizer()); };
  std::vector<TokenPair> same{{tok("a b c d e"), tok("a b c d e")}};
  CHECK(bleu4_corpus(same) == doctest::Approx(1.0));
  std::vector<TokenPair> none{{tok("a b c d"), tok("e f g h")}};
  CHECK(bleu4_corpus(none) == 0.0);
  // Matches: 5/6 unigrams, 3/5 bigrams, 2/4 trigrams, 1/3 four-grams.
  std::vector<TokenPair> one{{tok("the cat sat on the mat"), tok("the cat sat on a mat")}};
  CHECK(bleu4_corpus(one) ==
        doctest::Approx(std::pow(5.0 / 6 * 3.0 / 5 * 2.0 / 4 * 1.0 / 3, 0.25)));
  // Short candidate: precisions 1, brevity penalty exp(1 - 8/4).
  std::vector<TokenPair> brief{{tok("a b c d"), tok("a b c d e f g h")}};
  CHECK(bleu4_corpus(brief) == doctest::Approx(std::exp(1.0 - 2.0)));
  // Pooled counts: the second pair has no 4-gram, the corpus score is still positive.
  std::vector<TokenPair> pooled{{tok("a b c d"), tok("a b c d")}, {tok("x y"), tok("x y")}};
  CHECK(bleu4_corpus(pooled) == doctest::Approx(1.0));
}

TEST_CASE("BLEU-4 is invariant under pair permutation") {
  std::mt19937 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenPair> pairs;
    for (int i = 0; i < 6; ++i) {
      pairs.push_back({random_tokens(gen, 12, 3), random_tokens(gen, 12, 3)});
    }
    const double base = bleu4_corpus(pairs);
    std::shuffle(pairs.begin(), pairs.end(), gen);
    CHECK(bleu4_corpus(pairs) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("coverage examples") {
  const auto c = coverage_pair("accuracy increases with depth",
                               "we observe that accuracy increases as depth grows");
  CHECK(c.caption_coverage == doctest::Approx(1.0));
  CHECK(c.source_coverage == doctest::Approx(0.6));
  const auto same = coverage_pair("deep nets learn features", "deep nets learn features");
  CHECK(same.caption_coverage == 1.0);
  CHECK(same.source_coverage == 1.0);
  const auto none = coverage_pair("apples oranges", "trains planes");
  CHECK(none.caption_coverage == 0.0);
  CHECK(none.source_coverage == 0.0);
}

TEST_CASE("greedy matcher takes the first free equal source token") {
  const Tokens cap{"a", "b", "a"}, src{"a", "c", "a", "a"};
  const StemMatch m = match_tokens(cap, src);
  CHECK(m.matched == 2);
  CHECK(m.caption_matched == std::vector<bool>{true, false, true});
  CHECK(m.source_matched == std::vector<bool>{true, false, true, false});
}

TEST_CASE("greedy matcher equals an exhaustive bipartite matching") {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Tokens a = random_tokens(gen, 12, 4), b = random_tokens(gen, 12, 4);
    CHECK(match_tokens(a, b).matched == oracle_matching(a, b));
  }
}

TEST_CASE("alignment ingest") {
  TempDir dir;
  auto write = [&](const std::string& body) {
    std::ofstream(dir / "a.jsonl") << body;
  };
  write(R"({"pair_id":"f1::Mention","caption_tokens":["a","b"],"source_tokens":["x","y","a","b"],"links":[[0,2],[1,3]]})"
        "\n");
  const AlignmentSet set = import_alignments(dir / "a.jsonl");
  REQUIRE(set.size() == 1);
  const auto c = coverage_pair(set.at("f1::Mention"));
  CHECK(c.caption_coverage == 1.0);
  CHECK(c.source_coverage == 0.5);

  write(R"({"pair_id":"p","caption_tokens":["a"],"source_tokens":["b"],"links":[]})" "\n");
  const auto empty = coverage_pair(import_alignments(dir / "a.jsonl").at("p"));
  CHECK(empty.caption_coverage == 0.0);
  CHECK(empty.source_coverage == 0.0);

  write(R"({"pair_id":"bad-pair","caption_tokens":["a"],"source_tokens":["b"],"links":[[1,0]]})" "\n");
  CHECK_THROWS_WITH_AS(import_alignments(dir / "a.jsonl"), doctest::Contains("bad-pair"), Error);

  write(R"({"pair_id":"p","caption_tokens":["a"],"source_tokens":["b"],"links":[]})" "\n");
  const std::set<std::string> known{"q"};
  CHECK_THROWS_AS(import_alignments(dir / "a.jsonl", &known), Error);
}

TEST_CASE("macro coverage averages per figure") {
  Document doc = test::make_document("P", {"Figure 1 shows accuracy.", "Figure 2 shows depth."});
  const Corpus c({doc}, {test::make_figure("f1", "P", 1, "accuracy"),
                         test::make_figure("f2", "P", 2, "depth width")});
  const MentionIndex idx = build_mention_index(c);
  const CoverageRow row = macro_coverage(c, idx, SourceKind::parse("Mention"));
  CHECK(row.figures == 2);
  CHECK(row.caption_percent == doctest::Approx(75.0));

  AlignmentSet links;
  links["f1::Mention"] = {{"x"}, {"y"}, {{0, 0}}};
  links["f2::Mention"] = {{"x", "z"}, {"y"}, {}};
  const CoverageRow ext = macro_coverage(c, idx, SourceKind::parse("Mention"), &links);
  CHECK(ext.caption_percent == doctest::Approx(50.0));
  links.erase("f2::Mention");
  CHECK_THROWS_AS(macro_coverage(c, idx, SourceKind::parse("Mention"), &links), Error);
}

TEST_CASE("mention/caption overlap") {
  std::vector<Document> docs;
  std::vector<FigureRecord> figs;
  for (int i = 0; i < 5; ++i) {
    const std::string id = "P" + std::to_string(i);
    const std::string mention = "Figure 1 plots the error of model " + std::to_string(i) +
                                " against the number of layers.";
    docs.push_back(test::make_document(id, {"Intro text. " + mention + " More text."}));
    figs.push_back(test::make_figure(id + "-1", id, 1, mention));
  }
  const Corpus c(docs, figs);
  const MentionIndex idx = build_mention_index(c);
  CHECK(mention_caption_overlap(c, idx, MentionMode::kFirst, 0, CaptionMode::kWhole, 0) ==
        doctest::Approx(1.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(mention_caption_overlap(c, idx, MentionMode::kRandom, 0, CaptionMode::kWhole, seed) ==
          mention_caption_overlap(c, idx, MentionMode::kFirst, 0, CaptionMode::kWhole, 0));
  }
  CHECK(mention_caption_overlap(c, idx, MentionMode::kFirst, 1, CaptionMode::kWhole, 0) < 1.0);
}

}
