#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace figcap {

inline constexpr std::string_view kDefaultStopwords = "en-v1";

struct TokenizerConfig {
  bool lowercase = true;
  bool stem = false;  // Porter, applied to tokens longer than 3 characters
  bool drop_punctuation = false;
  std::string stopword_list;  // list id or path; empty disables filtering

  // lowercase + stem + no punctuation: the ROUGE configuration.
  static TokenizerConfig scoring();
  // scoring() + stopword removal: the coverage / missing-information view.
  static TokenizerConfig content_words(
      std::string stopwords = std::string(kDefaultStopwords));
  // Raw word and punctuation tokens; used for every reported length.
  static TokenizerConfig length();

  void validate() const;
};

// Byte range of one raw token. Words are maximal runs of ASCII letters,
// digits and non-ASCII bytes; every other non-space byte is a one-character
// punctuation token.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool punctuation = false;
};

std::vector<TokenSpan> split_tokens(std::string_view text);
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config);
std::size_t token_length(std::string_view text);

std::string porter_stem(std::string_view word);

// Built-in ids ("en-v1") or a path to a one-word-per-line file.
const std::unordered_set<std::string>& stopword_list(std::string_view id);

struct ScoreTriple {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  static ScoreTriple from(double precision, double recall);
};

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

ScoreTriple rouge(std::span<const std::string> candidate,
                  std::span<const std::string> reference,
                  RougeVariant variant);

struct TokenPair {
  std::vector<std::string> candidate;
  std::vector<std::string> reference;
};

// Corpus BLEU-4: clipped n-gram counts are pooled over all pairs, uniform
// weights, no smoothing, brevity penalty on pooled lengths.
double bleu4_corpus(std::span<const TokenPair> pairs);

// Tokenization used for BLEU: lowercase, punctuation kept, no stemming.
TokenizerConfig bleu_tokenizer();

struct CoveragePair {
  double caption_coverage = 0;
  double source_coverage = 0;
};

struct StemMatch {
  std::vector<bool> caption_matched;
  std::vector<bool> source_matched;
  std::size_t matched = 0;
};

// Greedy positional matching of equal tokens: each caption token, in order,
// takes the first unmatched equal source token.
StemMatch match_tokens(std::span<const std::string> caption,
                       std::span<const std::string> source);

// One externally computed word alignment (e.g. a neural aligner's output).
struct TokenAlignment {
  std::vector<std::string> caption_tokens;
  std::vector<std::string> source_tokens;
  std::vector<std::pair<std::size_t, std::size_t>> links;  // (caption, source)
};

using AlignmentSet = std::map<std::string, TokenAlignment>;  // pair_id ->

CoveragePair coverage_pair(std::string_view caption_text,
                           std::string_view source_text,
                           const TokenizerConfig& content =
                               TokenizerConfig::content_words());
CoveragePair coverage_pair(const TokenAlignment& alignment);

// Reads alignments.jsonl. When `known_pairs` is non-null every pair_id must
// be in it.
AlignmentSet import_alignments(const std::filesystem::path& path,
                               const std::set<std::string>* known_pairs =
                                   nullptr);

}  // namespace figcap
