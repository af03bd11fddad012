#include <cctype>

#include "figcap/error.hpp"
#include "figcap/metrics.hpp"

namespace figcap {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

TokenizerConfig TokenizerConfig::scoring() {
  TokenizerConfig config;
  config.lowercase = true;
  config.stem = true;
  config.drop_punctuation = true;
  return config;
}

TokenizerConfig TokenizerConfig::content_words(std::string stopwords) {
  TokenizerConfig config = scoring();
  config.stopword_list = std::move(stopwords);
  return config;
}

TokenizerConfig TokenizerConfig::length() {
  TokenizerConfig config;
  config.lowercase = false;
  return config;
}

void TokenizerConfig::validate() const {
  if (!stopword_list.empty() && !drop_punctuation) {
    throw Error("tokenizer: stopword filtering requires drop_punctuation");
  }
  if (!stopword_list.empty()) figcap::stopword_list(stopword_list);
}

std::vector<TokenSpan> split_tokens(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t start = i;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      spans.push_back({start, i, false});
    } else {
      spans.push_back({i, i + 1, true});
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  const std::unordered_set<std::string>* stopwords = nullptr;
  if (!config.stopword_list.empty()) {
    config.validate();
    stopwords = &stopword_list(config.stopword_list);
  }
  std::vector<std::string> tokens;
  for (const TokenSpan& span : split_tokens(text)) {
    if (span.punctuation && config.drop_punctuation) continue;
    std::string token(text.substr(span.begin, span.end - span.begin));
    if (config.lowercase) {
      for (char& c : token) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    if (stopwords != nullptr && stopwords->count(token)) continue;
    if (config.stem && !span.punctuation && token.size() > 3) {
      token = porter_stem(token);
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::size_t token_length(std::string_view text) {
  return split_tokens(text).size();
}

}  // namespace figcap
