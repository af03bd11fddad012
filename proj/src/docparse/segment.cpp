#include <algorithm>
#include <cctype>
#include <string>

#include "figcap/docparse.hpp"

namespace figcap {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool iequals_suffix(std::string_view text, std::string_view suffix) {
  if (suffix.size() > text.size()) return false;
  text.remove_prefix(text.size() - suffix.size());
  return std::equal(text.begin(), text.end(), suffix.begin(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  });
}

// True when `text` (everything up to and including a '.') ends with one of
// the abbreviations as a whole word.
bool ends_with_abbreviation(std::string_view text,
                            const std::vector<std::string>& abbreviations) {
  for (const std::string& abbr : abbreviations) {
    if (!iequals_suffix(text, abbr)) continue;
    if (text.size() == abbr.size()) return true;
    char before = text[text.size() - abbr.size() - 1];
    if (!std::isalnum(static_cast<unsigned char>(before))) return true;
  }
  return false;
}

}  // namespace

SegmenterConfig SegmenterConfig::defaults() {
  SegmenterConfig config;
  config.abbreviations = {
      "Fig.",  "Figs.", "Eq.",   "Eqs.",  "Sec.",   "Sect.", "Tab.",
      "Ref.",  "Refs.", "No.",   "Nos.",  "vs.",    "et al.", "e.g.",
      "i.e.",  "cf.",   "Dr.",   "Mr.",   "Mrs.",   "Ms.",   "Prof.",
      "approx.", "resp.", "Ch.", "Alg.",  "Thm.",   "Def.",  "Prop.",
      "Lem.",  "Eqn.",  "Eqns.", "Appx.", "Suppl.", "Vol.",  "pp.",
      "St.",   "Inc.",  "Ltd.",  "Co.",   "Jr.",    "Sr."};
  return config;
}

void SegmenterConfig::validate() const {
  if (abbreviations.empty()) throw Error("segmenter: abbreviation list is empty");
  for (char c : std::string_view(".!?")) {
    if (terminators.find(c) == std::string::npos) {
      throw Error(std::string("segmenter: terminators must include '") + c +
                  "'");
    }
  }
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::vector<Sentence> segment_sentences(std::string_view text,
                                        const SegmenterConfig& config) {
  std::vector<Sentence> sentences;
  const std::size_t n = text.size();
  auto skip_space = [&](std::size_t i) {
    while (i < n && is_space(text[i])) ++i;
    return i;
  };
  auto is_terminator = [&](char c) {
    return config.terminators.find(c) != std::string::npos;
  };
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (end > begin && is_space(text[end - 1])) --end;
    if (end <= begin) return;
    Sentence s;
    s.index = sentences.size();
    s.begin = begin;
    s.end = end;
    s.text = std::string(text.substr(begin, end - begin));
    sentences.push_back(std::move(s));
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    // Decimal point: digit on both sides.
    if (text[i] == '.' && i > 0 && i + 1 < n && is_digit(text[i - 1]) &&
        is_digit(text[i + 1])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && is_terminator(text[j])) ++j;
    const bool single_period = text[i] == '.' && j == i + 1;
    while (j < n && is_closer(text[j])) ++j;
    if (j >= n) break;
    if (!is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t next = skip_space(j);
    if (next >= n) break;
    bool boundary = true;
    if (single_period &&
        ends_with_abbreviation(text.substr(start, i + 1 - start),
                               config.abbreviations)) {
      boundary = false;
    }
    if (std::islower(static_cast<unsigned char>(text[next]))) boundary = false;
    if (boundary) {
      emit(start, j);
      start = next;
    }
    i = next;
  }
  emit(start, n);
  return sentences;
}

}  // namespace figcap
