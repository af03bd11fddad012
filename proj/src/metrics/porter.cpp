// Porter (1980) suffix-stripping stemmer, original rule set.

#include <cctype>
#include <string>
#include <utility>

#include "figcap/metrics.hpp"

namespace figcap {

namespace {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : w_(std::move(word)) {}

  std::string run() {
    if (w_.size() <= 2) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return w_;
  }

 private:
  bool consonant(std::size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in w_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && consonant(len - 1);
  }

  // consonant-vowel-consonant ending, last consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) {
      return false;
    }
    char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return w_.size() - suffix.size();
  }

  void replace(std::string_view suffix, std::string_view with) {
    w_.resize(stem_len(suffix));
    w_ += with;
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // First rule whose suffix matches decides; it fires only when the stem
  // measure exceeds `min_measure`.
  template <std::size_t N>
  void apply_rules(const Rule (&rules)[N], int min_measure) {
    for (const Rule& rule : rules) {
      if (!ends_with(rule.suffix)) continue;
      if (measure(stem_len(rule.suffix)) > min_measure) {
        replace(rule.suffix, rule.replacement);
      }
      return;
    }
  }

  void step1a() {
    if (ends_with("sses")) replace("sses", "ss");
    else if (ends_with("ies")) replace("ies", "i");
    else if (ends_with("ss")) return;
    else if (ends_with("s")) replace("s", "");
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) replace("eed", "ee");
      return;
    }
    std::string_view removed;
    if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      removed = "ed";
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      removed = "ing";
    } else {
      return;
    }
    replace(removed, "");
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_ += 'e';
    } else if (double_consonant(w_.size())) {
      char last = w_.back();
      if (last != 'l' && last != 's' && last != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_ += 'e';
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_len("y"))) replace("y", "i");
  }

  void step2() {
    static const Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"}};
    apply_rules(rules, 0);
  }

  void step3() {
    static const Rule rules[] = {{"icate", "ic"}, {"ative", ""},
                                 {"alize", "al"}, {"iciti", "ic"},
                                 {"ical", "ic"},  {"ful", ""},
                                 {"ness", ""}};
    apply_rules(rules, 0);
  }

  void step4() {
    static const std::string_view suffixes[] = {
        "al",   "ance", "ence", "er",  "ic",  "able", "ible",
        "ant",  "ement", "ment", "ent", "ion", "ou",   "ism",
        "ate",  "iti",  "ous",  "ive", "ize"};
    for (std::string_view suffix : suffixes) {
      if (!ends_with(suffix)) continue;
      std::size_t len = stem_len(suffix);
      bool ok = measure(len) > 1;
      if (ok && suffix == "ion") {
        ok = len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't');
      }
      if (ok) w_.resize(len);
      return;
    }
  }

  void step5() {
    if (ends_with("e")) {
      std::size_t len = stem_len("e");
      int m = measure(len);
      if (m > 1 || (m == 1 && !cvc(len))) w_.pop_back();
    }
    if (measure(w_.size()) > 1 && double_consonant(w_.size()) &&
        w_.back() == 'l') {
      w_.pop_back();
    }
  }

  std::string w_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string lower(word);
  for (char& c : lower) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return PorterStemmer(std::move(lower)).run();
}

}  // namespace figcap
