#include <cctype>
#include <string_view>

#include "figcap/mentions.hpp"

namespace figcap {

namespace {

constexpr int kMaxRangeSpan = 20;

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool iequal_at(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[pos + k])) != word[k]) {
      return false;
    }
  }
  return true;
}

class RefScanner {
 public:
  explicit RefScanner(std::string_view s) : s_(s) {}

  std::vector<FigureRef> scan() {
    std::vector<FigureRef> refs;
    std::size_t i = 0;
    while (i + 3 <= s_.size()) {
      if (iequal_at(s_, i, "fig") && (i == 0 || !is_alnum(s_[i - 1]))) {
        std::size_t end = try_match(i, refs);
        if (end > i) {
          i = end;
          continue;
        }
      }
      ++i;
    }
    return refs;
  }

 private:
  // Spaces, tabs, '~' and U+00A0.
  std::size_t skip_gap(std::size_t j) const {
    while (j < s_.size()) {
      if (s_[j] == ' ' || s_[j] == '\t' || s_[j] == '~') {
        ++j;
      } else if (s_.substr(j, 2) == "\xC2\xA0") {
        j += 2;
      } else {
        break;
      }
    }
    return j;
  }

  // Parses "N", "Na", "N(a)", "N(a-c)" at j. Returns false for "3.2",
  // "3rd" and anything not starting with a digit.
  bool parse_number(std::size_t& j, int& label) const {
    std::size_t k = j;
    if (k >= s_.size() || !is_digit(s_[k])) return false;
    long value = 0;
    while (k < s_.size() && is_digit(s_[k])) {
      value = value * 10 + (s_[k] - '0');
      if (value > 100000) return false;
      ++k;
    }
    if (k + 1 < s_.size() && s_[k] == '.' && is_digit(s_[k + 1])) return false;
    if (k < s_.size() && is_alpha(s_[k])) {
      if (k + 1 < s_.size() && is_alnum(s_[k + 1])) return false;
      ++k;  // subfigure letter
    }
    if (k < s_.size() && s_[k] == '(') {
      std::size_t close = s_.find(')', k);
      if (close != std::string_view::npos && close - k <= 10) {
        bool subfigure = close > k + 1;
        for (std::size_t t = k + 1; t < close; ++t) {
          char c = s_[t];
          if (!(is_alpha(c) || c == ',' || c == '-' || c == ' ')) {
            subfigure = false;
          }
        }
        if (subfigure) k = close + 1;
      }
    }
    label = static_cast<int>(value);
    j = k;
    return true;
  }

  // Separator between list items: ",", "and", "&", "-", en dash.
  // Returns the position after it, or npos; sets `range` for dashes.
  std::size_t parse_separator(std::size_t j, bool plural, bool& range) const {
    std::size_t k = skip_gap(j);
    range = false;
    if (k < s_.size() && s_[k] == ',' && plural) {
      k = skip_gap(k + 1);
      if (iequal_at(s_, k, "and") && k + 3 < s_.size() && !is_alnum(s_[k + 3])) {
        k += 3;
      }
      return skip_gap(k);
    }
    if (iequal_at(s_, k, "and") && k + 3 < s_.size() && !is_alnum(s_[k + 3])) {
      return skip_gap(k + 3);
    }
    if (k < s_.size() && s_[k] == '&') return skip_gap(k + 1);
    if (k < s_.size() && s_[k] == '-') {
      range = true;
      return skip_gap(k + 1);
    }
    if (s_.substr(k, 3) == "\xE2\x80\x93") {
      range = true;
      return skip_gap(k + 3);
    }
    return std::string_view::npos;
  }

  std::size_t try_match(std::size_t start, std::vector<FigureRef>& refs) const {
    std::size_t j = start + 3;
    bool abbreviated = true;
    if (iequal_at(s_, j, "ure")) {
      j += 3;
      abbreviated = false;
    }
    bool plural = false;
    if (j < s_.size() && (s_[j] == 's' || s_[j] == 'S')) {
      ++j;
      plural = true;
    }
    if (j < s_.size() && s_[j] == '.') ++j;
    if (j < s_.size() && is_alpha(s_[j])) return start;  // "fight", "figured"

    std::size_t k = skip_gap(j);
    int label = 0;
    if (!parse_number(k, label)) return start;

    std::vector<int> labels{label};
    std::size_t end = k;
    bool saw_range = false;
    while (true) {
      bool range = false;
      std::size_t next = parse_separator(end, plural, range);
      if (next == std::string_view::npos) break;
      std::size_t probe = next;
      int value = 0;
      if (!parse_number(probe, value)) break;
      if (range) {
        int from = labels.back();
        if (value <= from || value - from > kMaxRangeSpan) break;
        for (int v = from + 1; v <= value; ++v) labels.push_back(v);
        saw_range = true;
      } else {
        labels.push_back(value);
      }
      end = probe;
    }

    std::string pattern = abbreviated ? "fig_abbrev" : "figure";
    if (saw_range) {
      pattern += "_range";
    } else if (labels.size() > 1) {
      pattern += "_list";
    }
    for (int value : labels) {
      if (value >= 1) refs.push_back({value, start, end, pattern});
    }
    return end;
  }

  std::string_view s_;
};

}  // namespace

std::vector<FigureRef> detect_figure_refs(std::string_view sentence) {
  return RefScanner(sentence).scan();
}

}  // namespace figcap
