#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "figcap/metrics.hpp"

namespace figcap {

TokenizerConfig bleu_tokenizer() {
  TokenizerConfig config;
  config.lowercase = true;
  return config;
}

double bleu4_corpus(std::span<const TokenPair> pairs) {
  constexpr std::size_t kOrder = 4;
  std::array<std::size_t, kOrder> matches{};
  std::array<std::size_t, kOrder> totals{};
  std::size_t cand_len = 0, ref_len = 0;

  for (const TokenPair& pair : pairs) {
    cand_len += pair.candidate.size();
    ref_len += pair.reference.size();
    for (std::size_t n = 1; n <= kOrder; ++n) {
      std::map<std::vector<std::string>, std::size_t> ref_counts;
      for (std::size_t i = 0; i + n <= pair.reference.size(); ++i) {
        ++ref_counts[{pair.reference.begin() + i, pair.reference.begin() + i + n}];
      }
      std::map<std::vector<std::string>, std::size_t> cand_counts;
      for (std::size_t i = 0; i + n <= pair.candidate.size(); ++i) {
        ++cand_counts[{pair.candidate.begin() + i, pair.candidate.begin() + i + n}];
      }
      for (const auto& [gram, count] : cand_counts) {
        totals[n - 1] += count;
        if (auto it = ref_counts.find(gram); it != ref_counts.end()) {
          matches[n - 1] += std::min(count, it->second);
        }
      }
    }
  }

  if (cand_len == 0) return 0;
  double log_precision = 0;
  for (std::size_t n = 0; n < kOrder; ++n) {
    if (matches[n] == 0 || totals[n] == 0) return 0;
    log_precision += std::log(static_cast<double>(matches[n]) / totals[n]);
  }
  log_precision /= kOrder;
  double brevity = 0;
  if (cand_len < ref_len) {
    brevity = 1.0 - static_cast<double>(ref_len) / cand_len;
  }
  return std::exp(log_precision + brevity);
}

}  // namespace figcap
