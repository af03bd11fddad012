#include <algorithm>
#include <map>
#include <vector>

#include "figcap/metrics.hpp"

namespace figcap {

ScoreTriple ScoreTriple::from(double precision, double recall) {
  ScoreTriple s{precision, recall, 0};
  if (precision + recall > 0) {
    s.f1 = 2 * precision * recall / (precision + recall);
  }
  return s;
}

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> count_ngrams(std::span<const std::string> tokens,
                                          std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

ScoreTriple rouge_n(std::span<const std::string> candidate,
                    std::span<const std::string> reference, std::size_t n) {
  auto cand = count_ngrams(candidate, n);
  auto ref = count_ngrams(reference, n);
  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [gram, count] : cand) cand_total += count;
  for (const auto& [gram, count] : ref) {
    ref_total += count;
    if (auto it = cand.find(gram); it != cand.end()) {
      overlap += std::min(count, it->second);
    }
  }
  if (cand_total == 0 || ref_total == 0) return {};
  return ScoreTriple::from(static_cast<double>(overlap) / cand_total,
                           static_cast<double>(overlap) / ref_total);
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

ScoreTriple rouge(std::span<const std::string> candidate,
                  std::span<const std::string> reference,
                  RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kRouge1:
      return rouge_n(candidate, reference, 1);
    case RougeVariant::kRouge2:
      return rouge_n(candidate, reference, 2);
    case RougeVariant::kRougeL: {
      if (candidate.empty() || reference.empty()) return {};
      const double lcs = static_cast<double>(lcs_length(candidate, reference));
      return ScoreTriple::from(lcs / candidate.size(), lcs / reference.size());
    }
  }
  return {};
}

}  // namespace figcap
