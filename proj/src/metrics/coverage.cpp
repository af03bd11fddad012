#include <set>
#include <unordered_map>

#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"

namespace figcap {

namespace {

double fraction(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / whole;
}

void check_links(const std::string& pair_id, const TokenAlignment& a) {
  for (const auto& [ci, si] : a.links) {
    if (ci >= a.caption_tokens.size()) {
      throw Error("alignment '" + pair_id + "': caption index " +
                  std::to_string(ci) + " out of range (" +
                  std::to_string(a.caption_tokens.size()) + " tokens)");
    }
    if (si >= a.source_tokens.size()) {
      throw Error("alignment '" + pair_id + "': source index " +
                  std::to_string(si) + " out of range (" +
                  std::to_string(a.source_tokens.size()) + " tokens)");
    }
  }
}

}  // namespace

StemMatch match_tokens(std::span<const std::string> caption,
                       std::span<const std::string> source) {
  StemMatch result;
  result.caption_matched.assign(caption.size(), false);
  result.source_matched.assign(source.size(), false);
  // Unmatched source positions per token, ascending.
  std::unordered_map<std::string, std::vector<std::size_t>> free_positions;
  for (std::size_t j = source.size(); j-- > 0;) {
    free_positions[source[j]].push_back(j);
  }
  for (std::size_t i = 0; i < caption.size(); ++i) {
    auto it = free_positions.find(caption[i]);
    if (it == free_positions.end() || it->second.empty()) continue;
    std::size_t j = it->second.back();
    it->second.pop_back();
    result.caption_matched[i] = true;
    result.source_matched[j] = true;
    ++result.matched;
  }
  return result;
}

CoveragePair coverage_pair(std::string_view caption_text,
                           std::string_view source_text,
                           const TokenizerConfig& content) {
  const auto caption = tokenize(caption_text, content);
  const auto source = tokenize(source_text, content);
  const StemMatch match = match_tokens(caption, source);
  return {fraction(match.matched, caption.size()),
          fraction(match.matched, source.size())};
}

CoveragePair coverage_pair(const TokenAlignment& alignment) {
  check_links("<inline>", alignment);
  std::set<std::size_t> caption_hit, source_hit;
  for (const auto& [ci, si] : alignment.links) {
    caption_hit.insert(ci);
    source_hit.insert(si);
  }
  return {fraction(caption_hit.size(), alignment.caption_tokens.size()),
          fraction(source_hit.size(), alignment.source_tokens.size())};
}

AlignmentSet import_alignments(const std::filesystem::path& path,
                               const std::set<std::string>* known_pairs) {
  AlignmentSet set;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    std::string pair_id = require_string(rec, "pair_id");
    if (known_pairs != nullptr && !known_pairs->count(pair_id)) {
      throw Error("unknown pair_id '" + pair_id + "'");
    }
    TokenAlignment a;
    a.caption_tokens = rec.at("caption_tokens").get<std::vector<std::string>>();
    a.source_tokens = rec.at("source_tokens").get<std::vector<std::string>>();
    for (const Json& link : rec.at("links")) {
      if (!link.is_array() || link.size() != 2) {
        throw Error("alignment '" + pair_id + "': links must be [ci, si]");
      }
      a.links.emplace_back(link[0].get<std::size_t>(),
                           link[1].get<std::size_t>());
    }
    check_links(pair_id, a);
    if (!set.emplace(pair_id, std::move(a)).second) {
      throw Error("duplicate pair_id '" + pair_id + "'");
    }
  });
  return set;
}

}  // namespace figcap
