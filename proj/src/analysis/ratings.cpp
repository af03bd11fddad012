#include <map>

#include "figcap/analysis.hpp"
#include "figcap/error.hpp"

namespace figcap {

Consolidated consolidate(int rating_value) {
  if (rating_value < 1 || rating_value > 5) {
    throw Error("Likert value out of range 1..5: " +
                std::to_string(rating_value));
  }
  return rating_value >= 4 ? Consolidated::kAgree : Consolidated::kDisagree;
}

std::string_view aspect_name(Aspect aspect) {
  switch (aspect) {
    case Aspect::kImageText: return "image_text";
    case Aspect::kVisualDesc: return "visual_desc";
    case Aspect::kTakeaway: return "takeaway";
    case Aspect::kHelpfulness: return "helpfulness";
  }
  return "?";
}

int AspectRating::value(Aspect aspect) const {
  switch (aspect) {
    case Aspect::kImageText: return image_text;
    case Aspect::kVisualDesc: return visual_desc;
    case Aspect::kTakeaway: return takeaway;
    case Aspect::kHelpfulness: return helpfulness;
  }
  return 0;
}

void AspectRating::validate() const {
  if (figure_id.empty()) throw Error("rating without figure_id");
  if (!valid) {
    if (exclusion_reason.empty()) {
      throw Error("excluded rating of '" + figure_id + "' needs a reason");
    }
    for (Aspect a : kAspects) {
      int v = value(a);
      if (v != 0 && (v < 1 || v > 5)) {
        throw Error(std::string(aspect_name(a)) + " out of range 1..5: " +
                    std::to_string(v));
      }
    }
    return;
  }
  for (Aspect a : kAspects) {
    int v = value(a);
    if (v < 1 || v > 5) {
      throw Error(std::string(aspect_name(a)) + " out of range 1..5: " +
                  std::to_string(v));
    }
  }
}

double ConsolidationRow::agree_percent() const {
  return total() == 0 ? 0.0 : 100.0 * static_cast<double>(agree) / total();
}

std::vector<ConsolidationRow> consolidation_table(
    std::span<const AspectRating> ratings) {
  std::vector<ConsolidationRow> rows;
  for (Aspect a : kAspects) rows.push_back({a, 0, 0});
  for (const AspectRating& r : ratings) {
    if (!r.valid) continue;
    for (std::size_t i = 0; i < kAspects.size(); ++i) {
      if (consolidate(r.value(kAspects[i])) == Consolidated::kAgree) {
        ++rows[i].agree;
      } else {
        ++rows[i].disagree;
      }
    }
  }
  return rows;
}

// A figure rated by several annotators is helpful when strictly more of its
// valid ratings agree than disagree.
std::vector<QualityBeam> quality_beams(std::span<const AspectRating> ratings) {
  std::map<std::string, int> balance;
  for (const AspectRating& r : ratings) {
    if (!r.valid) continue;
    balance[r.figure_id] +=
        consolidate(r.helpfulness) == Consolidated::kAgree ? 1 : -1;
  }
  QualityBeam helpful{"helpful", {}};
  QualityBeam unhelpful{"unhelpful", {}};
  for (const auto& [figure_id, b] : balance) {
    (b > 0 ? helpful : unhelpful).figure_ids.insert(figure_id);
  }
  return {helpful, unhelpful};
}

std::optional<double> CorrelationMatrix::at(std::string_view a,
                                            std::string_view b) const {
  std::size_t i = labels.size(), j = labels.size();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == a) i = k;
    if (labels[k] == b) j = k;
  }
  if (i == labels.size() || j == labels.size()) {
    throw Error("no correlation entry for (" + std::string(a) + ", " +
                std::string(b) + ")");
  }
  return r[i][j];
}

CorrelationMatrix aspect_correlations(
    std::span<const AspectRating> ratings,
    const std::map<std::string, double>& caption_lengths) {
  CorrelationMatrix m;
  std::vector<std::vector<double>> columns;
  for (Aspect a : kAspects) {
    m.labels.emplace_back(aspect_name(a));
    columns.emplace_back();
  }
  const bool with_length = !caption_lengths.empty();
  if (with_length) {
    m.labels.emplace_back("length");
    columns.emplace_back();
  }
  for (const AspectRating& r : ratings) {
    if (!r.valid) continue;
    for (std::size_t i = 0; i < kAspects.size(); ++i) {
      columns[i].push_back(r.value(kAspects[i]));
    }
    if (with_length) {
      auto it = caption_lengths.find(r.figure_id);
      if (it == caption_lengths.end()) {
        throw Error("no caption length for figure '" + r.figure_id + "'");
      }
      columns.back().push_back(it->second);
    }
  }
  if (columns.front().size() < 3) {
    throw Error("correlations need at least 3 valid ratings");
  }
  const std::size_t n = columns.size();
  m.r.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      m.r[i][j] = m.r[j][i] = pearson(columns[i], columns[j]);
    }
  }
  return m;
}

MissingInfo missing_information(std::string_view caption,
                                std::string_view source,
                                const TokenizerConfig& content) {
  const auto caption_tokens = tokenize(caption, content);
  const auto source_tokens = tokenize(source, content);
  const StemMatch match = match_tokens(caption_tokens, source_tokens);
  MissingInfo info;
  info.missing_count = caption_tokens.size() - match.matched;
  info.missing_fraction =
      caption_tokens.empty()
          ? 0.0
          : static_cast<double>(info.missing_count) / caption_tokens.size();
  return info;
}

MissingInfo missing_information(const TokenAlignment& alignment) {
  coverage_pair(alignment);  // validates the link indices
  const std::size_t n = alignment.caption_tokens.size();
  std::vector<bool> hit(n, false);
  for (const auto& [ci, si] : alignment.links) hit[ci] = true;
  MissingInfo info;
  for (bool h : hit) info.missing_count += h ? 0 : 1;
  info.missing_fraction =
      n == 0 ? 0.0 : static_cast<double>(info.missing_count) / n;
  return info;
}

}  // namespace figcap
