#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "figcap/jsonl.hpp"
#include "figcap/metrics.hpp"
#include "figcap/normeval.hpp"

namespace figcap {

// ---- quality annotation -------------------------------------------------

enum class Consolidated { kAgree, kDisagree };

// 4-5 -> Agree, 1-3 -> Disagree (Neutral included).
Consolidated consolidate(int rating_value);

enum class Aspect { kImageText, kVisualDesc, kTakeaway, kHelpfulness };
inline constexpr std::array<Aspect, 4> kAspects = {
    Aspect::kImageText, Aspect::kVisualDesc, Aspect::kTakeaway,
    Aspect::kHelpfulness};

std::string_view aspect_name(Aspect aspect);

struct AspectRating {
  std::string figure_id;
  std::string annotator_id;
  int image_text = 0;
  int visual_desc = 0;
  int takeaway = 0;
  int helpfulness = 0;
  bool valid = true;
  std::string exclusion_reason;

  int value(Aspect aspect) const;
  // Valid ratings need every aspect in 1..5. Excluded ones need a reason and
  // may leave aspects unset (0).
  void validate() const;
  bool operator==(const AspectRating&) const = default;
};

struct ConsolidationRow {
  Aspect aspect;
  std::size_t agree = 0;
  std::size_t disagree = 0;

  std::size_t total() const { return agree + disagree; }
  double agree_percent() const;
};

// One row per aspect over the valid ratings.
std::vector<ConsolidationRow> consolidation_table(
    std::span<const AspectRating> ratings);

// Helpful = consolidated helpfulness Agree; excluded ratings are ignored.
std::vector<QualityBeam> quality_beams(std::span<const AspectRating> ratings);

// Pearson r; nullopt when either variable has zero variance.
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> r;

  std::optional<double> at(std::string_view a, std::string_view b) const;
};

// Pearson matrix over the four aspects plus caption length ("length"),
// using the raw 1..5 values of valid ratings. Length is looked up by
// figure_id; ratings without a length entry are an error when the map is
// non-empty, and the length row is omitted when it is empty.
CorrelationMatrix aspect_correlations(
    std::span<const AspectRating> ratings,
    const std::map<std::string, double>& caption_lengths);

struct MissingInfo {
  std::size_t missing_count = 0;
  double missing_fraction = 0;
};

MissingInfo missing_information(std::string_view caption,
                                std::string_view source,
                                const TokenizerConfig& content =
                                    TokenizerConfig::content_words());
MissingInfo missing_information(const TokenAlignment& alignment);

// ---- length distributions -----------------------------------------------

struct HistogramBin {
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;
};

struct LengthDensity {
  std::string group;
  std::size_t size = 0;
  double bandwidth = 0;
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<HistogramBin> histogram;
};

struct DistributionOptions {
  std::size_t grid_points = 512;
  double bin_width = 5;
  double grid_padding = 4;  // bandwidths beyond min/max
};

struct LengthDistribution {
  std::vector<LengthDensity> groups;
  std::vector<std::string> warnings;
};

// Gaussian KDE with Silverman's bandwidth, 0.9 * min(sd, IQR / 1.34) *
// n^(-1/5); falls back to sd, then to 1 token, when the spread is zero.
double silverman_bandwidth(std::span<const double> values);
double gaussian_kde(std::span<const double> values, double bandwidth,
                    double x);

// Groups with no lengths are skipped with a warning; groups with a single
// length get a histogram but an empty density.
LengthDistribution length_distribution(
    const std::map<std::string, std::vector<double>>& lengths_by_group,
    const DistributionOptions& options = {});

std::string format_distribution_csv(const LengthDistribution& distribution);
std::string format_histogram_csv(const LengthDistribution& distribution);

// ---- rankings and votes -------------------------------------------------

struct RankingRecord {
  std::string figure_id;
  std::string annotator_id;
  std::vector<std::string> ranking;  // system ids, best first

  bool operator==(const RankingRecord&) const = default;
};

struct VoteRecord {
  std::string figure_id;
  std::string worker_id;
  std::string worst_system_id;

  bool operator==(const VoteRecord&) const = default;
};

double kendall_tau_b(std::span<const double> x, std::span<const double> y);
double spearman_rho(std::span<const double> x, std::span<const double> y);

enum class AgreementPooling { kPooled, kPerFigureMean };

struct Agreement {
  double kendall_tau = 0;
  double spearman_rho = 0;
  std::size_t shared_figures = 0;
};

// Rank vectors are the positions (1 = best) of each system, systems ordered
// by id. Pooled: one coefficient over the concatenated vectors of all shared
// figures. PerFigureMean: mean of per-figure coefficients.
Agreement rank_agreement(std::span<const RankingRecord> first,
                         std::span<const RankingRecord> second,
                         AgreementPooling pooling = AgreementPooling::kPooled);

// system_id -> figure_id -> mean position over annotators.
std::map<std::string, std::map<std::string, double>> mean_ranks(
    std::span<const RankingRecord> rankings);

struct VoteTallyRow {
  std::string system_id;
  std::size_t majority_count = 0;
  double mean_votes = 0;
};

// Per figure every system tied at the top vote count gets one majority
// credit; mean_votes = total votes / number of figures.
std::vector<VoteTallyRow> worst_vote_tally(std::span<const VoteRecord> votes);

// system_id -> figure_id -> vote count (0 when the system got none).
std::map<std::string, std::map<std::string, double>> votes_per_figure(
    std::span<const VoteRecord> votes);

enum class TTestMode { kWelch, kPaired };

struct TTestResult {
  double t = 0;
  double p = 1;
  double df = 0;
  bool defined = true;
};

// Two-sided test of equal means. Undefined (defined = false) when the
// standard error is zero and the means differ, or paired differences are
// constant.
TTestResult mean_diff_ttest(std::span<const double> a,
                            std::span<const double> b, TTestMode mode);

// Two-sided p-value of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

// ---- file formats -------------------------------------------------------

std::vector<AspectRating> read_ratings(const std::filesystem::path& path);
std::vector<RankingRecord> read_rankings(const std::filesystem::path& path);
std::vector<VoteRecord> read_votes(const std::filesystem::path& path);

Json rating_to_json(const AspectRating& rating);
AspectRating rating_from_json(const Json& record);
Json ranking_to_json(const RankingRecord& ranking);
RankingRecord ranking_from_json(const Json& record);
Json vote_to_json(const VoteRecord& vote);
VoteRecord vote_from_json(const Json& record);

}  // namespace figcap
