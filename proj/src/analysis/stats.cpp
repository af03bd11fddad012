#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "figcap/analysis.hpp"
#include "figcap/error.hpp"

namespace figcap {
namespace {

void require_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("paired samples differ in length (" + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()) + ")");
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Unbiased sample variance.
double variance(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  require_same_size(x, y);
  if (x.size() < 2) return std::nullopt;
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Tau-b; NaN when either vector is constant.
double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y);
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tied_x;
      } else if (dy == 0) {
        ++tied_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double denom =
      std::sqrt(static_cast<double>(concordant + discordant + tied_x) *
                static_cast<double>(concordant + discordant + tied_y));
  if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / denom;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y);
  auto r = pearson(average_ranks(x), average_ranks(y));
  return r ? *r : std::numeric_limits<double>::quiet_NaN();
}

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t) || !(df > 0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  return std::min(1.0, 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

TTestResult mean_diff_ttest(std::span<const double> a,
                            std::span<const double> b, TTestMode mode) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error("t-test needs at least 2 observations per sample");
  }
  TTestResult result;
  if (mode == TTestMode::kPaired) {
    require_same_size(a, b);
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double sd = std::sqrt(variance(d));
    result.df = static_cast<double>(d.size() - 1);
    if (sd == 0) {
      result.defined = false;
      result.t = std::numeric_limits<double>::quiet_NaN();
      result.p = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
    result.t = mean(d) / (sd / std::sqrt(static_cast<double>(d.size())));
  } else {
    const double va = variance(a) / static_cast<double>(a.size());
    const double vb = variance(b) / static_cast<double>(b.size());
    const double diff = mean(a) - mean(b);
    const double se2 = va + vb;
    if (se2 == 0) {
      result.df = static_cast<double>(a.size() + b.size() - 2);
      if (diff == 0) return {0, 1, result.df, true};
      result.defined = false;
      result.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
      result.p = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
    result.t = diff / std::sqrt(se2);
    result.df = se2 * se2 /
                (va * va / static_cast<double>(a.size() - 1) +
                 vb * vb / static_cast<double>(b.size() - 1));
  }
  result.p = student_t_two_sided_p(result.t, result.df);
  return result;
}

}  // namespace figcap
