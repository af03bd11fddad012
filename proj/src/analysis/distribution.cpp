#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "figcap/analysis.hpp"
#include "figcap/error.hpp"

namespace figcap {
namespace {

// Linear-interpolated quantile on sorted data (numpy's default).
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.empty()) throw Error("bandwidth of an empty sample");
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) return 1.0;
  double m = 0;
  for (double v : values) m += v;
  m /= n;
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / (n - 1));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0) spread = sd;
  if (spread <= 0) return 1.0;
  return 0.9 * spread * std::pow(n, -0.2);
}

double gaussian_kde(std::span<const double> values, double bandwidth,
                    double x) {
  if (values.empty() || !(bandwidth > 0)) {
    throw Error("KDE needs values and a positive bandwidth");
  }
  const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth *
                             std::sqrt(2 * std::numbers::pi));
  double sum = 0;
  for (double v : values) {
    const double z = (x - v) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum * norm;
}

LengthDistribution length_distribution(
    const std::map<std::string, std::vector<double>>& lengths_by_group,
    const DistributionOptions& options) {
  if (options.grid_points < 2 || !(options.bin_width > 0) ||
      options.grid_padding < 0) {
    throw Error("invalid distribution options");
  }
  LengthDistribution out;
  for (const auto& [group, lengths] : lengths_by_group) {
    if (lengths.empty()) {
      out.warnings.push_back("group '" + group + "' is empty; skipped");
      continue;
    }
    LengthDensity d;
    d.group = group;
    d.size = lengths.size();
    const auto [min_it, max_it] = std::minmax_element(lengths.begin(), lengths.end());
    const double lo = *min_it;
    const double hi = *max_it;

    // Bins [k*w, (k+1)*w) aligned to multiples of the bin width.
    const double w = options.bin_width;
    const auto first = static_cast<long long>(std::floor(lo / w));
    const auto last = static_cast<long long>(std::floor(hi / w));
    for (long long k = first; k <= last; ++k) {
      d.histogram.push_back({static_cast<double>(k) * w,
                             static_cast<double>(k + 1) * w, 0});
    }
    for (double v : lengths) {
      auto k = static_cast<long long>(std::floor(v / w));
      ++d.histogram[static_cast<std::size_t>(k - first)].count;
    }

    if (lengths.size() >= 2) {
      d.bandwidth = silverman_bandwidth(lengths);
      const double g0 = lo - options.grid_padding * d.bandwidth;
      const double g1 = hi + options.grid_padding * d.bandwidth;
      const double step = (g1 - g0) / static_cast<double>(options.grid_points - 1);
      for (std::size_t i = 0; i < options.grid_points; ++i) {
        const double x = g0 + step * static_cast<double>(i);
        d.grid.push_back(x);
        d.density.push_back(gaussian_kde(lengths, d.bandwidth, x));
      }
    } else {
      out.warnings.push_back("group '" + group +
                             "' has one length; density omitted");
    }
    out.groups.push_back(std::move(d));
  }
  return out;
}

std::string format_distribution_csv(const LengthDistribution& distribution) {
  std::string out = "group,grid_x,density\n";
  for (const LengthDensity& d : distribution.groups) {
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      out += d.group + "," + number(d.grid[i]) + "," + number(d.density[i]) + "\n";
    }
  }
  return out;
}

std::string format_histogram_csv(const LengthDistribution& distribution) {
  std::string out = "group,bin_lo,bin_hi,count\n";
  for (const LengthDensity& d : distribution.groups) {
    for (const HistogramBin& b : d.histogram) {
      out += d.group + "," + number(b.lo) + "," + number(b.hi) + "," +
             std::to_string(b.count) + "\n";
    }
  }
  return out;
}

}  // namespace figcap
