#include "wnoise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wnoise/errors.hpp"

namespace wnoise::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double sample_std(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double variance_standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  const double n = static_cast<double>(xs.size());
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw DomainError("quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs two or more paired points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sxy += (x[t] - mx) * (y[t] - my);
    sxx += (x[t] - mx) * (x[t] - mx);
  }
  if (sxx == 0.0) throw DomainError("least squares needs distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double bootstrap_se(const std::vector<double>& xs, const Statistic& stat, std::size_t reps, const SeedContext& seed) {
  if (xs.empty() || reps < 2) return 0.0;
  auto rng = seed.stream();
  std::vector<double> draws(reps), resample(xs.size());
  for (std::size_t r = 0; r < reps; ++r) {
    for (auto& v : resample) v = xs[rng.below(xs.size())];
    draws[r] = stat(resample);
  }
  return sample_std(draws);
}

}  // namespace wnoise::stats
