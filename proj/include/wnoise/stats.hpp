#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wnoise/rng.hpp"

namespace wnoise::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than two samples.
double sample_variance(std::span<const double> xs);
double sample_std(std::span<const double> xs);
/// sample_std / sqrt(n).
double standard_error(std::span<const double> xs);
/// Large-sample standard error of the unbiased sample variance from the fourth
/// central moment: sqrt((m4 - m2^2) / n).
double variance_standard_error(std::span<const double> xs);
/// Linear-interpolated quantile (type 7), q in [0, 1].
double quantile(std::vector<double> xs, double q);
double median(std::vector<double> xs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
/// Ordinary least squares of y on x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

using Statistic = std::function<double(const std::vector<double>&)>;

/// Standard deviation of `stat` over `reps` resamples-with-replacement of `xs`.
double bootstrap_se(const std::vector<double>& xs, const Statistic& stat, std::size_t reps, const SeedContext& seed);

}  // namespace wnoise::stats
