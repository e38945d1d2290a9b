#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wnoise/ensemble.hpp"
#include "wnoise/spectral.hpp"

namespace wnoise {

/// Multiplier value standing for "resample every position".
inline constexpr double kFullResample = std::numeric_limits<double>::infinity();

struct SweepConfig {
  std::vector<std::size_t> n_list{256};
  /// Absolute resample counts. When non-empty it replaces `multipliers`.
  std::vector<std::size_t> k_list;
  /// k = round(m * N^{5/3}), clamped to N(N+1)/2; kFullResample means the full set.
  std::vector<double> multipliers{0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, kFullResample};
  /// Trials per cell; 0 selects 400 for N <= 512 and 100 above.
  std::size_t trials = 0;
  EntrySpec entry;
  std::uint64_t seed = 1;
  /// Eigensolver residual tolerance.
  double tol = 1e-10;
  /// Largest N solved with the dense eigensolver.
  std::size_t dense_max_dim = 128;
  /// Resampled pairs per matrix in the single-flip study.
  std::size_t pair_samples = 4;
  std::size_t bootstrap = 1000;
  /// Random test functions in the exact decomposition corpus.
  std::size_t chaos_corpus = 100;
  /// Largest number of binary coordinates in that corpus.
  std::size_t chaos_max_n = 4;
  /// Statistic names to keep in the output; empty keeps all.
  std::vector<std::string> statistics;

  bool operator==(const SweepConfig&) const = default;
};

/// Throws ConfigError naming the first violated constraint.
void validate(const SweepConfig& cfg);

std::size_t trials_for(const SweepConfig& cfg, std::size_t n);
SolverOptions solver_options(const SweepConfig& cfg);

/// N^{5/3}.
double threshold_scale(std::size_t n);

struct KCell {
  std::size_t k = 0;
  double multiplier = 0.0;  // k / N^{5/3}
};
/// The configured grid resolved at dimension N, in configuration order.
std::vector<KCell> resolve_k_grid(const SweepConfig& cfg, std::size_t n);
std::size_t k_from_multiplier(double m, std::size_t n);

/// One statistical record per (experiment, N, k, statistic).
struct ResultRow {
  std::string experiment;
  std::size_t n = 0;
  std::size_t k = 0;
  double multiplier = 0.0;
  std::string statistic;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t excluded = 0;

  bool operator==(const ResultRow&) const = default;
};

/// More than 1% of the cell's trials were excluded for a degenerate gap.
bool cell_invalid(const ResultRow& row) noexcept;

/// Rows whose statistic is selected by cfg.statistics.
std::vector<ResultRow> select_statistics(const SweepConfig& cfg, std::vector<ResultRow> rows);

// ---------------------------------------------------------------------------
// Coupled resampling trials shared by the overlap, alignment, key-inequality and
// collapse experiments. Within a trial all k use prefixes of one drawn pair set and
// one stream of replacement values, so S_k1 is a subset of S_k2 for k1 < k2.

struct CellOutcome {
  bool excluded = false;
  double lambda_k = 0.0;
  double overlap = 0.0;
  double l2_aligned = 0.0;
  double sup_aligned_scaled = 0.0;
};

struct ResampleTrial {
  bool excluded = false;  // X itself has a degenerate top gap
  double lambda = 0.0;
  double sup_norm_v = 0.0;  // sqrt(N) ||v||_inf
  std::vector<CellOutcome> cells;  // one per requested k, same order
};

std::vector<ResampleTrial> run_resample_trials(std::size_t n, const std::vector<std::size_t>& ks, std::size_t trials,
                                               const EntrySpec& entry, std::uint64_t seed,
                                               const SolverOptions& opts, std::size_t threads);

std::vector<ResultRow> overlap_sweep(const SweepConfig& cfg, std::size_t threads = 1);
std::vector<ResultRow> alignment_sweep(const SweepConfig& cfg, std::size_t threads = 1);

struct VarianceScaling {
  std::vector<std::size_t> n_list;
  std::vector<std::vector<double>> lambdas;  // per N, per trial
  std::vector<double> variance;
  std::vector<double> variance_se;
  double slope = 0.0;
  double slope_se = 0.0;  // bootstrap
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
  std::vector<ResultRow> rows;
};

/// Sample variance of the top eigenvalue per N and the least-squares slope of
/// log Var against log N with a percentile bootstrap interval.
VarianceScaling lambda_variance_scaling(const SweepConfig& cfg, std::size_t threads = 1);

struct DriftStudy {
  std::size_t n = 0;
  std::vector<std::size_t> ks;
  std::vector<std::vector<double>> drifts;  // per k, per kept trial: lambda^{[k]} - lambda
  std::vector<double> first_order_terms;     // |(1 + [i != j]) v_i v_j (X'_ij - X_ij)|
  std::vector<double> first_order_residuals; // |lambda^{[1]} - lambda - first-order term|
  std::size_t excluded = 0;
  std::vector<ResultRow> rows;
};

/// Drift of the top eigenvalue under nested resampling, plus the first-order
/// perturbation check for a single resampled entry. Uses cfg.n_list.front() and
/// cfg.k_list (or the multiplier grid).
DriftStudy lambda_drift_study(const SweepConfig& cfg, std::size_t threads = 1);

struct RatioEstimate {
  double ratio = 0.0;
  double se = 0.0;
};
/// std(drift at k_large) / std(drift at k_small) with a paired bootstrap standard error.
RatioEstimate drift_std_ratio(const DriftStudy& study, std::size_t k_small, std::size_t k_large, std::size_t reps,
                              std::uint64_t seed);

struct SingleFlipStudy {
  std::size_t n = 0;
  std::vector<double> distances;  // sqrt(N) min_s ||v - s u^{(ij)}||_inf
  std::size_t excluded = 0;
  std::vector<ResultRow> rows;
};

/// Sensitivity of the top eigenvector to one redrawn entry, over `pair_samples`
/// random positions in each of `trials` matrices. Runs at every N in cfg.n_list.
std::vector<SingleFlipStudy> single_flip_study(const SweepConfig& cfg, std::size_t threads = 1);

struct KeyInequalityCell {
  std::size_t n = 0;
  std::size_t k = 0;
  double lhs = 0.0;  // (E|<v, v^{[k]}>|)^2
  double lhs_se = 0.0;
  double rhs = 0.0;  // 2 N^2 Var(lambda) / k * (n+1)/n
  double rhs_se = 0.0;
  bool holds = false;  // lhs <= rhs + 4 combined SE
};

struct KeyInequalityProbe {
  std::vector<KeyInequalityCell> cells;
  std::vector<ResultRow> rows;
};

KeyInequalityProbe key_inequality_probe(const SweepConfig& cfg, std::size_t threads = 1);

struct CollapseReport {
  std::vector<std::size_t> n_list;
  std::vector<double> multipliers;
  std::vector<std::vector<double>> overlap;  // [N index][multiplier index]
  std::vector<std::vector<double>> overlap_se;
  std::vector<double> spread;  // max - min over N per multiplier
  std::vector<ResultRow> rows;
};

/// Mean overlap at matched k / N^{5/3} across dimensions.
CollapseReport collapse_report(const SweepConfig& cfg, std::size_t threads = 1);

/// Eigenvalue edge summary of one sampled matrix (the `sample` subcommand).
std::vector<ResultRow> sample_summary(const SweepConfig& cfg);

}  // namespace wnoise
