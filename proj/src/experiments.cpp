#include "wnoise/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wnoise/errors.hpp"
#include "wnoise/parallel.hpp"
#include "wnoise/stats.hpp"

namespace wnoise {
namespace {

std::string label_for(const std::string& experiment, std::size_t n) {
  return experiment + ":N=" + std::to_string(n);
}

ResultRow make_row(const std::string& experiment, std::size_t n, std::size_t k, const std::string& statistic,
                   const std::vector<double>& samples, std::size_t excluded) {
  ResultRow row;
  row.experiment = experiment;
  row.n = n;
  row.k = k;
  row.multiplier = n > 0 ? static_cast<double>(k) / threshold_scale(n) : 0.0;
  row.statistic = statistic;
  row.mean = stats::mean(samples);
  row.std_error = stats::standard_error(samples);
  row.trials = samples.size();
  row.excluded = excluded;
  return row;
}

ResultRow summary_row(const std::string& experiment, std::size_t n, std::size_t k, const std::string& statistic,
                      double value, double se, std::size_t trials, std::size_t excluded) {
  ResultRow row;
  row.experiment = experiment;
  row.n = n;
  row.k = k;
  row.multiplier = n > 0 ? static_cast<double>(k) / threshold_scale(n) : 0.0;
  row.statistic = statistic;
  row.mean = value;
  row.std_error = se;
  row.trials = trials;
  row.excluded = excluded;
  return row;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> ks) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::vector<std::size_t> grid_ks(const SweepConfig& cfg, std::size_t n) {
  std::vector<std::size_t> ks;
  for (const auto& cell : resolve_k_grid(cfg, n)) ks.push_back(cell.k);
  return ks;
}

}  // namespace

double threshold_scale(std::size_t n) { return std::pow(static_cast<double>(n), 5.0 / 3.0); }

std::size_t k_from_multiplier(double m, std::size_t n) {
  const std::size_t total = pair_count(n);
  if (std::isinf(m)) return total;
  const double k = std::round(m * threshold_scale(n));
  if (k >= static_cast<double>(total)) return total;
  return static_cast<std::size_t>(k);
}

void validate(const SweepConfig& cfg) {
  if (cfg.n_list.empty()) throw ConfigError("N_list must not be empty");
  for (std::size_t n : cfg.n_list)
    if (n < 1) throw ConfigError("N_list entries must be >= 1");
  for (std::size_t n : cfg.n_list) {
    for (std::size_t k : cfg.k_list) {
      if (k > pair_count(n)) {
        throw ConfigError("k_list: k=" + std::to_string(k) + " exceeds N(N+1)/2=" + std::to_string(pair_count(n)) +
                          " for N=" + std::to_string(n));
      }
    }
  }
  for (double m : cfg.multipliers)
    if (!(m >= 0.0)) throw ConfigError("multipliers must be non-negative");
  if (cfg.k_list.empty() && cfg.multipliers.empty()) throw ConfigError("either k_list or multipliers must be set");
  if (cfg.trials == 1) throw ConfigError("trials must be >= 2 (or 0 for the default rule)");
  if (!(cfg.entry.diag_sigma0 >= 0.0)) throw ConfigError("sigma0 must be non-negative");
  if (!(cfg.entry.tail_delta > 0.0)) throw ConfigError("tail_delta must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.pair_samples < 1) throw ConfigError("pair_samples must be >= 1");
  if (cfg.bootstrap < 2) throw ConfigError("bootstrap must be >= 2");
  if (cfg.chaos_max_n < 1 || cfg.chaos_max_n > 6) throw ConfigError("chaos_max_n must lie in [1, 6]");
}

std::size_t trials_for(const SweepConfig& cfg, std::size_t n) {
  if (cfg.trials != 0) return cfg.trials;
  return n <= 512 ? 400 : 100;
}

SolverOptions solver_options(const SweepConfig& cfg) {
  SolverOptions opts;
  opts.tol = cfg.tol;
  opts.dense_max_dim = cfg.dense_max_dim;
  return opts;
}

std::vector<KCell> resolve_k_grid(const SweepConfig& cfg, std::size_t n) {
  std::vector<KCell> out;
  if (!cfg.k_list.empty()) {
    for (std::size_t k : cfg.k_list) {
      if (k > pair_count(n))
        throw ConfigError("k=" + std::to_string(k) + " exceeds N(N+1)/2 for N=" + std::to_string(n));
      out.push_back({k, static_cast<double>(k) / threshold_scale(n)});
    }
    return out;
  }
  for (double m : cfg.multipliers) {
    const std::size_t k = k_from_multiplier(m, n);
    out.push_back({k, static_cast<double>(k) / threshold_scale(n)});
  }
  return out;
}

bool cell_invalid(const ResultRow& row) noexcept {
  const double total = static_cast<double>(row.trials + row.excluded);
  return total > 0.0 && static_cast<double>(row.excluded) > 0.01 * total;
}

std::vector<ResultRow> select_statistics(const SweepConfig& cfg, std::vector<ResultRow> rows) {
  if (cfg.statistics.empty()) return rows;
  const std::set<std::string> keep(cfg.statistics.begin(), cfg.statistics.end());
  std::erase_if(rows, [&](const ResultRow& r) { return keep.count(r.statistic) == 0; });
  return rows;
}

std::vector<ResampleTrial> run_resample_trials(std::size_t n, const std::vector<std::size_t>& ks, std::size_t trials,
                                               const EntrySpec& entry, std::uint64_t seed,
                                               const SolverOptions& opts, std::size_t threads) {
  const std::vector<std::size_t> unique = sorted_unique(ks);
  const std::size_t k_max = unique.empty() ? 0 : unique.back();
  if (k_max > pair_count(n)) throw DomainError("k exceeds N(N+1)/2");
  std::vector<ResampleTrial> out(trials);

  parallel_for(trials, threads, [&](std::size_t t) {
    const SeedContext ctx{seed, {label_for("resample", n), t, "X", 0}};
    const SymmetricMatrix x = sample_wigner(n, entry, ctx);
    const EdgeEigen base = edge_eigen(x, opts);
    ResampleTrial& trial = out[t];
    trial.lambda = base.top.value;
    trial.sup_norm_v = std::sqrt(static_cast<double>(n)) * base.top.vector.lpNorm<Eigen::Infinity>();
    trial.excluded = n > 1 && is_degenerate(base.edge, n);
    const IndexPairSet all = sample_pair_set(n, k_max, ctx.with_purpose("S"));

    std::map<std::size_t, CellOutcome> by_k;
    for (std::size_t k : unique) {
      CellOutcome cell;
      if (k == 0) {
        cell.lambda_k = base.top.value;
        cell.overlap = 1.0;
        cell.excluded = trial.excluded;
      } else {
        const SymmetricMatrix xk = apply_resample(x, all.prefix(k), entry, ctx.with_purpose("Xprime"));
        const EdgeEigen res = edge_eigen(xk, opts);
        cell.lambda_k = res.top.value;
        cell.excluded = trial.excluded || (n > 1 && is_degenerate(res.edge, n));
        const DistanceStats d = distance_stats(base.top.vector, res.top.vector);
        cell.overlap = overlap(base.top.vector, res.top.vector);
        cell.l2_aligned = d.l2_aligned;
        cell.sup_aligned_scaled = d.sup_aligned_scaled;
      }
      by_k.emplace(k, cell);
    }
    for (std::size_t k : ks) trial.cells.push_back(by_k.at(k));
  });
  return out;
}

namespace {

struct CellSamples {
  std::vector<double> overlap, overlap_sq, l2, sup, l2_running, sup_running, lambda_k;
  std::size_t excluded = 0;
};

// Collects per-cell samples; running maxima are taken over grid entries with k' <= k.
std::vector<CellSamples> collect(const std::vector<ResampleTrial>& trials, const std::vector<KCell>& grid) {
  std::vector<CellSamples> cells(grid.size());
  for (const auto& trial : trials) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const CellOutcome& o = trial.cells[c];
      if (o.excluded) {
        ++cells[c].excluded;
        continue;
      }
      double l2_max = 0.0, sup_max = 0.0;
      for (std::size_t d = 0; d < grid.size(); ++d) {
        if (grid[d].k > grid[c].k || trial.cells[d].excluded) continue;
        l2_max = std::max(l2_max, trial.cells[d].l2_aligned);
        sup_max = std::max(sup_max, trial.cells[d].sup_aligned_scaled);
      }
      cells[c].overlap.push_back(o.overlap);
      cells[c].overlap_sq.push_back(o.overlap * o.overlap);
      cells[c].l2.push_back(o.l2_aligned);
      cells[c].sup.push_back(o.sup_aligned_scaled);
      cells[c].l2_running.push_back(l2_max);
      cells[c].sup_running.push_back(sup_max);
      cells[c].lambda_k.push_back(o.lambda_k);
    }
  }
  return cells;
}

}  // namespace

std::vector<ResultRow> overlap_sweep(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  std::vector<ResultRow> rows;
  for (std::size_t n : cfg.n_list) {
    const auto grid = resolve_k_grid(cfg, n);
    const auto trials = run_resample_trials(n, grid_ks(cfg, n), trials_for(cfg, n), cfg.entry, cfg.seed,
                                            solver_options(cfg), threads);
    const auto cells = collect(trials, grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      rows.push_back(make_row("overlap", n, grid[c].k, "overlap", cells[c].overlap, cells[c].excluded));
      rows.push_back(make_row("overlap", n, grid[c].k, "overlap_sq", cells[c].overlap_sq, cells[c].excluded));
    }
  }
  return select_statistics(cfg, std::move(rows));
}

std::vector<ResultRow> alignment_sweep(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  std::vector<ResultRow> rows;
  for (std::size_t n : cfg.n_list) {
    const auto grid = resolve_k_grid(cfg, n);
    const auto trials = run_resample_trials(n, grid_ks(cfg, n), trials_for(cfg, n), cfg.entry, cfg.seed,
                                            solver_options(cfg), threads);
    const auto cells = collect(trials, grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const std::size_t k = grid[c].k;
      const std::size_t ex = cells[c].excluded;
      rows.push_back(make_row("alignment", n, k, "l2_aligned", cells[c].l2, ex));
      rows.push_back(make_row("alignment", n, k, "sup_aligned_scaled", cells[c].sup, ex));
      rows.push_back(make_row("alignment", n, k, "l2_aligned_running_max", cells[c].l2_running, ex));
      rows.push_back(make_row("alignment", n, k, "sup_aligned_scaled_running_max", cells[c].sup_running, ex));
    }
  }
  return select_statistics(cfg, std::move(rows));
}

VarianceScaling lambda_variance_scaling(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  VarianceScaling out;
  out.n_list = cfg.n_list;
  const SolverOptions opts = solver_options(cfg);
  for (std::size_t n : cfg.n_list) {
    const std::size_t trials = trials_for(cfg, n);
    std::vector<double> lambdas(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const SeedContext ctx{cfg.seed, {label_for("var-lambda", n), t, "X", 0}};
      lambdas[t] = top_eigenpair(sample_wigner(n, cfg.entry, ctx), opts).value;
    });
    out.variance.push_back(stats::sample_variance(lambdas));
    out.variance_se.push_back(stats::variance_standard_error(lambdas));
    out.rows.push_back(summary_row("var-lambda", n, 0, "lambda_var", out.variance.back(), out.variance_se.back(),
                                   trials, 0));
    out.rows.push_back(make_row("var-lambda", n, 0, "lambda_mean", lambdas, 0));
    out.lambdas.push_back(std::move(lambdas));
  }

  if (cfg.n_list.size() >= 2) {
    std::vector<double> log_n, log_var;
    for (std::size_t t = 0; t < cfg.n_list.size(); ++t) {
      log_n.push_back(std::log(static_cast<double>(cfg.n_list[t])));
      log_var.push_back(std::log(out.variance[t]));
    }
    out.slope = stats::least_squares(log_n, log_var).slope;

    auto rng = SeedContext{cfg.seed, {"var-lambda:bootstrap", 0, "resample", 0}}.stream();
    std::vector<double> slopes(cfg.bootstrap), resample;
    for (std::size_t r = 0; r < cfg.bootstrap; ++r) {
      std::vector<double> lv;
      for (const auto& sample : out.lambdas) {
        resample.resize(sample.size());
        for (auto& v : resample) v = sample[rng.below(sample.size())];
        lv.push_back(std::log(stats::sample_variance(resample)));
      }
      slopes[r] = stats::least_squares(log_n, lv).slope;
    }
    out.slope_se = stats::sample_std(slopes);
    out.slope_ci_low = stats::quantile(slopes, 0.025);
    out.slope_ci_high = stats::quantile(slopes, 0.975);
    out.rows.push_back(summary_row("var-lambda", 0, 0, "loglog_slope", out.slope, out.slope_se, cfg.bootstrap, 0));
    out.rows.push_back(summary_row("var-lambda", 0, 0, "slope_ci_low", out.slope_ci_low, 0.0, cfg.bootstrap, 0));
    out.rows.push_back(summary_row("var-lambda", 0, 0, "slope_ci_high", out.slope_ci_high, 0.0, cfg.bootstrap, 0));
  }
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

DriftStudy lambda_drift_study(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  DriftStudy out;
  const std::size_t n = cfg.n_list.front();
  out.n = n;
  out.ks = grid_ks(cfg, n);
  const std::size_t trials = trials_for(cfg, n);
  const SolverOptions opts = solver_options(cfg);
  std::vector<std::size_t> unique = sorted_unique(out.ks);
  const std::size_t k_max = std::max<std::size_t>(unique.empty() ? 0 : unique.back(), 1);

  struct TrialOut {
    bool excluded = false;
    std::map<std::size_t, double> drift;
    double term = 0.0, residual = 0.0;
  };
  std::vector<TrialOut> per_trial(trials);

  parallel_for(trials, threads, [&](std::size_t t) {
    const SeedContext ctx{cfg.seed, {label_for("drift", n), t, "X", 0}};
    const SymmetricMatrix x = sample_wigner(n, cfg.entry, ctx);
    const EdgeEigen base = edge_eigen(x, opts);
    TrialOut& o = per_trial[t];
    o.excluded = n > 1 && is_degenerate(base.edge, n);
    const IndexPairSet all = sample_pair_set(n, std::min(k_max, pair_count(n)), ctx.with_purpose("S"));
    const SeedContext replacement = ctx.with_purpose("Xprime");
    for (std::size_t k : unique) {
      if (k == 0) {
        o.drift[k] = 0.0;
        continue;
      }
      o.drift[k] = top_eigenpair(apply_resample(x, all.prefix(k), cfg.entry, replacement), opts).value - base.top.value;
    }
    // First-order check on the first resampled entry; same draw as k = 1 above.
    const SymmetricMatrix x1 = apply_resample(x, all.prefix(1), cfg.entry, replacement);
    const double lambda1 = o.drift.count(1) != 0 ? base.top.value + o.drift[1] : top_eigenpair(x1, opts).value;
    const auto [i, j] = all.pairs.front();
    const auto& v = base.top.vector;
    const double term = (i != j ? 2.0 : 1.0) * v(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(j)) *
                        (x1(i, j) - x(i, j));
    o.term = std::abs(term);
    o.residual = std::abs(lambda1 - base.top.value - term);
  });

  out.drifts.assign(out.ks.size(), {});
  for (const auto& o : per_trial) {
    if (o.excluded) {
      ++out.excluded;
      continue;
    }
    for (std::size_t c = 0; c < out.ks.size(); ++c) out.drifts[c].push_back(o.drift.at(out.ks[c]));
    out.first_order_terms.push_back(o.term);
    out.first_order_residuals.push_back(o.residual);
  }
  for (std::size_t c = 0; c < out.ks.size(); ++c) {
    const auto& d = out.drifts[c];
    out.rows.push_back(make_row("drift", n, out.ks[c], "drift_mean", d, out.excluded));
    const double sd = stats::sample_std(d);
    const double sd_se = sd > 0.0 ? stats::variance_standard_error(d) / (2.0 * sd) : 0.0;
    out.rows.push_back(summary_row("drift", n, out.ks[c], "drift_std", sd, sd_se, d.size(), out.excluded));
    // Heuristic shape sqrt(k)/N, reported alongside for comparison.
    out.rows.push_back(summary_row("drift", n, out.ks[c], "sqrt_k_over_n",
                                   std::sqrt(static_cast<double>(out.ks[c])) / static_cast<double>(n), 0.0, d.size(),
                                   out.excluded));
  }
  for (std::size_t c = 0; c < out.ks.size(); ++c) {
    const std::size_t k = out.ks[c];
    if (k == 0 || std::find(out.ks.begin(), out.ks.end(), 4 * k) == out.ks.end() || out.drifts[c].size() < 2) continue;
    const RatioEstimate ratio = drift_std_ratio(out, k, 4 * k, cfg.bootstrap, cfg.seed);
    out.rows.push_back(
        summary_row("drift", n, k, "std_ratio_4k_over_k", ratio.ratio, ratio.se, out.drifts[c].size(), out.excluded));
  }
  const std::size_t kept = out.first_order_terms.size();
  if (kept > 0) {
    const SeedContext boot{cfg.seed, {label_for("drift:bootstrap", n), 0, "median", 0}};
    auto med = [](const std::vector<double>& xs) { return stats::median(xs); };
    out.rows.push_back(summary_row("drift", n, 1, "first_order_term_median", stats::median(out.first_order_terms),
                                   stats::bootstrap_se(out.first_order_terms, med, cfg.bootstrap, boot), kept,
                                   out.excluded));
    out.rows.push_back(summary_row("drift", n, 1, "first_order_residual_median",
                                   stats::median(out.first_order_residuals),
                                   stats::bootstrap_se(out.first_order_residuals, med, cfg.bootstrap,
                                                       boot.with_purpose("median", 1)),
                                   kept, out.excluded));
  }
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

RatioEstimate drift_std_ratio(const DriftStudy& study, std::size_t k_small, std::size_t k_large, std::size_t reps,
                              std::uint64_t seed) {
  auto find = [&](std::size_t k) -> const std::vector<double>& {
    for (std::size_t c = 0; c < study.ks.size(); ++c)
      if (study.ks[c] == k) return study.drifts[c];
    throw DomainError("k=" + std::to_string(k) + " is not part of the drift study grid");
  };
  const auto& small = find(k_small);
  const auto& large = find(k_large);
  RatioEstimate out;
  out.ratio = stats::sample_std(large) / stats::sample_std(small);
  auto rng = SeedContext{seed, {"drift:ratio-bootstrap", k_small, "paired", k_large}}.stream();
  std::vector<double> ratios(reps), a(small.size()), b(small.size());
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t t = 0; t < small.size(); ++t) {
      const std::size_t pick = rng.below(small.size());
      a[t] = small[pick];
      b[t] = large[pick];
    }
    ratios[r] = stats::sample_std(b) / stats::sample_std(a);
  }
  out.se = stats::sample_std(ratios);
  return out;
}

std::vector<SingleFlipStudy> single_flip_study(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  std::vector<SingleFlipStudy> out;
  const SolverOptions opts = solver_options(cfg);
  for (std::size_t n : cfg.n_list) {
    const std::size_t trials = trials_for(cfg, n);
    const std::size_t pairs = std::min(cfg.pair_samples, pair_count(n));
    struct TrialOut {
      bool excluded = false;
      std::vector<double> distances;
      std::size_t excluded_pairs = 0;
    };
    std::vector<TrialOut> per_trial(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const SeedContext ctx{cfg.seed, {label_for("single-flip", n), t, "X", 0}};
      const SymmetricMatrix x = sample_wigner(n, cfg.entry, ctx);
      const EdgeEigen base = edge_eigen(x, opts);
      TrialOut& o = per_trial[t];
      if (n > 1 && is_degenerate(base.edge, n)) {
        o.excluded = true;
        return;
      }
      const IndexPairSet chosen = sample_pair_set(n, pairs, ctx.with_purpose("pairs"));
      for (std::size_t p = 0; p < chosen.size(); ++p) {
        const auto [i, j] = chosen.pairs[p];
        const EdgeEigen flipped = edge_eigen(resample_single(x, i, j, cfg.entry, ctx.with_purpose("flip", p)), opts);
        if (n > 1 && is_degenerate(flipped.edge, n)) {
          ++o.excluded_pairs;
          continue;
        }
        o.distances.push_back(distance_stats(base.top.vector, flipped.top.vector).sup_aligned_scaled);
      }
    });
    SingleFlipStudy study;
    study.n = n;
    for (const auto& o : per_trial) {
      study.excluded += o.excluded ? pairs : o.excluded_pairs;
      study.distances.insert(study.distances.end(), o.distances.begin(), o.distances.end());
    }
    if (!study.distances.empty()) {
      const SeedContext boot{cfg.seed, {label_for("single-flip:bootstrap", n), 0, "quantile", 0}};
      auto med = [](const std::vector<double>& xs) { return stats::median(xs); };
      auto p95 = [](const std::vector<double>& xs) { return stats::quantile(xs, 0.95); };
      const std::size_t count = study.distances.size();
      study.rows.push_back(summary_row("single-flip", n, 1, "sup_scaled_median", stats::median(study.distances),
                                       stats::bootstrap_se(study.distances, med, cfg.bootstrap, boot), count,
                                       study.excluded));
      study.rows.push_back(summary_row("single-flip", n, 1, "sup_scaled_p95", stats::quantile(study.distances, 0.95),
                                       stats::bootstrap_se(study.distances, p95, cfg.bootstrap,
                                                           boot.with_purpose("quantile", 1)),
                                       count, study.excluded));
      study.rows.push_back(make_row("single-flip", n, 1, "sup_scaled_mean", study.distances, study.excluded));
    }
    study.rows = select_statistics(cfg, std::move(study.rows));
    out.push_back(std::move(study));
  }
  return out;
}

KeyInequalityProbe key_inequality_probe(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  KeyInequalityProbe out;
  for (std::size_t n : cfg.n_list) {
    const auto grid = resolve_k_grid(cfg, n);
    const auto trials = run_resample_trials(n, grid_ks(cfg, n), trials_for(cfg, n), cfg.entry, cfg.seed,
                                            solver_options(cfg), threads);
    std::vector<double> lambdas;
    for (const auto& t : trials)
      if (!t.excluded) lambdas.push_back(t.lambda);
    const double var = stats::sample_variance(lambdas);
    const double var_se = stats::variance_standard_error(lambdas);
    const double pairs = static_cast<double>(pair_count(n));
    const auto cells = collect(trials, grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const std::size_t k = grid[c].k;
      if (k == 0) continue;
      KeyInequalityCell cell;
      cell.n = n;
      cell.k = k;
      const double m = stats::mean(cells[c].overlap);
      cell.lhs = m * m;
      cell.lhs_se = 2.0 * m * stats::standard_error(cells[c].overlap);
      const double factor = 2.0 * static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(k) *
                            (pairs + 1.0) / pairs;
      cell.rhs = factor * var;
      cell.rhs_se = factor * var_se;
      cell.holds = cell.lhs <= cell.rhs + 4.0 * std::hypot(cell.lhs_se, cell.rhs_se);
      const std::size_t count = cells[c].overlap.size();
      const std::size_t ex = cells[c].excluded;
      out.rows.push_back(summary_row("key-inequality", n, k, "lhs", cell.lhs, cell.lhs_se, count, ex));
      out.rows.push_back(summary_row("key-inequality", n, k, "rhs", cell.rhs, cell.rhs_se, count, ex));
      out.rows.push_back(summary_row("key-inequality", n, k, "ratio", cell.rhs > 0.0 ? cell.lhs / cell.rhs : 0.0, 0.0,
                                     count, ex));
      out.cells.push_back(cell);
    }
  }
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

CollapseReport collapse_report(const SweepConfig& cfg, std::size_t threads) {
  validate(cfg);
  CollapseReport out;
  out.n_list = cfg.n_list;
  out.multipliers = cfg.multipliers;
  for (std::size_t n : cfg.n_list) {
    std::vector<std::size_t> ks;
    for (double m : cfg.multipliers) ks.push_back(k_from_multiplier(m, n));
    const auto trials = run_resample_trials(n, ks, trials_for(cfg, n), cfg.entry, cfg.seed, solver_options(cfg),
                                            threads);
    std::vector<double> means, ses;
    for (std::size_t c = 0; c < ks.size(); ++c) {
      std::vector<double> samples;
      std::size_t excluded = 0;
      for (const auto& t : trials) {
        if (t.cells[c].excluded)
          ++excluded;
        else
          samples.push_back(t.cells[c].overlap);
      }
      ResultRow row = make_row("collapse", n, ks[c], "overlap", samples, excluded);
      means.push_back(row.mean);
      ses.push_back(row.std_error);
      out.rows.push_back(row);
    }
    out.overlap.push_back(std::move(means));
    out.overlap_se.push_back(std::move(ses));
  }
  for (std::size_t c = 0; c < cfg.multipliers.size(); ++c) {
    double lo = 1e300, hi = -1e300;
    for (const auto& per_n : out.overlap) {
      lo = std::min(lo, per_n[c]);
      hi = std::max(hi, per_n[c]);
    }
    out.spread.push_back(hi - lo);
    ResultRow row;
    row.experiment = "collapse";
    row.statistic = "spread";
    row.multiplier = cfg.multipliers[c];
    row.mean = hi - lo;
    out.rows.push_back(row);
  }
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

std::vector<ResultRow> sample_summary(const SweepConfig& cfg) {
  validate(cfg);
  std::vector<ResultRow> rows;
  const SolverOptions opts = solver_options(cfg);
  for (std::size_t n : cfg.n_list) {
    const SeedContext ctx{cfg.seed, {label_for("sample", n), 0, "X", 0}};
    const EdgeEigen e = edge_eigen(sample_wigner(n, cfg.entry, ctx), opts);
    const double root_n = std::sqrt(static_cast<double>(n));
    rows.push_back(summary_row("sample", n, 0, "lambda1", e.edge.lambda1, 0.0, 1, 0));
    rows.push_back(summary_row("sample", n, 0, "lambda2", e.edge.lambda2, 0.0, 1, 0));
    rows.push_back(summary_row("sample", n, 0, "gap", e.edge.gap, 0.0, 1, 0));
    rows.push_back(summary_row("sample", n, 0, "lambda1_over_sqrt_n", e.edge.lambda1 / root_n, 0.0, 1, 0));
    rows.push_back(summary_row("sample", n, 0, "sup_norm_scaled", root_n * e.top.vector.lpNorm<Eigen::Infinity>(), 0.0,
                               1, 0));
    rows.push_back(summary_row("sample", n, 0, "residual", e.top.residual, 0.0, 1, 0));
  }
  return select_statistics(cfg, std::move(rows));
}

}  // namespace wnoise
