#include "wnoise/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wnoise/chaos.hpp"
#include "wnoise/errors.hpp"
#include "wnoise/parallel.hpp"
#include "wnoise/resolvent.hpp"
#include "wnoise/stats.hpp"

namespace wnoise {
namespace {

ResultRow row(const std::string& experiment, std::size_t n, const std::string& statistic, double mean, double se,
              std::size_t trials, std::size_t excluded) {
  ResultRow r;
  r.experiment = experiment;
  r.n = n;
  r.statistic = statistic;
  r.mean = mean;
  r.std_error = se;
  r.trials = trials;
  r.excluded = excluded;
  return r;
}

}  // namespace

ChaosCheckReport chaos_check(const SweepConfig& cfg) {
  validate(cfg);
  ChaosCheckReport out;
  const SeedContext seed{cfg.seed, {"chaos-check", 0, "corpus", 0}};
  const auto corpus = chaos::random_table_corpus(cfg.chaos_corpus, cfg.chaos_max_n, seed);
  for (std::size_t t = 0; t < corpus.size(); ++t) {
    const auto& [space, f] = corpus[t];
    const auto terms = chaos::decomposition_exact(f, space);
    const double half_sum = 0.5 * std::accumulate(terms.b.begin(), terms.b.end(), 0.0);
    const double err = std::abs(terms.variance - half_sum);
    out.max_identity_error = std::max(out.max_identity_error, err);
    if (err > 1e-10) {
      ++out.violations;
      throw InvariantViolation("chaos-check function " + std::to_string(t) + ": |Var - sum B/2| = " +
                               std::to_string(err));
    }
    const auto report = chaos::check_bounds(terms, terms.variance);
    out.worst_slack = std::min(out.worst_slack, report.worst_slack);
    ++out.functions;
  }
  out.rows.push_back(row("chaos-check", 0, "functions", static_cast<double>(out.functions), 0.0, out.functions, 0));
  out.rows.push_back(row("chaos-check", 0, "max_identity_error", out.max_identity_error, 0.0, out.functions, 0));
  out.rows.push_back(row("chaos-check", 0, "worst_bound_slack", out.worst_slack, 0.0, out.functions, 0));
  out.rows.push_back(row("chaos-check", 0, "violations", static_cast<double>(out.violations), 0.0, out.functions, 0));
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

ResolventCheckReport resolvent_check(const SweepConfig& cfg, std::size_t probe_pairs, std::size_t path_columns,
                                     std::size_t threads) {
  validate(cfg);
  ResolventCheckReport out;
  const std::size_t n = cfg.n_list.front();
  if (n < 2) throw ConfigError("resolvent-check needs N >= 2");
  out.n = n;
  const std::size_t trials = trials_for(cfg, n);
  out.trials.resize(trials);
  const double nd = static_cast<double>(n);

  parallel_for(trials, threads, [&](std::size_t t) {
    const SeedContext ctx{cfg.seed, {"resolvent-check:N=" + std::to_string(n), t, "X", 0}};
    const SymmetricMatrix x = sample_wigner(n, cfg.entry, ctx);
    const SpectralCache cache(x);
    const EdgeSpectrum edge = cache.edge();
    ResolventTrial& r = out.trials[t];
    if (is_degenerate(edge, n)) {
      r.excluded = true;
      return;
    }
    const double eta_loc = std::pow(nd, -0.25);
    const auto loc = edge_localization_check(cache, 1, edge.lambda1, eta_loc);
    r.localization_holds = loc.holds;
    r.localization_value = loc.value;
    r.localization_bound = loc.lower_bound;

    const IndexPairSet probe = sample_pair_set(n, std::min(probe_pairs, pair_count(n)), ctx.with_purpose("probe"));
    const auto rec = eigvec_from_resolvent(cache, edge.gap / 10.0, probe.pairs);
    r.reconstruction_deviation = rec.max_deviation;
    r.reconstruction_scale = rec.scaled_sup_sq;

    const SpectralPoint z_edge(edge.lambda1, std::pow(nd, -1.0 / 6.0));
    IndexPairs path_pairs;
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < std::min(path_columns, probe.size()); ++c) {
      path_pairs.push_back(probe.pairs[c]);
      columns.push_back(probe.pairs[c].second);
    }
    const auto eig = resolvent_entries(cache, z_edge, path_pairs);
    const auto solve = resolvent_entries(x, z_edge, path_pairs, ResolventPath::linear_solve);
    for (std::size_t c = 0; c < path_pairs.size(); ++c) {
      r.path_disagreement =
          std::max(r.path_disagreement, std::abs(eig.values[c] - solve.values[c]) / std::max(1.0, std::abs(eig.values[c])));
    }
    r.identity_residual = resolvent_identity_residual(x, cache, z_edge, columns);
    r.diagonal_zeroing = diagonal_zeroing_report(x, cache, SpectralPoint(edge.lambda1, eta_loc)).scaled_max_diff;
    r.max_offdiag = local_law_diagnostics(cache, z_edge).max_offdiag;
  });

  std::vector<double> holds, rec_ok, rec_ratio, disagreement, residual, zeroing, offdiag;
  std::size_t excluded = 0;
  for (const auto& r : out.trials) {
    if (r.excluded) {
      ++excluded;
      continue;
    }
    holds.push_back(r.localization_holds ? 1.0 : 0.0);
    rec_ok.push_back(r.reconstruction_deviation <= 0.05 * r.reconstruction_scale ? 1.0 : 0.0);
    rec_ratio.push_back(r.reconstruction_deviation / r.reconstruction_scale);
    disagreement.push_back(r.path_disagreement);
    residual.push_back(r.identity_residual);
    zeroing.push_back(r.diagonal_zeroing);
    offdiag.push_back(r.max_offdiag);
  }
  auto add_mean = [&](const std::string& name, const std::vector<double>& xs) {
    out.rows.push_back(row("resolvent-check", n, name, stats::mean(xs), stats::standard_error(xs), xs.size(), excluded));
  };
  auto add_max = [&](const std::string& name, const std::vector<double>& xs) {
    const double m = xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end());
    out.rows.push_back(row("resolvent-check", n, name, m, 0.0, xs.size(), excluded));
  };
  add_mean("localization_fraction", holds);
  add_mean("reconstruction_fraction_within_5pct", rec_ok);
  add_mean("reconstruction_relative_deviation", rec_ratio);
  add_max("path_disagreement_max", disagreement);
  add_max("identity_residual_max", residual);
  add_mean("diagonal_zeroing_scaled", zeroing);
  add_mean("local_law_max_offdiag", offdiag);
  out.rows.push_back(row("resolvent-check", n, "log_scale_L", scale_L(n), 0.0, 1, 0));
  out.rows = select_statistics(cfg, std::move(out.rows));
  return out;
}

}  // namespace wnoise
