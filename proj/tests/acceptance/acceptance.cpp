// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: wnoise_acceptance [C1 C2 ...]   (no arguments runs everything)

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wnoise/chaos.hpp"
#include "wnoise/checks.hpp"
#include "wnoise/experiments.hpp"
#include "wnoise/parallel.hpp"
#include "wnoise/results_io.hpp"
#include "wnoise/stats.hpp"
#include "wnoise/svg_plot.hpp"

using namespace wnoise;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* pattern, ...) {
  char buf[1024];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

std::size_t g_threads = 1;

const std::vector<chaos::Problem>& corpus() {
  static const auto c = chaos::random_table_corpus(120, 4, {2024, {"acceptance", 0, "corpus", 0}});
  return c;
}

const std::vector<chaos::DecompositionTerms>& corpus_terms() {
  static const auto terms = [] {
    std::vector<chaos::DecompositionTerms> out;
    for (const auto& [space, f] : corpus()) out.push_back(chaos::decomposition_exact(f, space));
    return out;
  }();
  return terms;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ResultRow& row(const std::vector<ResultRow>& rows, std::size_t n, std::size_t k, const std::string& stat) {
  for (const auto& r : rows)
    if (r.n == n && r.k == k && r.statistic == stat) return r;
  throw std::runtime_error("missing row " + stat);
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& t : corpus_terms())
    worst = std::max(worst, std::abs(t.variance - 0.5 * std::accumulate(t.b.begin(), t.b.end(), 0.0)));
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 60.0 && corpus().size() >= 100,
          fmt("%zu functions, max |Var - sum(B)/2| = %.2e (<= 1e-10), %.1f s (< 60 s)", corpus().size(), worst, secs)};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0;
  double worst = 1e300;
  for (const auto& t : corpus_terms()) {
    const std::size_t n = t.n;
    auto margin = [&](double m) {
      worst = std::min(worst, m);
      violations += m < 0.0;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) margin(t.b[i] - t.b[i + 1] + 1e-10);
    margin(t.b[n - 1] + 1e-10);
    for (std::size_t k = 1; k <= n; ++k) {
      const double bound = 2.0 * t.variance / double(k);
      margin(bound + 1e-10 - t.b[k - 1]);
      margin(bound * (n + 1.0) / n + 1e-10 - t.b_prime[k - 1]);
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 120.0,
          fmt("%zu functions, %zu violations of B_i >= B_{i+1}, B_n >= 0, B_k <= 2Var/k, B'_k <= (2Var/k)(n+1)/n; "
              "worst margin %.2e, %.1f s (< 120 s)",
              corpus().size(), violations, worst, secs)};
}

Outcome c3() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t t = 0; t < corpus().size(); ++t) {
    const auto& [space, f] = corpus()[t];
    if (space.n() != 3) continue;
    std::vector<oracle::Law> laws;
    for (std::size_t c = 0; c < 3; ++c) laws.push_back({space.law(c).values, space.law(c).probs});
    const auto b = oracle::b_permutation_form([&f](const std::vector<double>& x) { return f(x); }, laws);
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(b[i] - corpus_terms()[t].b[i]));
    ++checked;
  }
  return {checked > 0 && worst <= 1e-10,
          fmt("%zu functions with n = 3, max |perm-average B_i - subset-form B_i| = %.2e (<= 1e-10)", checked, worst)};
}

Outcome c4() {
  using chaos::BlackBoxFunction;
  const auto rad3 = chaos::ProductSpace::iid_finite(3, chaos::FiniteLaw::rademacher());
  const auto first = chaos::decomposition_exact(BlackBoxFunction{3, [](std::span<const double> x) { return x[0]; }}, rad3);
  double worst_first = 0.0;
  for (double b : first.b) worst_first = std::max(worst_first, std::abs(b - 2.0 / 3.0));
  double worst_add = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto add = chaos::decomposition_exact(
        BlackBoxFunction{n, [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }},
        chaos::ProductSpace::iid_finite(n, chaos::FiniteLaw::rademacher()));
    for (double b : add.b) worst_add = std::max(worst_add, std::abs(b - 2.0));
  }
  return {worst_first <= 1e-10 && worst_add <= 1e-10,
          fmt("f = X1 (n=3): max |B_i - 2/3| = %.2e; additive (n=1..4): max |B_i - 2| = %.2e (<= 1e-10)", worst_first,
              worst_add)};
}

Outcome c5() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg;
  cfg.n_list = {128, 256, 512, 1024};
  cfg.trials = 800;
  cfg.seed = 5;
  const auto v = lambda_variance_scaling(cfg, g_threads);
  const double secs = seconds_since(t0);
  std::string vars;
  for (std::size_t t = 0; t < v.n_list.size(); ++t) vars += fmt(" Var(%zu)=%.4f", v.n_list[t], v.variance[t]);
  return {v.slope >= -0.50 && v.slope <= -0.15,
          fmt("slope %.3f (bootstrap 95%% CI [%.3f, %.3f]) in [-0.50, -0.15];%s; %.0f s on %zu thread(s)", v.slope,
              v.slope_ci_low, v.slope_ci_high, vars.c_str(), secs, g_threads)};
}

Outcome s5() {
  SweepConfig cfg;
  cfg.n_list = {256, 512};
  cfg.trials = 800;
  cfg.seed = 55;
  const auto v = lambda_variance_scaling(cfg, g_threads);
  const double ratio = v.variance[1] / v.variance[0];
  const double se = ratio * std::hypot(v.variance_se[1] / v.variance[1], v.variance_se[0] / v.variance[0]);
  const double target = std::pow(2.0, -1.0 / 3.0);
  return {std::abs(ratio - target) <= 4 * se,
          fmt("Var(512)/Var(256) = %.3f +- %.3f, within 4 SE of 2^(-1/3) = %.3f", ratio, se, target)};
}

Outcome c6() {
  SweepConfig floor_cfg;
  floor_cfg.n_list = {256};
  floor_cfg.multipliers = {kFullResample};
  floor_cfg.trials = 400;
  floor_cfg.seed = 6;
  const auto floor_rows = overlap_sweep(floor_cfg, g_threads);
  const auto& full = row(floor_rows, 256, pair_count(256), "overlap");
  const double target = std::sqrt(2.0 / (M_PI * 256.0));
  const bool floor_ok = std::abs(full.mean - target) <= 4 * full.std_error;

  SweepConfig cfg;
  cfg.n_list = {512};
  cfg.trials = 400;
  cfg.seed = 6;
  const auto rows = overlap_sweep(cfg, g_threads);
  const auto grid = resolve_k_grid(cfg, 512);
  const auto& zero = row(rows, 512, 0, "overlap");
  const bool zero_ok = zero.mean == 1.0 && zero.std_error == 0.0;
  bool monotone = true;
  double worst = 1e300;
  std::string series;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto& r = row(rows, 512, grid[c].k, "overlap");
    series += fmt(" %.3f", r.mean);
    if (c == 0 || grid[c].k == grid[c - 1].k) continue;
    const auto& prev = row(rows, 512, grid[c - 1].k, "overlap");
    const double slack = prev.mean - r.mean + 2.0 * std::hypot(prev.std_error, r.std_error);
    worst = std::min(worst, slack);
    monotone = monotone && slack >= 0.0;
  }
  return {floor_ok && zero_ok && monotone,
          fmt("k=0 overlap %.17g (SE %g); full N=256 %.4f +- %.4f vs %.4f (4 SE); N=512 grid means%s nonincreasing "
              "within 2 SE (worst slack %.3g)",
              zero.mean, zero.std_error, full.mean, full.std_error, target, series.c_str(), worst)};
}

Outcome c7() {
  SweepConfig cfg;
  cfg.n_list = {256, 512, 1024};
  cfg.multipliers = {0.05, 0.25, 1.0};
  cfg.seed = 1;
  const auto rep = collapse_report(cfg, g_threads);
  bool ok = true;
  std::string detail;
  for (std::size_t c = 0; c < cfg.multipliers.size(); ++c) {
    ok = ok && rep.spread[c] <= 0.15;
    detail += fmt(" m=%.2f: %.4f/%.4f/%.4f spread %.4f;", cfg.multipliers[c], rep.overlap[0][c], rep.overlap[1][c],
                  rep.overlap[2][c], rep.spread[c]);
  }
  return {ok, "overlap at N=256/512/1024:" + detail + " threshold 0.15"};
}

Outcome c8() {
  SweepConfig cfg;
  cfg.n_list = {512};
  cfg.trials = 400;
  cfg.seed = 8;
  const auto probe = key_inequality_probe(cfg, g_threads);
  bool ok = !probe.cells.empty();
  double worst_ratio = 0.0;
  for (const auto& c : probe.cells) {
    ok = ok && c.holds;
    worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
  }
  return {ok, fmt("%zu cells at N=512 (k > 0), all LHS <= RHS + 4 combined SE; max LHS/RHS = %.3g", probe.cells.size(),
                  worst_ratio)};
}

Outcome c9() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {256, 1024}) {
    const auto trials = run_resample_trials(n, {}, 500, {}, 9, SolverOptions{}, g_threads);
    const double bound = 4.0 * std::log(double(n));
    std::size_t within = 0;
    double biggest = 0.0;
    for (const auto& t : trials) {
      within += t.sup_norm_v <= bound;
      biggest = std::max(biggest, t.sup_norm_v);
    }
    ok = ok && within >= 495;
    detail += fmt(" N=%zu: %zu/500 within %.2f (max %.2f);", n, within, bound, biggest);
  }
  return {ok, "sqrt(N)||v||_inf <= 4 log N:" + detail + " need >= 99%"};
}

Outcome c10() {
  SweepConfig cfg;
  cfg.n_list = {256, 512, 1024};
  cfg.trials = 50;
  cfg.pair_samples = 4;
  cfg.seed = 10;
  cfg.bootstrap = 200;
  const auto studies = single_flip_study(cfg, g_threads);
  std::vector<double> medians;
  std::string detail;
  for (const auto& s : studies) {
    medians.push_back(stats::median(s.distances));
    detail += fmt(" N=%zu: median %.4f (%zu pairs);", s.n, medians.back(), s.distances.size());
  }
  const bool ok = medians.size() == 3 && medians[0] > medians[1] && medians[1] > medians[2];
  return {ok, "median sqrt(N) min_s ||v - s u||_inf strictly decreasing:" + detail};
}

Outcome c11() {
  SweepConfig cfg;
  cfg.n_list = {512};
  cfg.k_list = {1, 16, 64};
  cfg.trials = 400;
  cfg.seed = 11;
  const auto d = lambda_drift_study(cfg, g_threads);
  const double res = stats::median(d.first_order_residuals);
  const double term = stats::median(d.first_order_terms);
  const auto ratio = drift_std_ratio(d, 16, 64, 1000, 11);
  const bool ok = res < term && std::abs(ratio.ratio - 2.0) <= 4 * ratio.se;
  return {ok, fmt("N=512 k=1: median residual %.3e < median first-order term %.3e; std ratio k=64/k=16 = %.3f +- %.3f "
                  "(within 4 SE of 2)",
                  res, term, ratio.ratio, ratio.se)};
}

Outcome c12() {
  SweepConfig cfg;
  cfg.n_list = {512};
  cfg.trials = 100;
  cfg.seed = 12;
  const auto rep = resolvent_check(cfg, 100, 4, g_threads);
  std::size_t kept = 0, loc = 0, rec = 0;
  double disagreement = 0.0;
  for (const auto& t : rep.trials) {
    if (t.excluded) continue;
    ++kept;
    loc += t.localization_holds;
    rec += t.reconstruction_deviation <= 0.05 * t.reconstruction_scale;
    disagreement = std::max(disagreement, t.path_disagreement);
  }
  const bool ok = kept == 100 && loc == kept && rec >= 95 && disagreement <= 1e-8;
  return {ok, fmt("N=512: localization bound %zu/%zu; reconstruction within 0.05 N||v||^2 in %zu/%zu (need 95%%); "
                  "max dense vs solve disagreement %.2e (<= 1e-8)",
                  loc, kept, rec, kept, disagreement)};
}

Outcome c13() {
  SweepConfig cfg;
  cfg.n_list = {64, 160};
  cfg.trials = 40;
  cfg.seed = 13;
  cfg.bootstrap = 200;
  bool ok = true;
  std::string detail;
  auto compare = [&](const std::string& name, const std::function<std::vector<ResultRow>(std::size_t)>& run,
                     PlotKind kind) {
    const auto a = run(1), b = run(1), c = run(3);
    const bool same = format_csv(a) == format_csv(b) && format_csv(a) == format_csv(c) &&
                      render_plot(a, kind) == render_plot(b, kind) && render_plot(a, kind) == render_plot(c, kind);
    ok = ok && same;
    detail += fmt(" %s %s;", name.c_str(), same ? "identical" : "DIFFERS");
  };
  compare("overlap-sweep", [&](std::size_t t) { return overlap_sweep(cfg, t); }, PlotKind::overlap);
  compare("var-lambda", [&](std::size_t t) { return lambda_variance_scaling(cfg, t).rows; }, PlotKind::variance);
  compare("collapse", [&](std::size_t t) { return collapse_report(cfg, t).rows; }, PlotKind::collapse);
  compare("alignment-sweep", [&](std::size_t t) { return alignment_sweep(cfg, t); }, PlotKind::overlap);
  compare("drift", [&](std::size_t t) { return lambda_drift_study(cfg, t).rows; }, PlotKind::overlap);
  return {ok, "CSV and SVG bytes across reruns and 1 vs 3 threads:" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  g_threads = resolve_threads(0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1", c1}, {"C2", c2}, {"C3", c3},   {"C4", c4},   {"C5", c5},   {"S5", s5},   {"C6", c6},
      {"C7", c7}, {"C8", c8}, {"C9", c9}, {"C10", c10}, {"C11", c11}, {"C12", c12}, {"C13", c13}};
  std::set<std::string> selected(argv + 1, argv + argc);
  std::size_t failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && selected.count(name) == 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
