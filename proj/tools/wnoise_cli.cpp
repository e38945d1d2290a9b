// Command-line front end: runs one experiment, writes <out-dir>/<command>.csv, a
// manifest alongside, and an SVG for the overlap, variance and collapse runs.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wnoise/checks.hpp"
#include "wnoise/config.hpp"
#include "wnoise/errors.hpp"
#include "wnoise/experiments.hpp"
#include "wnoise/parallel.hpp"
#include "wnoise/results_io.hpp"
#include "wnoise/svg_plot.hpp"

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  std::size_t threads = 0;
  std::optional<std::size_t> trials;
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> k_list;
};

wnoise::SweepConfig effective_config(const GlobalOptions& g) {
  wnoise::SweepConfig cfg = g.config.empty() ? wnoise::SweepConfig{} : wnoise::parse_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.trials) cfg.trials = *g.trials;
  if (!g.n_list.empty()) cfg.n_list = g.n_list;
  if (!g.k_list.empty()) cfg.k_list = g.k_list;
  wnoise::validate(cfg);
  return cfg;
}

void print_rows(const std::vector<wnoise::ResultRow>& rows) {
  for (const auto& r : rows) {
    std::printf("%-16s N=%-5zu k=%-8zu %-34s %.6g", r.experiment.c_str(), r.n, r.k, r.statistic.c_str(), r.mean);
    if (r.std_error > 0) std::printf(" +- %.3g", r.std_error);
    if (r.excluded > 0) std::printf("  (excluded %zu)", r.excluded);
    if (wnoise::cell_invalid(r)) std::printf("  INVALID");
    std::printf("\n");
  }
}

class Runner {
 public:
  Runner(const GlobalOptions& g, std::string command)
      : g_(g), command_(std::move(command)), started_(wnoise::utc_timestamp()) {}

  void finish(const std::vector<wnoise::ResultRow>& rows, const wnoise::SweepConfig& cfg,
              std::optional<wnoise::PlotKind> plot = std::nullopt) {
    wnoise::RunManifest m;
    m.command = command_;
    m.config_text = wnoise::to_config_text(cfg);
    m.seed = cfg.seed;
    m.started = started_;
    m.threads = wnoise::resolve_threads(g_.threads);
    if (plot) {
      const std::string svg = command_ + ".svg";
      std::filesystem::create_directories(g_.out_dir);
      wnoise::emit_plot(rows, *plot, std::filesystem::path(g_.out_dir) / svg);
      m.outputs.push_back(svg);
    }
    wnoise::write_results(rows, m, g_.out_dir, command_);
    print_rows(rows);
    std::printf("wrote %s/%s.csv\n", g_.out_dir.c_str(), command_.c_str());
  }

 private:
  const GlobalOptions& g_;
  std::string command_;
  std::string started_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise sensitivity of the top eigenvector of Wigner matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config, "key = value config file, or a run manifest (.json)");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = hardware concurrency)")->capture_default_str();
  app.add_option("--trials", g.trials, "trials per cell");
  app.add_option("--N", g.n_list, "dimensions, overrides N_list");
  app.add_option("--k", g.k_list, "absolute resample counts, overrides the multiplier grid");

  auto* sample = app.add_subcommand("sample", "edge spectrum of one sampled matrix per N");
  auto* overlap = app.add_subcommand("overlap-sweep", "mean |<v, v[k]>| over the k grid");
  auto* alignment = app.add_subcommand("alignment-sweep", "sign-aligned l2 and scaled sup distances");
  auto* var_lambda = app.add_subcommand("var-lambda", "variance of the top eigenvalue and its log-log slope");
  auto* drift = app.add_subcommand("drift", "drift of the top eigenvalue under resampling");
  auto* single_flip = app.add_subcommand("single-flip", "eigenvector change from one redrawn entry");
  auto* chaos_check = app.add_subcommand("chaos-check", "exact variance decomposition on a random corpus");
  auto* resolvent_check = app.add_subcommand("resolvent-check", "resolvent identities near the spectral edge");
  auto* collapse = app.add_subcommand("collapse", "overlap at matched k / N^(5/3) across N");
  auto* key_ineq = app.add_subcommand("key-inequality", "(E|<v, v[k]>|)^2 against 2 N^2 Var(lambda) / k");
  auto* plot = app.add_subcommand("plot", "render an SVG from a results CSV");
  std::string plot_input, plot_kind, plot_output;
  plot->add_option("--input", plot_input, "results CSV")->required();
  plot->add_option("--kind", plot_kind, "overlap | variance | collapse")->required();
  plot->add_option("--output", plot_output, "SVG path")->required();
  std::size_t probe_pairs = 100;
  resolvent_check->add_option("--pairs", probe_pairs, "index pairs per reconstruction check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(wnoise::ExitCode::config_error);
  }

  try {
    if (*plot) {
      const auto rows = wnoise::parse_csv(wnoise::read_file(plot_input));
      wnoise::emit_plot(rows, wnoise::parse_plot_kind(plot_kind), plot_output);
      std::printf("wrote %s\n", plot_output.c_str());
      return 0;
    }

    const wnoise::SweepConfig cfg = effective_config(g);
    const std::size_t threads = wnoise::resolve_threads(g.threads);
    Runner runner(g, app.get_subcommands().front()->get_name());

    if (*sample) {
      runner.finish(wnoise::sample_summary(cfg), cfg);
    } else if (*overlap) {
      runner.finish(wnoise::overlap_sweep(cfg, threads), cfg, wnoise::PlotKind::overlap);
    } else if (*alignment) {
      runner.finish(wnoise::alignment_sweep(cfg, threads), cfg);
    } else if (*var_lambda) {
      const auto result = wnoise::lambda_variance_scaling(cfg, threads);
      runner.finish(result.rows, cfg, wnoise::PlotKind::variance);
    } else if (*drift) {
      runner.finish(wnoise::lambda_drift_study(cfg, threads).rows, cfg);
    } else if (*single_flip) {
      std::vector<wnoise::ResultRow> rows;
      for (const auto& s : wnoise::single_flip_study(cfg, threads)) rows.insert(rows.end(), s.rows.begin(), s.rows.end());
      runner.finish(rows, cfg);
    } else if (*chaos_check) {
      runner.finish(wnoise::chaos_check(cfg).rows, cfg);
    } else if (*resolvent_check) {
      const auto report = wnoise::resolvent_check(cfg, probe_pairs, 4, threads);
      runner.finish(report.rows, cfg);
      for (std::size_t t = 0; t < report.trials.size(); ++t) {
        const auto& r = report.trials[t];
        if (!r.excluded && !r.localization_holds)
          throw wnoise::InvariantViolation("edge localization bound failed in trial " + std::to_string(t));
      }
    } else if (*collapse) {
      runner.finish(wnoise::collapse_report(cfg, threads).rows, cfg, wnoise::PlotKind::collapse);
    } else if (*key_ineq) {
      const auto probe = wnoise::key_inequality_probe(cfg, threads);
      runner.finish(probe.rows, cfg);
      for (const auto& c : probe.cells)
        if (!c.holds)
          throw wnoise::InvariantViolation("key inequality fails at N=" + std::to_string(c.n) +
                                           ", k=" + std::to_string(c.k));
    }
    return 0;
  } catch (const wnoise::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(wnoise::ExitCode::invariant_violation);
  }
}
