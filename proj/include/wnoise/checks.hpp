#pragma once

#include <cstddef>
#include <vector>

#include "wnoise/experiments.hpp"

namespace wnoise {

struct ChaosCheckReport {
  std::size_t functions = 0;
  double max_identity_error = 0.0;  // max |Var - 1/2 sum B_i|
  double worst_slack = 0.0;         // most negative bound margin over the corpus
  std::size_t violations = 0;
  std::vector<ResultRow> rows;
};

/// Exact decomposition over cfg.chaos_corpus random table functions with up to
/// cfg.chaos_max_n coordinates. Throws InvariantViolation on the first function
/// that breaks the identity or a bound by more than 1e-10.
ChaosCheckReport chaos_check(const SweepConfig& cfg);

struct ResolventTrial {
  bool excluded = false;
  bool localization_holds = false;
  double localization_value = 0.0;
  double localization_bound = 0.0;
  double reconstruction_deviation = 0.0;
  double reconstruction_scale = 0.0;  // N ||v||_inf^2
  double path_disagreement = 0.0;     // max |R_eig - R_solve| / max(1, |R_eig|)
  double identity_residual = 0.0;
  double diagonal_zeroing = 0.0;      // 4 N eta max_i |R_0,ii - R_ii|
  double max_offdiag = 0.0;
};

struct ResolventCheckReport {
  std::size_t n = 0;
  std::vector<ResolventTrial> trials;
  std::vector<ResultRow> rows;
};

/// Per trial at N = cfg.n_list.front(): the edge localization bound at E = lambda_1,
/// eta = N^{-1/4}; eigenvector reconstruction at z = lambda_1 + i gap/10 over
/// `probe_pairs` random index pairs; agreement of the two resolvent paths at
/// z = lambda_1 + i N^{-1/6} on a few entries; the diagonal-zeroing and local-law
/// diagnostics.
ResolventCheckReport resolvent_check(const SweepConfig& cfg, std::size_t probe_pairs = 100,
                                     std::size_t path_columns = 4, std::size_t threads = 1);

}  // namespace wnoise
