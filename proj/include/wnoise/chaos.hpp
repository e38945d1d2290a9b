#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wnoise/ensemble.hpp"
#include "wnoise/rng.hpp"
#include "wnoise/spectral.hpp"

namespace wnoise::chaos {

/// Finitely supported law of one coordinate.
struct FiniteLaw {
  std::vector<double> values;
  std::vector<double> probs;

  static FiniteLaw rademacher();
};

using CoordinateSampler = std::function<double(RandomStream&)>;

/// Law of n independent coordinates, either all finitely supported (exact mode
/// available) or given by samplers (Monte Carlo only).
class ProductSpace {
 public:
  static ProductSpace finite(std::vector<FiniteLaw> laws);
  static ProductSpace iid_finite(std::size_t n, const FiniteLaw& law);
  static ProductSpace sampled(std::vector<CoordinateSampler> samplers);
  static ProductSpace iid_sampled(std::size_t n, const CoordinateSampler& sampler);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] bool is_finite() const noexcept { return !laws_.empty(); }
  [[nodiscard]] const FiniteLaw& law(std::size_t i) const;
  [[nodiscard]] double sample(std::size_t i, RandomStream& rng) const;

 private:
  std::size_t n_ = 0;
  std::vector<FiniteLaw> laws_;
  std::vector<CoordinateSampler> samplers_;
};

/// Deterministic real function of n coordinates.
struct BlackBoxFunction {
  std::size_t arity = 0;
  std::function<double(std::span<const double>)> evaluate;

  double operator()(std::span<const double> x) const { return evaluate(x); }
};

enum class Mode { exact, monte_carlo };

/// Terms B_i and B'_i of the resampling-order variance decomposition.
///
/// `order[t]` is the 1-based i of entry t. Exact mode always covers i = 1..n.
struct DecompositionTerms {
  Mode mode = Mode::exact;
  std::vector<std::size_t> order;
  std::vector<double> b;
  std::vector<double> b_prime;
  std::vector<double> b_se;        // Monte Carlo only
  std::vector<double> b_prime_se;  // Monte Carlo only
  double variance = 0.0;
  double variance_se = 0.0;  // Monte Carlo only
  std::size_t trials = 0;
  std::size_t n = 0;
};

/// Hard caps for exact enumeration.
inline constexpr double kVarianceBudget = 1e7;
inline constexpr double kDecompositionBudget = 1e8;

/// Var f(X) by weighted enumeration of all assignments.
double variance_exact(const BlackBoxFunction& f, const ProductSpace& space);

/// Exact B_i, B'_i for i = 1..n via the subset form: B_i averages over a uniform
/// (i-1)-subset A and a uniform j outside A of
///   E[(f(X) - f(X^{(j)})) (f(X^A) - f(X^{A+j}))],
/// which equals the average over resampling orders. B'_i replaces coordinate j by a
/// third copy X'' in both factors, with A uniform over all (i-1)-subsets.
DecompositionTerms decomposition_exact(const BlackBoxFunction& f, const ProductSpace& space);

/// Monte Carlo estimates of B_i and B'_i for the requested 1-based i values. Each
/// trial draws fresh (X, X', X'', order, j) and reuses them for every i.
DecompositionTerms decomposition_mc(const BlackBoxFunction& f, const ProductSpace& space,
                                    std::vector<std::size_t> i_list, std::size_t trials, const SeedContext& seed,
                                    std::size_t threads = 1);

/// Outcome of the monotonicity and 1/k bounds.
struct BoundsReport {
  bool monotone = true;         // B_i >= B_{i+1}
  bool last_nonnegative = true;  // B_n >= 0 (only when i = n is present)
  bool b_bound = true;          // B_k <= 2 Var / k
  bool b_prime_bound = true;    // B'_k <= (2 Var / k)(n + 1)/n
  double worst_slack = 0.0;     // most negative margin seen (0 if none)
  std::vector<std::string> violations;

  [[nodiscard]] bool all_hold() const noexcept { return monotone && last_nonnegative && b_bound && b_prime_bound; }
};

/// Exact mode: tolerance 1e-10, throws InvariantViolation on any failure.
/// Monte Carlo mode: each comparison gets `se_multiplier` combined standard errors of
/// slack and the result is only reported.
BoundsReport check_bounds(const DecompositionTerms& terms, double variance, double se_multiplier = 4.0);

/// A_i for a fixed order and the same quantity with an extra coordinate `extra`
/// added to both resampled sets. Used to check A_i >= A_{i+1}-form >= 0 directly.
struct FixedOrderTerms {
  double base = 0.0;
  double with_extra = 0.0;
};
FixedOrderTerms fixed_order_terms(const BlackBoxFunction& f, const ProductSpace& space,
                                  const std::vector<std::size_t>& order, std::size_t i, std::size_t extra);

struct Problem {
  ProductSpace space;
  BlackBoxFunction f;
};

/// The top eigenvalue of a Wigner matrix as a function of its n = N(N+1)/2
/// upper-triangle entries (row-major order), with the matching sampler space.
Problem eigenvalue_adapter(std::size_t n_dim, const EntrySpec& spec, const SolverOptions& opts = {});

/// Random functions given by a value table over n two-point coordinates, n cycling
/// through 1..max_n. Support points, probabilities and table values are all drawn
/// from `seed`.
std::vector<Problem> random_table_corpus(std::size_t count, std::size_t max_n, const SeedContext& seed);

}  // namespace wnoise::chaos
