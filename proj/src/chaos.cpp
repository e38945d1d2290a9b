#include "wnoise/chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wnoise/errors.hpp"
#include "wnoise/parallel.hpp"

namespace wnoise::chaos {
namespace {

constexpr double kExactTol = 1e-10;

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::size_t t = 1; t <= k; ++t) out = out * static_cast<double>(n - k + t) / static_cast<double>(t);
  return out;
}

// Weighted running mean/variance (West's algorithm).
struct WeightedMoments {
  double weight = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x, double w) {
    if (w <= 0.0) return;
    weight += w;
    const double delta = x - mean;
    mean += delta * w / weight;
    m2 += w * delta * (x - mean);
  }
  [[nodiscard]] double variance() const { return weight > 0.0 ? m2 / weight : 0.0; }
};

// Iterates all assignments of a list of finite laws; calls fn(values, weight).
template <typename Fn>
void enumerate(const std::vector<const FiniteLaw*>& laws, Fn&& fn) {
  const std::size_t m = laws.size();
  std::vector<std::size_t> digit(m, 0);
  std::vector<double> values(m);
  for (std::size_t t = 0; t < m; ++t) values[t] = laws[t]->values[0];
  for (;;) {
    double w = 1.0;
    for (std::size_t t = 0; t < m; ++t) w *= laws[t]->probs[digit[t]];
    fn(std::span<const double>(values), w);
    std::size_t t = 0;
    while (t < m) {
      if (++digit[t] < laws[t]->values.size()) {
        values[t] = laws[t]->values[digit[t]];
        break;
      }
      digit[t] = 0;
      values[t] = laws[t]->values[0];
      ++t;
    }
    if (t == m) return;
  }
}

void require_finite(const ProductSpace& space, const char* who) {
  if (!space.is_finite()) throw DomainError(std::string(who) + " needs finitely supported coordinates");
}

void require_arity(const BlackBoxFunction& f, const ProductSpace& space) {
  if (f.arity != space.n()) throw DomainError("function arity does not match the product space");
}

double assignment_count(const ProductSpace& space, int copies) {
  double total = 1.0;
  for (std::size_t i = 0; i < space.n(); ++i)
    total *= std::pow(static_cast<double>(space.law(i).values.size()), copies);
  return total;
}

struct SampleStats {
  double mean = 0.0;
  double se = 0.0;
};

SampleStats mean_and_se(const std::vector<double>& xs) {
  SampleStats out;
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace

FiniteLaw FiniteLaw::rademacher() { return {{-1.0, 1.0}, {0.5, 0.5}}; }

ProductSpace ProductSpace::finite(std::vector<FiniteLaw> laws) {
  if (laws.empty()) throw DomainError("product space needs n >= 1");
  for (const auto& law : laws) {
    if (law.values.empty() || law.values.size() != law.probs.size())
      throw DomainError("finite law needs matching non-empty values and probabilities");
    double total = 0.0;
    for (double p : law.probs) {
      if (p < 0.0) throw DomainError("negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("probabilities must sum to 1");
  }
  ProductSpace out;
  out.n_ = laws.size();
  out.laws_ = std::move(laws);
  return out;
}

ProductSpace ProductSpace::iid_finite(std::size_t n, const FiniteLaw& law) {
  return finite(std::vector<FiniteLaw>(n, law));
}

ProductSpace ProductSpace::sampled(std::vector<CoordinateSampler> samplers) {
  if (samplers.empty()) throw DomainError("product space needs n >= 1");
  ProductSpace out;
  out.n_ = samplers.size();
  out.samplers_ = std::move(samplers);
  return out;
}

ProductSpace ProductSpace::iid_sampled(std::size_t n, const CoordinateSampler& sampler) {
  return sampled(std::vector<CoordinateSampler>(n, sampler));
}

const FiniteLaw& ProductSpace::law(std::size_t i) const {
  if (!is_finite()) throw DomainError("coordinate laws are only available for finite spaces");
  return laws_.at(i);
}

double ProductSpace::sample(std::size_t i, RandomStream& rng) const {
  if (!is_finite()) return samplers_.at(i)(rng);
  const FiniteLaw& l = laws_.at(i);
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < l.values.size(); ++t) {
    acc += l.probs[t];
    if (u < acc) return l.values[t];
  }
  return l.values.back();
}

double variance_exact(const BlackBoxFunction& f, const ProductSpace& space) {
  require_finite(space, "variance_exact");
  require_arity(f, space);
  if (assignment_count(space, 1) > kVarianceBudget)
    throw BudgetError("variance_exact: assignment count exceeds the enumeration budget");
  std::vector<const FiniteLaw*> laws;
  for (std::size_t i = 0; i < space.n(); ++i) laws.push_back(&space.law(i));
  WeightedMoments moments;
  enumerate(laws, [&](std::span<const double> x, double w) { moments.add(f(x), w); });
  return moments.variance();
}

DecompositionTerms decomposition_exact(const BlackBoxFunction& f, const ProductSpace& space) {
  require_finite(space, "decomposition_exact");
  require_arity(f, space);
  const std::size_t n = space.n();
  if (n > 24) throw BudgetError("decomposition_exact: too many coordinates");
  double per_joint = std::ldexp(1.0, static_cast<int>(n));
  for (std::size_t j = 0; j < n; ++j)
    per_joint += static_cast<double>(space.law(j).values.size()) * std::ldexp(1.0, static_cast<int>(n) - 1);
  if (assignment_count(space, 2) * per_joint > kDecompositionBudget)
    throw BudgetError("decomposition_exact: evaluation count exceeds the enumeration budget");

  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<std::size_t>> by_size(n + 1);
  for (std::size_t mask = 0; mask < subsets; ++mask) by_size[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);

  // Joint enumeration over (X, X'): coordinates [0, n) are X, [n, 2n) are X'.
  std::vector<const FiniteLaw*> laws;
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t i = 0; i < n; ++i) laws.push_back(&space.law(i));

  std::vector<double> b(n, 0.0), bp(n, 0.0);
  std::vector<double> g(subsets), h(subsets);
  std::vector<double> hybrid(n);
  WeightedMoments moments;

  enumerate(laws, [&](std::span<const double> xx, double w) {
    const auto x = xx.subspan(0, n);
    const auto xp = xx.subspan(n, n);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      for (std::size_t c = 0; c < n; ++c) hybrid[c] = (mask >> c & 1u) != 0 ? xp[c] : x[c];
      g[mask] = f(hybrid);
    }
    moments.add(g[0], w);

    for (std::size_t i = 1; i <= n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        const double d0 = g[0] - g[bit];
        for (std::size_t a : by_size[i - 1])
          if ((a & bit) == 0) acc += d0 * (g[a] - g[a | bit]);
      }
      b[i - 1] += w * acc / (static_cast<double>(n) * binomial(n - 1, i - 1));
    }

    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      const FiniteLaw& law = space.law(j);
      for (std::size_t u = 0; u < law.values.size(); ++u) {
        const double q = law.probs[u];
        if (q == 0.0) continue;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
          if ((mask & bit) != 0) continue;
          for (std::size_t c = 0; c < n; ++c) hybrid[c] = (mask >> c & 1u) != 0 ? xp[c] : x[c];
          hybrid[j] = law.values[u];
          h[mask] = f(hybrid);
        }
        const double d0 = g[0] - h[0];
        for (std::size_t i = 1; i <= n; ++i) {
          double acc = 0.0;
          for (std::size_t a : by_size[i - 1]) acc += d0 * (g[a] - h[a & ~bit]);
          bp[i - 1] += w * q * acc / (static_cast<double>(n) * binomial(n, i - 1));
        }
      }
    }
  });

  DecompositionTerms out;
  out.mode = Mode::exact;
  out.n = n;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{1});
  out.b = std::move(b);
  out.b_prime = std::move(bp);
  out.variance = moments.variance();
  return out;
}

DecompositionTerms decomposition_mc(const BlackBoxFunction& f, const ProductSpace& space,
                                    std::vector<std::size_t> i_list, std::size_t trials, const SeedContext& seed,
                                    std::size_t threads) {
  require_arity(f, space);
  if (trials == 0) throw DomainError("decomposition_mc needs at least one trial");
  const std::size_t n = space.n();
  std::sort(i_list.begin(), i_list.end());
  i_list.erase(std::unique(i_list.begin(), i_list.end()), i_list.end());
  if (i_list.empty()) throw DomainError("decomposition_mc needs at least one term index");
  if (i_list.front() < 1 || i_list.back() > n) throw DomainError("term index outside [1, n]");
  const std::size_t terms = i_list.size();
  const std::size_t depth = i_list.back();  // order prefix length needed

  struct TrialOut {
    std::vector<double> b, bp;
    double fx = 0.0;
  };
  std::vector<TrialOut> per_trial(trials);

  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = seed.with_trial(t).stream();
    std::vector<double> x(n), xp(n);
    for (std::size_t c = 0; c < n; ++c) x[c] = space.sample(c, rng);
    for (std::size_t c = 0; c < n; ++c) xp[c] = space.sample(c, rng);
    // Partial Fisher-Yates: order[0..depth) is a uniform random ordered prefix.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t m = 0; m < depth; ++m) std::swap(order[m], order[m + rng.below(n - m)]);
    const std::size_t j = rng.below(n);
    const double x2j = space.sample(j, rng);

    TrialOut& out = per_trial[t];
    out.b.resize(terms);
    out.bp.resize(terms);
    out.fx = f(x);
    std::vector<double> work = x;
    work[j] = x2j;
    const double fxj = f(work);

    std::vector<double> hybrid = x;  // X^{order[0..prefix)}
    std::size_t prefix = 0;
    double f_hybrid = out.fx;
    for (std::size_t t_idx = 0; t_idx < terms; ++t_idx) {
      const std::size_t i = i_list[t_idx];
      if (prefix != i - 1) {
        while (prefix < i - 1) {
          hybrid[order[prefix]] = xp[order[prefix]];
          ++prefix;
        }
        f_hybrid = f(hybrid);
      }
      const std::size_t s = order[i - 1];

      work = x;
      work[s] = xp[s];
      const double f_single = f(work);

      work = hybrid;
      work[s] = xp[s];
      const double f_next = f(work);

      work = hybrid;
      work[j] = x2j;
      const double f_third = f(work);

      out.b[t_idx] = (out.fx - f_single) * (f_hybrid - f_next);
      out.bp[t_idx] = (out.fx - fxj) * (f_hybrid - f_third);

      // X^{order[0..i)} is the next prefix; reuse its value if the next term needs it.
      hybrid[s] = xp[s];
      prefix = i;
      f_hybrid = f_next;
    }
  });

  DecompositionTerms out;
  out.mode = Mode::monte_carlo;
  out.n = n;
  out.trials = trials;
  out.order = i_list;
  std::vector<double> column(trials);
  for (std::size_t t_idx = 0; t_idx < terms; ++t_idx) {
    for (std::size_t t = 0; t < trials; ++t) column[t] = per_trial[t].b[t_idx];
    const auto sb = mean_and_se(column);
    for (std::size_t t = 0; t < trials; ++t) column[t] = per_trial[t].bp[t_idx];
    const auto sbp = mean_and_se(column);
    out.b.push_back(sb.mean);
    out.b_se.push_back(sb.se);
    out.b_prime.push_back(sbp.mean);
    out.b_prime_se.push_back(sbp.se);
  }
  for (std::size_t t = 0; t < trials; ++t) column[t] = per_trial[t].fx;
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(trials);
  double m2 = 0.0, m4 = 0.0;
  for (double v : column) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  const double tn = static_cast<double>(trials);
  out.variance = trials > 1 ? m2 / (tn - 1.0) : 0.0;
  out.variance_se = trials > 1 ? std::sqrt(std::max(0.0, m4 / tn - (m2 / tn) * (m2 / tn)) / tn) : 0.0;
  return out;
}

BoundsReport check_bounds(const DecompositionTerms& terms, double variance, double se_multiplier) {
  const bool exact = terms.mode == Mode::exact;
  const double n = static_cast<double>(terms.n);
  BoundsReport report;
  auto se_of = [&](const std::vector<double>& se, std::size_t t) { return exact || se.empty() ? 0.0 : se[t]; };
  auto record = [&](bool& flag, double margin, const std::string& what) {
    report.worst_slack = std::min(report.worst_slack, margin);
    if (margin < 0.0) {
      flag = false;
      report.violations.push_back(what);
    }
  };
  const double var_se = exact ? 0.0 : terms.variance_se;

  for (std::size_t t = 0; t < terms.order.size(); ++t) {
    const std::size_t i = terms.order[t];
    const double k = static_cast<double>(i);
    const double tol_b = exact ? kExactTol : se_multiplier * std::hypot(se_of(terms.b_se, t), 2.0 * var_se / k);
    std::ostringstream what;
    what << "B_" << i << " = " << terms.b[t] << " exceeds 2Var/k = " << 2.0 * variance / k;
    record(report.b_bound, 2.0 * variance / k + tol_b - terms.b[t], what.str());

    if (!terms.b_prime.empty()) {
      const double rhs = 2.0 * variance / k * (n + 1.0) / n;
      const double tol_bp =
          exact ? kExactTol : se_multiplier * std::hypot(se_of(terms.b_prime_se, t), 2.0 * var_se / k * (n + 1.0) / n);
      std::ostringstream w2;
      w2 << "B'_" << i << " = " << terms.b_prime[t] << " exceeds (2Var/k)(n+1)/n = " << rhs;
      record(report.b_prime_bound, rhs + tol_bp - terms.b_prime[t], w2.str());
    }

    if (t + 1 < terms.order.size()) {
      const double tol_m =
          exact ? kExactTol : se_multiplier * std::hypot(se_of(terms.b_se, t), se_of(terms.b_se, t + 1));
      std::ostringstream w3;
      w3 << "B_" << i << " = " << terms.b[t] << " < B_" << terms.order[t + 1] << " = " << terms.b[t + 1];
      record(report.monotone, terms.b[t] - terms.b[t + 1] + tol_m, w3.str());
    }
    if (i == terms.n) {
      const double tol_n = exact ? kExactTol : se_multiplier * se_of(terms.b_se, t);
      std::ostringstream w4;
      w4 << "B_n = " << terms.b[t] << " is negative";
      record(report.last_nonnegative, terms.b[t] + tol_n, w4.str());
    }
  }
  if (exact && !report.all_hold()) {
    std::string msg = "decomposition bound violated:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw InvariantViolation(msg);
  }
  return report;
}

FixedOrderTerms fixed_order_terms(const BlackBoxFunction& f, const ProductSpace& space,
                                  const std::vector<std::size_t>& order, std::size_t i, std::size_t extra) {
  require_finite(space, "fixed_order_terms");
  require_arity(f, space);
  const std::size_t n = space.n();
  if (order.size() != n) throw DomainError("order must be a permutation of the coordinates");
  if (i < 1 || i >= n) throw DomainError("fixed_order_terms needs 1 <= i <= n-1");
  if (std::find(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i), extra) !=
          order.begin() + static_cast<std::ptrdiff_t>(i) ||
      extra >= n)
    throw DomainError("extra coordinate must lie outside the first i resampled positions");
  if (assignment_count(space, 2) * 6.0 > kDecompositionBudget)
    throw BudgetError("fixed_order_terms: evaluation count exceeds the enumeration budget");

  std::vector<const FiniteLaw*> laws;
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t c = 0; c < n; ++c) laws.push_back(&space.law(c));
  const std::size_t s = order[i - 1];
  FixedOrderTerms out;
  std::vector<double> work(n);
  enumerate(laws, [&](std::span<const double> xx, double w) {
    const auto x = xx.subspan(0, n);
    const auto xp = xx.subspan(n, n);
    auto eval = [&](std::initializer_list<std::size_t> extra_positions, bool with_prefix) {
      std::copy(x.begin(), x.end(), work.begin());
      if (with_prefix)
        for (std::size_t m = 0; m + 1 < i; ++m) work[order[m]] = xp[order[m]];
      for (std::size_t c : extra_positions) work[c] = xp[c];
      return f(work);
    };
    const double single = eval({}, false) - eval({s}, false);
    out.base += w * single * (eval({}, true) - eval({s}, true));
    out.with_extra += w * single * (eval({extra}, true) - eval({s, extra}, true));
  });
  return out;
}

Problem eigenvalue_adapter(std::size_t n_dim, const EntrySpec& spec, const SolverOptions& opts) {
  if (n_dim == 0) throw DomainError("matrix dimension must be at least 1");
  const std::size_t n = pair_count(n_dim);
  std::vector<CoordinateSampler> samplers;
  samplers.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto [i, j] = pair_from_index(n_dim, idx);
    samplers.emplace_back([spec, i, j](RandomStream& rng) { return draw_entry(spec, i, j, rng); });
  }
  BlackBoxFunction f{n, [n_dim, opts](std::span<const double> x) {
                       SymmetricMatrix m(n_dim, std::vector<double>(x.begin(), x.end()));
                       return top_two_eigenvalues(m, opts).lambda1;
                     }};
  return {ProductSpace::sampled(std::move(samplers)), std::move(f)};
}

std::vector<Problem> random_table_corpus(std::size_t count, std::size_t max_n, const SeedContext& seed) {
  if (max_n == 0) throw DomainError("corpus needs max_n >= 1");
  std::vector<Problem> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    RandomStream rng = seed.with_trial(t).stream();
    const std::size_t n = 1 + t % max_n;
    std::vector<FiniteLaw> laws;
    for (std::size_t c = 0; c < n; ++c) {
      const double p = 0.1 + 0.8 * rng.uniform();
      const double a = rng.normal();
      laws.push_back({{a, a + 0.5 + rng.uniform()}, {p, 1.0 - p}});
    }
    std::vector<double> table(std::size_t{1} << n);
    for (auto& v : table) v = rng.normal();
    // Look up the table by which support point each coordinate sits on.
    BlackBoxFunction f{n, [laws, table](std::span<const double> x) {
                         std::size_t mask = 0;
                         for (std::size_t c = 0; c < x.size(); ++c)
                           if (x[c] == laws[c].values[1]) mask |= std::size_t{1} << c;
                         return table[mask];
                       }};
    out.push_back({ProductSpace::finite(std::move(laws)), std::move(f)});
  }
  return out;
}

}  // namespace wnoise::chaos
