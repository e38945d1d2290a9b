#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wnoise/chaos.hpp"
#include "wnoise/errors.hpp"
#include "wnoise/stats.hpp"

using namespace wnoise;
using namespace wnoise::chaos;

namespace {

std::vector<oracle::Law> to_oracle(const ProductSpace& space) {
  std::vector<oracle::Law> laws;
  for (std::size_t c = 0; c < space.n(); ++c) laws.push_back({space.law(c).values, space.law(c).probs});
  return laws;
}

oracle::Fn to_oracle(const BlackBoxFunction& f) {
  return [f](const std::vector<double>& x) { return f(x); };
}

BlackBoxFunction fn(std::size_t n, std::function<double(std::span<const double>)> g) { return {n, std::move(g)}; }

const BlackBoxFunction kFirst = fn(3, [](std::span<const double> x) { return x[0]; });

}  // namespace

TEST_SUITE("chaos") {
  TEST_CASE("exact variance anchors") {
    const auto space = ProductSpace::iid_finite(3, FiniteLaw::rademacher());
    CHECK(variance_exact(fn(3, [](std::span<const double>) { return 4.2; }), space) == doctest::Approx(0.0));
    CHECK(variance_exact(kFirst, space) == doctest::Approx(1.0));
    const auto majority = fn(3, [](std::span<const double> x) { return x[0] + x[1] + x[2] > 0 ? 1.0 : -1.0; });
    CHECK(variance_exact(majority, space) == doctest::Approx(1.0));
  }

  TEST_CASE("f = X1 with three Rademacher coordinates gives B_i = 2/3") {
    const auto terms = decomposition_exact(kFirst, ProductSpace::iid_finite(3, FiniteLaw::rademacher()));
    for (double b : terms.b) CHECK(std::abs(b - 2.0 / 3.0) <= 1e-10);
    CHECK(std::abs(0.5 * std::accumulate(terms.b.begin(), terms.b.end(), 0.0) - 1.0) <= 1e-10);
  }

  TEST_CASE("additive functions give B_i = 2") {
    for (std::size_t n = 1; n <= 5; ++n) {
      // A three-point unit-variance law as well as Rademacher.
      const FiniteLaw three{{-std::sqrt(1.5), 0.0, std::sqrt(1.5)}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
      for (const auto& law : {FiniteLaw::rademacher(), three}) {
        if (law.values.size() == 3 && n > 4) continue;
        const auto sum = fn(n, [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); });
        const auto terms = decomposition_exact(sum, ProductSpace::iid_finite(n, law));
        for (double b : terms.b) CHECK(std::abs(b - 2.0) <= 1e-10);
        CHECK(std::abs(terms.variance - double(n)) <= 1e-10);
      }
    }
  }

  TEST_CASE("f = X1 X2 against the enumeration oracle") {
    const auto space = ProductSpace::iid_finite(2, FiniteLaw::rademacher());
    const auto f = fn(2, [](std::span<const double> x) { return x[0] * x[1]; });
    const auto terms = decomposition_exact(f, space);
    const auto oracle_b = oracle::b_permutation_form(to_oracle(f), to_oracle(space));
    const auto oracle_bp = oracle::b_prime_permutation_form(to_oracle(f), to_oracle(space));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(terms.b[i] - oracle_b[i]) <= 1e-12);
      CHECK(std::abs(terms.b_prime[i] - oracle_bp[i]) <= 1e-12);
    }
    CHECK(terms.b[0] == doctest::Approx(2.0));
    CHECK(std::abs(terms.b[1]) <= 1e-12);
    CHECK(terms.b[0] >= terms.b[1]);
    CHECK(0.5 * (terms.b[0] + terms.b[1]) == doctest::Approx(1.0));
  }

  TEST_CASE("subset form equals the permutation average and B' matches its oracle") {
    const auto corpus = random_table_corpus(30, 3, {5, {"corpus", 0, "t", 0}});
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      CAPTURE(t);
      const auto& [space, f] = corpus[t];
      const auto terms = decomposition_exact(f, space);
      const auto b = oracle::b_permutation_form(to_oracle(f), to_oracle(space));
      const auto bp = oracle::b_prime_permutation_form(to_oracle(f), to_oracle(space));
      for (std::size_t i = 0; i < space.n(); ++i) {
        CHECK(std::abs(terms.b[i] - b[i]) <= 1e-10);
        CHECK(std::abs(terms.b_prime[i] - bp[i]) <= 1e-10);
      }
      CHECK(std::abs(terms.variance - oracle::variance(to_oracle(f), to_oracle(space))) <= 1e-10);
    }
  }

  TEST_CASE("identity, monotone chain and bounds on a corpus of 120 functions") {
    const auto corpus = random_table_corpus(120, 4, {6, {"corpus", 0, "t", 0}});
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      CAPTURE(t);
      const auto& [space, f] = corpus[t];
      const auto terms = decomposition_exact(f, space);
      const std::size_t n = space.n();
      CHECK(std::abs(terms.variance - 0.5 * std::accumulate(terms.b.begin(), terms.b.end(), 0.0)) <= 1e-10);
      for (std::size_t i = 0; i + 1 < n; ++i) CHECK(terms.b[i] >= terms.b[i + 1] - 1e-10);
      CHECK(terms.b[n - 1] >= -1e-10);
      for (std::size_t k = 1; k <= n; ++k) {
        const double bound = 2.0 * terms.variance / double(k);
        CHECK(terms.b[k - 1] <= bound + 1e-10);
        CHECK(terms.b_prime[k - 1] <= bound * (n + 1.0) / n + 1e-10);
        // The intermediate step: B'_i <= ((i-1)/n) B_{i-1} + ((n-i+1)/n) B_i.
        const double prev = k >= 2 ? terms.b[k - 2] : 0.0;
        CHECK(terms.b_prime[k - 1] <= (k - 1.0) / n * prev + (n - k + 1.0) / n * terms.b[k - 1] + 1e-10);
      }
      CHECK_NOTHROW(check_bounds(terms, terms.variance));
    }
  }

  TEST_CASE("check_bounds throws in exact mode and reports in Monte Carlo mode") {
    DecompositionTerms bad;
    bad.mode = Mode::exact;
    bad.n = 2;
    bad.order = {1, 2};
    bad.b = {1.0, 1.5};
    bad.b_prime = {0.0, 0.0};
    bad.variance = 1.0;
    CHECK_THROWS_AS(check_bounds(bad, 1.0), InvariantViolation);
    bad.mode = Mode::monte_carlo;
    bad.b_se = {0.01, 0.01};
    bad.b_prime_se = {0.01, 0.01};
    bad.variance_se = 0.001;
    const auto report = check_bounds(bad, 1.0);
    CHECK_FALSE(report.monotone);
    CHECK_FALSE(report.b_bound);
    CHECK_FALSE(report.all_hold());
    CHECK(report.worst_slack < 0.0);
  }

  TEST_CASE("fixed-order terms: A_i >= A_{i+1} form >= 0") {
    const auto corpus = random_table_corpus(40, 4, {7, {"corpus", 0, "t", 0}});
    for (const auto& [space, f] : corpus) {
      const std::size_t n = space.n();
      if (n < 2) continue;
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      do {
        for (std::size_t i = 1; i < n; ++i) {
          for (std::size_t extra = 0; extra < n; ++extra) {
            if (std::find(order.begin(), order.begin() + i, extra) != order.begin() + i) continue;
            const auto terms = fixed_order_terms(f, space, order, i, extra);
            CHECK(terms.base >= terms.with_extra - 1e-10);
            CHECK(terms.with_extra >= -1e-10);
          }
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }

  TEST_CASE("budget and mode errors") {
    const auto big = ProductSpace::iid_finite(12, FiniteLaw::rademacher());
    const auto sum = fn(12, [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); });
    CHECK_THROWS_AS(decomposition_exact(sum, big), BudgetError);
    const auto sampled = ProductSpace::iid_sampled(3, [](RandomStream& r) { return r.normal(); });
    CHECK_THROWS_AS(decomposition_exact(kFirst, sampled), DomainError);
    CHECK_THROWS_AS(variance_exact(kFirst, sampled), DomainError);
    CHECK_THROWS_AS(ProductSpace::finite({FiniteLaw{{0, 1}, {0.5, 0.6}}}), DomainError);
  }

  TEST_CASE("Monte Carlo: additive gaussian, n = 10") {
    const auto space = ProductSpace::iid_sampled(10, [](RandomStream& r) { return r.normal(); });
    const auto sum = fn(10, [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); });
    std::vector<std::size_t> all(10);
    std::iota(all.begin(), all.end(), 1);
    const auto terms = decomposition_mc(sum, space, all, 100000, {3, {"mc", 0, "add", 0}});
    for (std::size_t t = 0; t < 10; ++t) CHECK(std::abs(terms.b[t] - 2.0) <= 4 * terms.b_se[t]);
    for (double se : terms.b_se) CHECK(se > 0.0);
  }

  TEST_CASE("Monte Carlo: f = X1, n = 3") {
    const auto space = ProductSpace::iid_sampled(3, [](RandomStream& r) { return r.uniform() < 0.5 ? -1.0 : 1.0; });
    const auto terms = decomposition_mc(kFirst, space, {1, 2, 3}, 60000, {3, {"mc", 0, "first", 0}});
    for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(terms.b[t] - 2.0 / 3.0) <= 4 * terms.b_se[t]);
  }

  TEST_CASE("Monte Carlo: max of four Rademacher coordinates against exact mode") {
    const auto f = fn(4, [](std::span<const double> x) { return *std::max_element(x.begin(), x.end()); });
    const auto exact = decomposition_exact(f, ProductSpace::iid_finite(4, FiniteLaw::rademacher()));
    const auto space = ProductSpace::iid_sampled(4, [](RandomStream& r) { return r.uniform() < 0.5 ? -1.0 : 1.0; });
    const auto mc = decomposition_mc(f, space, {1, 2, 3, 4}, 60000, {3, {"mc", 0, "max", 0}});
    for (std::size_t t = 0; t < 4; ++t) {
      CHECK(std::abs(mc.b[t] - exact.b[t]) <= 4 * mc.b_se[t]);
      CHECK(std::abs(mc.b_prime[t] - exact.b_prime[t]) <= 4 * mc.b_prime_se[t]);
    }
    CHECK(std::abs(mc.variance - exact.variance) <= 4 * mc.variance_se);
  }

  TEST_CASE("Monte Carlo is deterministic and thread-count independent") {
    const auto f = fn(4, [](std::span<const double> x) { return x[0] * x[1] + x[2] - x[3] * x[0]; });
    const auto space = ProductSpace::iid_sampled(4, [](RandomStream& r) { return r.normal(); });
    const auto a = decomposition_mc(f, space, {1, 3}, 5000, {9, {"mc", 0, "det", 0}}, 1);
    const auto b = decomposition_mc(f, space, {1, 3}, 5000, {9, {"mc", 0, "det", 0}}, 3);
    CHECK(a.b == b.b);
    CHECK(a.b_prime == b.b_prime);
    CHECK(a.variance == b.variance);
  }

  TEST_CASE("eigenvalue adapter, N = 1: B'_1 = 2 sigma0^2") {
    EntrySpec spec;
    spec.diag_sigma0 = 1.5;
    const auto problem = eigenvalue_adapter(1, spec);
    CHECK(problem.space.n() == 1);
    const auto mc = decomposition_mc(problem.f, problem.space, {1}, 40000, {4, {"adapter", 1, "mc", 0}});
    CHECK(std::abs(mc.b_prime[0] - 2.0 * 2.25) <= 4 * mc.b_prime_se[0]);
  }

  TEST_CASE("eigenvalue adapter, N = 2: B'_1 against a definitional Monte Carlo") {
    // With an empty resampled set B'_1 = E[(lambda(X) - lambda(X^{(j)}))^2], j uniform
    // over the three positions and X^{(j)} redrawn at j. Oracle: the standard
    // library generator and a closed-form 2x2 top eigenvalue.
    const EntrySpec spec;
    const auto problem = eigenvalue_adapter(2, spec);
    const auto mc = decomposition_mc(problem.f, problem.space, {1}, 40000, {4, {"adapter", 2, "mc", 0}});
    std::mt19937_64 gen(99);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> pick(0, 2);
    auto top = [](double a, double b, double d) { return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b); };
    std::vector<double> sq;
    const double s0 = spec.diag_sigma0;
    for (int t = 0; t < 200000; ++t) {
      double e[3] = {s0 * normal(gen), normal(gen), s0 * normal(gen)};
      const double before = top(e[0], e[1], e[2]);
      const int j = pick(gen);
      e[j] = (j == 1 ? 1.0 : s0) * normal(gen);
      const double after = top(e[0], e[1], e[2]);
      sq.push_back((before - after) * (before - after));
    }
    const auto ref = oracle::summarize(sq);
    CHECK(std::abs(mc.b_prime[0] - ref.mean) <= 4 * std::hypot(mc.b_prime_se[0], ref.se));
  }

  TEST_CASE("eigenvalue adapter, N = 16: B'_k bound within 4 combined SE") {
    const auto problem = eigenvalue_adapter(16, EntrySpec{});
    const auto mc = decomposition_mc(problem.f, problem.space, {1, 8, 64}, 3000, {4, {"adapter", 16, "mc", 0}});
    const auto report = check_bounds(mc, mc.variance, 4.0);
    CHECK(report.b_prime_bound);
    CHECK(report.b_bound);
  }
}
