#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "wnoise/ensemble.hpp"
#include "wnoise/errors.hpp"

using namespace wnoise;

namespace {

struct LawMoments {
  EntryLaw law;
  double mu4;
};

}  // namespace

TEST_SUITE("ensemble") {
  TEST_CASE("pair index round trip") {
    for (std::size_t n : {1, 2, 3, 7, 50}) {
      std::size_t expect = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          CHECK(pair_index(n, i, j) == expect);
          const auto [a, b] = pair_from_index(n, expect);
          CHECK(a == i);
          CHECK(b == j);
          ++expect;
        }
      }
      CHECK(expect == pair_count(n));
    }
  }

  TEST_CASE("N = 1 matrix") {
    const EntrySpec spec{EntryLaw::gaussian, 1.0, 0.5};
    const auto x = sample_wigner(1, spec, {3, {"t", 0, "X", 0}});
    CHECK(x.dim() == 1);
    CHECK(x.upper().size() == 1);
    CHECK(x(0, 0) == x(0, 0));
  }

  TEST_CASE("logical matrix is symmetric") {
    const auto x = sample_wigner(9, {}, {3, {"t", 0, "X", 0}});
    const auto d = x.to_dense();
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j) CHECK(x(i, j) == x(j, i));
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(SymmetricMatrix::from_dense(d) == x);
  }

  TEST_CASE("unknown entry law tag is a config error") {
    CHECK_THROWS_AS(parse_entry_law("cauchy"), ConfigError);
    for (auto law : {EntryLaw::rademacher, EntryLaw::gaussian, EntryLaw::uniform_scaled, EntryLaw::symmetrized_exponential})
      CHECK(parse_entry_law(to_string(law)) == law);
  }

  TEST_CASE("rademacher N = 200 pooled off-diagonal variance") {
    const auto x = sample_wigner(200, {EntryLaw::rademacher, std::sqrt(2.0), 0.5}, {11, {"t", 0, "X", 0}});
    std::vector<double> off;
    for (std::size_t i = 0; i < 200; ++i)
      for (std::size_t j = i + 1; j < 200; ++j) off.push_back(x(i, j));
    REQUIRE(off.size() == 19900);
    const double m = static_cast<double>(off.size());
    double mean = 0, ss = 0;
    for (double v : off) mean += v;
    mean /= m;
    for (double v : off) ss += (v - mean) * (v - mean);
    const double s2 = ss / (m - 1);
    CHECK(std::abs(s2 - 1.0) <= 3 * std::sqrt(oracle::sample_variance_variance(1.0, 1.0, m)));
  }

  TEST_CASE("every entry law has mean 0 and unit variance; diagonal has variance sigma0^2") {
    const LawMoments laws[] = {{EntryLaw::rademacher, 1.0},
                               {EntryLaw::gaussian, 3.0},
                               {EntryLaw::uniform_scaled, 9.0 / 5.0},
                               {EntryLaw::symmetrized_exponential, 6.0}};
    for (const auto& lm : laws) {
      CAPTURE(to_string(lm.law));
      const EntrySpec spec{lm.law, 0.7, 0.5};
      std::vector<double> off, diag;
      for (std::size_t t = 0; t < 40; ++t) {
        const auto x = sample_wigner(60, spec, {5, {"laws", t, "X", 0}});
        for (std::size_t i = 0; i < 60; ++i) {
          diag.push_back(x(i, i));
          for (std::size_t j = i + 1; j < 60; ++j) off.push_back(x(i, j));
        }
      }
      const double m = static_cast<double>(off.size());
      const auto s = oracle::summarize(off);
      CHECK(std::abs(s.mean) < 3.5 / std::sqrt(m));
      double ss = 0;
      for (double v : off) ss += (v - s.mean) * (v - s.mean);
      CHECK(std::abs(ss / (m - 1) - 1.0) < 3.5 * std::sqrt(oracle::sample_variance_variance(1.0, lm.mu4, m)));
      const double md = static_cast<double>(diag.size());
      double ssd = 0;
      for (double v : diag) ssd += v * v;
      const double s2 = 0.49;
      CHECK(std::abs(ssd / md - s2) <= 1e-12 + 3.5 * std::sqrt((lm.mu4 - 1.0) * s2 * s2 / md));
      double biggest = 0;
      for (double v : off) biggest = std::max(biggest, std::abs(v));
      CHECK(biggest < 40.0);
    }
  }

  TEST_CASE("pair set edge cases") {
    const auto all = sample_pair_set(3, 6, {1, {"p", 0, "S", 0}});
    std::set<std::pair<std::size_t, std::size_t>> got(all.pairs.begin(), all.pairs.end());
    CHECK(got == std::set<std::pair<std::size_t, std::size_t>>{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}});
    CHECK(sample_pair_set(17, 0, {1, {"p", 0, "S", 0}}).size() == 0);
    CHECK_THROWS_AS(sample_pair_set(3, 7, {1, {"p", 0, "S", 0}}), DomainError);
    try {
      sample_pair_set(3, 7, {1, {"p", 0, "S", 0}});
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("N=3") != std::string::npos);
    }
  }

  TEST_CASE("pair set draws are distinct and prefixes nest") {
    const SeedContext ctx{9, {"nest", 0, "S", 0}};
    const auto big = sample_pair_set(40, 500, ctx);
    std::set<std::pair<std::size_t, std::size_t>> seen(big.pairs.begin(), big.pairs.end());
    CHECK(seen.size() == 500);
    for (auto [i, j] : big.pairs) CHECK_UNARY(i <= j && j < 40);
    for (std::size_t k : {0, 1, 37, 499}) CHECK(sample_pair_set(40, k, ctx).pairs == big.prefix(k).pairs);
  }

  TEST_CASE("pair inclusion frequency N = 10, k = 5") {
    const std::size_t reps = 100000;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
    for (std::size_t r = 0; r < reps; ++r)
      for (auto p : sample_pair_set(10, 5, {2, {"freq", r, "S", 0}}).pairs) ++counts[p];
    REQUIRE(counts.size() == 55);
    const double p = 5.0 / 55.0;
    const double se = std::sqrt(p * (1 - p) / reps);
    std::size_t outside = 0;
    for (const auto& [pair, c] : counts) outside += std::abs(double(c) / reps - p) > 3 * se;
    CHECK(outside == 0);
  }

  TEST_CASE("apply_resample coupling") {
    const EntrySpec spec;
    const auto x = sample_wigner(30, spec, {4, {"c", 0, "X", 0}});
    CHECK(apply_resample(x, IndexPairSet{30, {}}, spec, {4, {"c", 0, "Xp", 0}}) == x);
    const auto s = sample_pair_set(30, 100, {4, {"c", 0, "S", 0}});
    const auto xk = apply_resample(x, s, spec, {4, {"c", 0, "Xp", 0}});
    std::set<std::pair<std::size_t, std::size_t>> in_s(s.pairs.begin(), s.pairs.end());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = i; j < 30; ++j) {
        if (in_s.count({i, j}) == 0)
          CHECK(xk(i, j) == x(i, j));
        else
          changed += xk(i, j) != x(i, j);
      }
    }
    CHECK(changed == 100);
    CHECK_THROWS_AS(apply_resample(x, IndexPairSet{29, {}}, spec, {4, {"c", 0, "Xp", 0}}), DomainError);
  }

  TEST_CASE("nested resample sets give nested matrices") {
    const EntrySpec spec;
    const auto x = sample_wigner(20, spec, {4, {"n", 0, "X", 0}});
    const SeedContext rep{4, {"n", 0, "Xp", 0}};
    const auto s = sample_pair_set(20, 80, {4, {"n", 0, "S", 0}});
    const auto small = apply_resample(x, s.prefix(30), spec, rep);
    const auto large = apply_resample(x, s, spec, rep);
    for (std::size_t t = 0; t < 30; ++t) {
      const auto [i, j] = s.pairs[t];
      CHECK(small(i, j) == large(i, j));
    }
  }

  TEST_CASE("full resample is independent of X") {
    const EntrySpec spec{EntryLaw::rademacher, 1.0, 0.5};
    double sxy = 0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < 2000; ++t) {
      const auto x = sample_wigner(8, spec, {6, {"ind", t, "X", 0}});
      const auto all = sample_pair_set(8, pair_count(8), {6, {"ind", t, "S", 0}});
      const auto xk = apply_resample(x, all, spec, {6, {"ind", t, "Xp", 0}});
      for (std::size_t c = 0; c < x.upper().size(); ++c) {
        sxy += x.upper()[c] * xk.upper()[c];
        ++count;
      }
    }
    // Rademacher entries: correlation estimate is the mean product, SE 1/sqrt(count).
    CHECK(std::abs(sxy / count) < 3.0 / std::sqrt(double(count)));
  }

  TEST_CASE("resampled matrix keeps the entry moments") {
    const EntrySpec spec;
    std::vector<double> entries;
    for (std::size_t t = 0; t < 20; ++t) {
      const auto x = sample_wigner(40, spec, {8, {"inv", t, "X", 0}});
      const auto s = sample_pair_set(40, 400, {8, {"inv", t, "S", 0}});
      const auto xk = apply_resample(x, s, spec, {8, {"inv", t, "Xp", 0}});
      for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = i + 1; j < 40; ++j) entries.push_back(xk(i, j));
    }
    const double m = static_cast<double>(entries.size());
    const auto s = oracle::summarize(entries);
    CHECK(std::abs(s.mean) < 3 / std::sqrt(m));
    double ss = 0;
    for (double v : entries) ss += (v - s.mean) * (v - s.mean);
    CHECK(std::abs(ss / (m - 1) - 1.0) < 3 * std::sqrt(oracle::sample_variance_variance(1.0, 3.0, m)));
  }

  TEST_CASE("resample_single changes one position") {
    const EntrySpec spec;
    const auto x = sample_wigner(12, spec, {4, {"s", 0, "X", 0}});
    const auto y = resample_single(x, 3, 7, spec, {4, {"s", 0, "flip", 0}});
    std::size_t diff = 0;
    for (std::size_t c = 0; c < x.upper().size(); ++c) diff += x.upper()[c] != y.upper()[c];
    CHECK(diff <= 1);
    CHECK(y(7, 3) == y(3, 7));
    CHECK_THROWS_AS(resample_single(x, 7, 3, spec, {4, {"s", 0, "flip", 0}}), DomainError);
    CHECK_THROWS_AS(resample_single(x, 3, 12, spec, {4, {"s", 0, "flip", 0}}), DomainError);
    CHECK(resample_single(x, 3, 7, spec, {4, {"s", 0, "flip", 0}}) == y);
  }

  TEST_CASE("resample_single draws from the entry law") {
    const EntrySpec spec{EntryLaw::uniform_scaled, 1.0, 0.5};
    const auto x = sample_wigner(5, spec, {4, {"m", 0, "X", 0}});
    std::vector<double> vals;
    for (std::size_t t = 0; t < 20000; ++t) vals.push_back(resample_single(x, 1, 4, spec, {4, {"m", t, "flip", 0}})(1, 4));
    const double m = static_cast<double>(vals.size());
    const auto s = oracle::summarize(vals);
    CHECK(std::abs(s.mean) < 3 / std::sqrt(m));
    double ss = 0;
    for (double v : vals) ss += (v - s.mean) * (v - s.mean);
    CHECK(std::abs(ss / (m - 1) - 1.0) < 3 * std::sqrt(oracle::sample_variance_variance(1.0, 9.0 / 5.0, m)));
  }

  TEST_CASE("identical seed reproduces the matrix") {
    const SeedContext ctx{77, {"det", 5, "X", 0}};
    CHECK(sample_wigner(33, {}, ctx) == sample_wigner(33, {}, ctx));
    CHECK_FALSE(sample_wigner(33, {}, ctx) == sample_wigner(33, {}, ctx.with_trial(6)));
  }
}
