#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wnoise/rng.hpp"

namespace wnoise {

/// Off-diagonal entry laws. Every law has mean 0 and variance exactly 1.
enum class EntryLaw {
  rademacher,
  gaussian,
  uniform_scaled,           // uniform on [-sqrt(3), sqrt(3)]
  symmetrized_exponential,  // Laplace with scale 1/sqrt(2)
};

std::string_view to_string(EntryLaw law);
/// Throws ConfigError on an unknown tag.
EntryLaw parse_entry_law(std::string_view tag);

struct EntrySpec {
  EntryLaw offdiag = EntryLaw::gaussian;
  /// Standard deviation of the diagonal entries. sqrt(2) matches the GOE.
  double diag_sigma0 = std::sqrt(2.0);
  /// Tail parameter of the sub-exponential hypothesis. Recorded only.
  double tail_delta = 0.5;

  bool operator==(const EntrySpec&) const = default;
};

/// One unit-variance draw from `law`.
double draw_unit(EntryLaw law, RandomStream& rng);
/// Draw for matrix position (i, j): unit law off the diagonal, scaled by sigma0 on it.
double draw_entry(const EntrySpec& spec, std::size_t i, std::size_t j, RandomStream& rng);

/// Number of positions with i <= j in an N x N matrix.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n * (n + 1) / 2; }

/// Row-major linear index of (i, j), i <= j, 0-based.
constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * n - (i * (i - 1)) / 2 + (j - i);
}

/// Inverse of pair_index.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t n, std::size_t index);

/// Dense real symmetric matrix stored as its packed upper triangle, so the logical
/// matrix is symmetric by construction.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim);
  SymmetricMatrix(std::size_t dim, std::vector<double> upper);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return i <= j ? upper_[pair_index(dim_, i, j)] : upper_[pair_index(dim_, j, i)];
  }
  void set(std::size_t i, std::size_t j, double value);
  [[nodiscard]] const std::vector<double>& upper() const noexcept { return upper_; }
  [[nodiscard]] std::vector<double>& upper() noexcept { return upper_; }

  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  /// Uses the upper triangle of `dense`.
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& dense);

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> upper_;
};

/// A set S of distinct positions (i, j), i <= j, in draw order. Prefixes of a drawn
/// set are themselves uniform draws of smaller size.
struct IndexPairSet {
  std::size_t dim = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
  [[nodiscard]] IndexPairSet prefix(std::size_t k) const;
};

SymmetricMatrix sample_wigner(std::size_t n, const EntrySpec& spec, const SeedContext& seed);

/// k positions uniformly without replacement (sparse partial Fisher-Yates over the
/// linearised upper triangle). Throws DomainError if k > N(N+1)/2.
IndexPairSet sample_pair_set(std::size_t n, std::size_t k, const SeedContext& seed);

/// X^{[S]}: the entries of X at S (and mirrors) replaced by fresh draws, taken from
/// the seed's stream in the order of S.pairs.
SymmetricMatrix apply_resample(const SymmetricMatrix& x, const IndexPairSet& s, const EntrySpec& spec,
                               const SeedContext& seed);

/// X^{(ij)}: only entry (i, j) (and its mirror) redrawn. 0-based, i <= j.
SymmetricMatrix resample_single(const SymmetricMatrix& x, std::size_t i, std::size_t j, const EntrySpec& spec,
                                const SeedContext& seed);

/// Copy of X with entry (i, j) set to `value`.
SymmetricMatrix replace_entry(const SymmetricMatrix& x, std::size_t i, std::size_t j, double value);

}  // namespace wnoise
