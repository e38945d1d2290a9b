#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "wnoise/ensemble.hpp"
#include "wnoise/spectral.hpp"

namespace wnoise {

/// z = E + i*eta with eta > 0.
class SpectralPoint {
 public:
  SpectralPoint(double energy, double eta);
  [[nodiscard]] double energy() const noexcept { return energy_; }
  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] std::complex<double> z() const noexcept { return {energy_, eta_}; }

 private:
  double energy_;
  double eta_;
};

using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// Selected entries of R(z) = (X - zI)^{-1}.
struct ResolventBlock {
  SpectralPoint point;
  IndexPairs indices;
  std::vector<std::complex<double>> values;
};

enum class ResolventPath { automatic, eigendecomposition, linear_solve };

/// Full eigendecomposition of X, reusable for any number of spectral points.
class SpectralCache {
 public:
  explicit SpectralCache(const SymmetricMatrix& x);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(spectrum_.values.size()); }
  /// Eigenvalues in descending order: lambda(0) is the largest.
  [[nodiscard]] double lambda(std::size_t p) const noexcept;
  /// Unit eigenvector for lambda(p).
  [[nodiscard]] Eigen::VectorXd eigenvector(std::size_t p) const;
  [[nodiscard]] EdgeSpectrum edge() const noexcept;

  /// R(z)_{ij} = sum_p (v_p)_i (v_p)_j / (lambda_p - z).
  [[nodiscard]] std::complex<double> entry(std::size_t i, std::size_t j, const SpectralPoint& z) const;
  /// sum_p eta / ((lambda_p - E)^2 + eta^2), the trace of Im R(z).
  [[nodiscard]] double trace_im(const SpectralPoint& z) const noexcept;
  /// The full N x N resolvent.
  [[nodiscard]] Eigen::MatrixXcd resolvent(const SpectralPoint& z) const;

 private:
  DenseSpectrum spectrum_;  // ascending, as returned by the solver
};

/// Exact entries via eigendecomposition (automatic for N <= 2048) or via complex
/// shifted linear solves (one LU of X - zI, one solve per distinct column).
ResolventBlock resolvent_entries(const SymmetricMatrix& x, const SpectralPoint& z, const IndexPairs& indices,
                                 ResolventPath path = ResolventPath::automatic);
ResolventBlock resolvent_entries(const SpectralCache& cache, const SpectralPoint& z, const IndexPairs& indices);

/// max over requested columns of |(X - zI) R - I| restricted to those columns.
double resolvent_identity_residual(const SymmetricMatrix& x, const SpectralPoint& z,
                                   const std::vector<std::size_t>& columns);
/// Same, with the eigendecomposition of x already at hand.
double resolvent_identity_residual(const SymmetricMatrix& x, const SpectralCache& cache, const SpectralPoint& z,
                                   const std::vector<std::size_t>& columns);

struct LocalizationReport {
  std::size_t witness = 0;  // index i maximising N eta^{-1} Im R_ii
  double lower_bound = 0.0;  // 1/2 max(eta, |lambda_k - E|)^{-2}
  double value = 0.0;        // N eta^{-1} Im R(E + i eta)_{witness, witness}
  bool holds = false;
};

/// Pigeonhole lower bound on the imaginary part of the resolvent diagonal near
/// lambda_k. `k_index` is 1 for the top eigenvalue, 2 for the second.
LocalizationReport edge_localization_check(const SpectralCache& cache, std::size_t k_index, double energy, double eta);

struct ReconstructionReport {
  double max_deviation = 0.0;  // max |N eta Im R(lambda + i eta)_{ij} - N v_i v_j|
  std::pair<std::size_t, std::size_t> worst{0, 0};
  double scaled_sup_sq = 0.0;  // N ||v||_inf^2
};

/// Recovers N v_i v_j from the resolvent at z = lambda_1 + i eta. Throws
/// DegenerateSpectrumError if the top gap is below the degeneracy threshold.
ReconstructionReport eigvec_from_resolvent(const SpectralCache& cache, double eta, const IndexPairs& indices);

/// max over indices of N eta |R^{[k]}(z)_{ij} - R(z)_{ij}|.
double resample_resolvent_diff(const SymmetricMatrix& x, const SymmetricMatrix& x_k, const SpectralPoint& z,
                               const IndexPairs& indices);

struct DiagonalZeroingReport {
  double scaled_max_diff = 0.0;  // 4 N eta max_i |R_0(z)_ii - R(z)_ii|
  bool within_bound = false;     // scaled_max_diff <= 1
};

/// Compares the resolvent diagonal of X with that of X with its diagonal zeroed.
DiagonalZeroingReport diagonal_zeroing_report(const SymmetricMatrix& x, const SpectralPoint& z);
DiagonalZeroingReport diagonal_zeroing_report(const SymmetricMatrix& x, const SpectralCache& cache,
                                              const SpectralPoint& z);

struct LocalLawDiagnostics {
  double max_offdiag = 0.0;         // max_{i != j} |R_ij|
  double scaled_max_diag = 0.0;     // sqrt(N) max_i |R_ii|
  double log_scale = 0.0;           // L_N
};

/// Reported (never asserted) magnitudes of resolvent entries.
LocalLawDiagnostics local_law_diagnostics(const SpectralCache& cache, const SpectralPoint& z);

/// L_N = (log N)^{log log N}, defined for N >= 3.
double scale_L(std::size_t n);

}  // namespace wnoise
