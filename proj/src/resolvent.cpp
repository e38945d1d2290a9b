#include "wnoise/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/LU>

#include "wnoise/errors.hpp"

namespace wnoise {
namespace {

constexpr std::size_t kEigendecompositionMaxDim = 2048;

void check_indices(std::size_t n, const IndexPairs& indices) {
  for (auto [i, j] : indices)
    if (i >= n || j >= n) throw DomainError("resolvent index out of range");
}

}  // namespace

SpectralPoint::SpectralPoint(double energy, double eta) : energy_(energy), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta) || !std::isfinite(energy))
    throw DomainError("spectral point needs finite E and eta > 0");
}

SpectralCache::SpectralCache(const SymmetricMatrix& x) : spectrum_(dense_spectrum(x)) {}

double SpectralCache::lambda(std::size_t p) const noexcept {
  return spectrum_.values(static_cast<Eigen::Index>(dim() - 1 - p));
}

Eigen::VectorXd SpectralCache::eigenvector(std::size_t p) const {
  Eigen::VectorXd v = spectrum_.vectors.col(static_cast<Eigen::Index>(dim() - 1 - p));
  canonicalize_sign(v);
  return v;
}

EdgeSpectrum SpectralCache::edge() const noexcept {
  const double l1 = lambda(0);
  const double l2 = dim() > 1 ? lambda(1) : l1;
  return {l1, l2, l1 - l2};
}

std::complex<double> SpectralCache::entry(std::size_t i, std::size_t j, const SpectralPoint& z) const {
  const auto& v = spectrum_.vectors;
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  std::complex<double> sum = 0.0;
  for (Eigen::Index p = 0; p < spectrum_.values.size(); ++p)
    sum += v(ii, p) * v(jj, p) / (spectrum_.values(p) - z.z());
  return sum;
}

Eigen::MatrixXcd SpectralCache::resolvent(const SpectralPoint& z) const {
  const auto& v = spectrum_.vectors;
  Eigen::VectorXcd inv(spectrum_.values.size());
  for (Eigen::Index p = 0; p < inv.size(); ++p) inv(p) = 1.0 / (spectrum_.values(p) - z.z());
  const Eigen::MatrixXcd vc = v.cast<std::complex<double>>();
  return vc * inv.asDiagonal() * vc.transpose();
}

double SpectralCache::trace_im(const SpectralPoint& z) const noexcept {
  double sum = 0.0;
  const double eta = z.eta();
  for (Eigen::Index p = 0; p < spectrum_.values.size(); ++p) {
    const double d = spectrum_.values(p) - z.energy();
    sum += eta / (d * d + eta * eta);
  }
  return sum;
}

ResolventBlock resolvent_entries(const SpectralCache& cache, const SpectralPoint& z, const IndexPairs& indices) {
  check_indices(cache.dim(), indices);
  ResolventBlock out{z, indices, {}};
  out.values.reserve(indices.size());
  for (auto [i, j] : indices) out.values.push_back(cache.entry(i, j, z));
  return out;
}

ResolventBlock resolvent_entries(const SymmetricMatrix& x, const SpectralPoint& z, const IndexPairs& indices,
                                 ResolventPath path) {
  check_indices(x.dim(), indices);
  if (path == ResolventPath::automatic)
    path = x.dim() <= kEigendecompositionMaxDim ? ResolventPath::eigendecomposition : ResolventPath::linear_solve;
  if (path == ResolventPath::eigendecomposition) return resolvent_entries(SpectralCache(x), z, indices);

  const auto n = static_cast<Eigen::Index>(x.dim());
  Eigen::MatrixXcd shifted = x.to_dense().cast<std::complex<double>>();
  shifted.diagonal().array() -= z.z();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  std::map<std::size_t, Eigen::VectorXcd> columns;
  ResolventBlock out{z, indices, {}};
  out.values.reserve(indices.size());
  for (auto [i, j] : indices) {
    auto it = columns.find(j);
    if (it == columns.end()) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
      e(static_cast<Eigen::Index>(j)) = 1.0;
      it = columns.emplace(j, lu.solve(e)).first;
    }
    const auto value = it->second(static_cast<Eigen::Index>(i));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw InvariantViolation("shifted linear solve produced a non-finite resolvent entry");
    out.values.push_back(value);
  }
  return out;
}

double resolvent_identity_residual(const SymmetricMatrix& x, const SpectralPoint& z,
                                   const std::vector<std::size_t>& columns) {
  return resolvent_identity_residual(x, SpectralCache(x), z, columns);
}

double resolvent_identity_residual(const SymmetricMatrix& x, const SpectralCache& cache, const SpectralPoint& z,
                                   const std::vector<std::size_t>& columns) {
  if (cache.dim() != x.dim()) throw DomainError("spectral cache does not match the matrix");
  const auto n = static_cast<Eigen::Index>(x.dim());
  Eigen::MatrixXcd shifted = x.to_dense().cast<std::complex<double>>();
  shifted.diagonal().array() -= z.z();
  double worst = 0.0;
  for (std::size_t j : columns) {
    if (j >= x.dim()) throw DomainError("resolvent column out of range");
    Eigen::VectorXcd col(n);
    for (Eigen::Index i = 0; i < n; ++i) col(i) = cache.entry(static_cast<std::size_t>(i), j, z);
    Eigen::VectorXcd r = shifted * col;
    r(static_cast<Eigen::Index>(j)) -= 1.0;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

LocalizationReport edge_localization_check(const SpectralCache& cache, std::size_t k_index, double energy,
                                           double eta) {
  if (k_index < 1 || k_index > cache.dim()) throw DomainError("k_index must lie in [1, N]");
  const SpectralPoint z(energy, eta);
  const double n = static_cast<double>(cache.dim());
  const double scale = std::max(eta, std::abs(cache.lambda(k_index - 1) - energy));
  LocalizationReport out;
  out.lower_bound = 0.5 / (scale * scale);
  out.value = -1.0;
  for (std::size_t i = 0; i < cache.dim(); ++i) {
    const double value = n / eta * cache.entry(i, i, z).imag();
    if (value > out.value) {
      out.value = value;
      out.witness = i;
    }
  }
  out.holds = out.value >= out.lower_bound;
  return out;
}

ReconstructionReport eigvec_from_resolvent(const SpectralCache& cache, double eta, const IndexPairs& indices) {
  check_indices(cache.dim(), indices);
  const auto edge = cache.edge();
  if (cache.dim() > 1 && is_degenerate(edge, cache.dim()))
    throw DegenerateSpectrumError("top eigenvalue is numerically degenerate; eigenvector undefined");
  const SpectralPoint z(edge.lambda1, eta);
  const Eigen::VectorXd v = cache.eigenvector(0);
  const double n = static_cast<double>(cache.dim());
  ReconstructionReport out;
  out.scaled_sup_sq = n * v.cwiseAbs2().maxCoeff();
  for (auto [i, j] : indices) {
    const double from_resolvent = n * eta * cache.entry(i, j, z).imag();
    const double direct = n * v(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(j));
    const double dev = std::abs(from_resolvent - direct);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst = {i, j};
    }
  }
  return out;
}

double resample_resolvent_diff(const SymmetricMatrix& x, const SymmetricMatrix& x_k, const SpectralPoint& z,
                               const IndexPairs& indices) {
  if (x.dim() != x_k.dim()) throw DomainError("matrices have different dimensions");
  if (x == x_k) return 0.0;
  const SpectralCache base(x);
  const SpectralCache other(x_k);
  const double scale = static_cast<double>(x.dim()) * z.eta();
  double worst = 0.0;
  for (auto [i, j] : indices) worst = std::max(worst, scale * std::abs(other.entry(i, j, z) - base.entry(i, j, z)));
  return worst;
}

DiagonalZeroingReport diagonal_zeroing_report(const SymmetricMatrix& x, const SpectralPoint& z) {
  return diagonal_zeroing_report(x, SpectralCache(x), z);
}

DiagonalZeroingReport diagonal_zeroing_report(const SymmetricMatrix& x, const SpectralCache& full,
                                              const SpectralPoint& z) {
  if (full.dim() != x.dim()) throw DomainError("spectral cache does not match the matrix");
  SymmetricMatrix zeroed = x;
  for (std::size_t i = 0; i < x.dim(); ++i) zeroed.set(i, i, 0.0);
  const SpectralCache off(zeroed);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) worst = std::max(worst, std::abs(off.entry(i, i, z) - full.entry(i, i, z)));
  DiagonalZeroingReport out;
  out.scaled_max_diff = 4.0 * static_cast<double>(x.dim()) * z.eta() * worst;
  out.within_bound = out.scaled_max_diff <= 1.0;
  return out;
}

LocalLawDiagnostics local_law_diagnostics(const SpectralCache& cache, const SpectralPoint& z) {
  const Eigen::MatrixXcd r = cache.resolvent(z);
  const auto n = r.rows();
  LocalLawDiagnostics out;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(r(i, j));
      if (i == j)
        out.scaled_max_diag = std::max(out.scaled_max_diag, mag);
      else
        out.max_offdiag = std::max(out.max_offdiag, mag);
    }
  }
  out.scaled_max_diag *= std::sqrt(static_cast<double>(n));
  out.log_scale = n >= 3 ? scale_L(static_cast<std::size_t>(n)) : 0.0;
  return out;
}

double scale_L(std::size_t n) {
  if (n < 3) throw DomainError("L_N is defined for N >= 3");
  const double log_n = std::log(static_cast<double>(n));
  return std::pow(log_n, std::log(log_n));
}

}  // namespace wnoise
