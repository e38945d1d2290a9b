#include "wnoise/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "wnoise/errors.hpp"

namespace wnoise {
namespace {

bool use_dense(std::size_t n, const SolverOptions& opts) {
  switch (opts.kind) {
    case SolverKind::dense: return true;
    case SolverKind::lanczos: return false;
    case SolverKind::automatic: return n <= opts.dense_max_dim;
  }
  return true;
}

std::size_t step_cap(std::size_t n, const SolverOptions& opts) {
  if (opts.max_steps != 0) return opts.max_steps;
  return 50 * static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

double residual_of(const Eigen::MatrixXd& a, double lambda, const Eigen::VectorXd& v) {
  return (a * v - lambda * v).norm();
}

void require_same_length(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  if (v.size() != w.size()) throw DomainError("vectors have different lengths");
}

EdgeEigen solve_edge(const SymmetricMatrix& x, const SolverOptions& opts, bool want_second) {
  const Eigen::MatrixXd a = x.to_dense();
  const std::size_t n = x.dim();
  EdgeEigen out;
  if (use_dense(n, opts)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", -1.0);
    const Eigen::Index last = a.rows() - 1;
    out.top.value = es.eigenvalues()(last);
    out.top.vector = es.eigenvectors().col(last);
    out.edge.lambda1 = out.top.value;
    out.edge.lambda2 = last > 0 ? es.eigenvalues()(last - 1) : out.top.value;
  } else {
    auto res = lanczos::largest(a, want_second ? 2 : 1, true, opts.tol, step_cap(n, opts));
    out.top.value = res.ritz_values(0);
    out.top.vector = std::move(res.top_vector);
    out.edge.lambda1 = res.ritz_values(0);
    out.edge.lambda2 = res.ritz_values.size() > 1 ? res.ritz_values(1) : res.ritz_values(0);
  }
  out.edge.gap = out.edge.lambda1 - out.edge.lambda2;
  canonicalize_sign(out.top.vector);
  out.top.residual = residual_of(a, out.top.value, out.top.vector);
  const double allowed = opts.tol * std::max(1.0, std::abs(out.top.value));
  if (!(out.top.residual <= allowed)) {
    throw ConvergenceError("top eigenpair residual " + std::to_string(out.top.residual) + " exceeds tolerance",
                           out.top.residual);
  }
  return out;
}

}  // namespace

void canonicalize_sign(Eigen::VectorXd& v) noexcept {
  if (v.size() == 0) return;
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v(arg) < 0) v = -v;
}

EigenPair top_eigenpair(const SymmetricMatrix& x, const SolverOptions& opts) {
  return solve_edge(x, opts, false).top;
}

EdgeSpectrum top_two_eigenvalues(const SymmetricMatrix& x, const SolverOptions& opts) {
  const std::size_t n = x.dim();
  if (use_dense(n, opts)) {
    const Eigen::MatrixXd a = x.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", -1.0);
    const Eigen::Index last = a.rows() - 1;
    const double l1 = es.eigenvalues()(last);
    const double l2 = last > 0 ? es.eigenvalues()(last - 1) : l1;
    return {l1, l2, l1 - l2};
  }
  auto res = lanczos::largest(x.to_dense(), 2, false, opts.tol, step_cap(n, opts));
  const double l1 = res.ritz_values(0);
  const double l2 = res.ritz_values.size() > 1 ? res.ritz_values(1) : l1;
  return {l1, l2, l1 - l2};
}

EdgeEigen edge_eigen(const SymmetricMatrix& x, const SolverOptions& opts) { return solve_edge(x, opts, true); }

DenseSpectrum dense_spectrum(const Eigen::MatrixXd& dense) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", -1.0);
  return {es.eigenvalues(), es.eigenvectors()};
}

DenseSpectrum dense_spectrum(const SymmetricMatrix& x) { return dense_spectrum(x.to_dense()); }

bool is_degenerate(const EdgeSpectrum& edge, std::size_t n) noexcept {
  return edge.gap < 1e-8 * std::sqrt(static_cast<double>(n));
}

int align_sign(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  require_same_length(v, w);
  return v.dot(w) >= 0.0 ? 1 : -1;
}

double overlap(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  require_same_length(v, w);
  return std::abs(v.dot(w));
}

DistanceStats distance_stats(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  require_same_length(v, w);
  const double s = align_sign(v, w);
  const double root_n = std::sqrt(static_cast<double>(v.size()));
  const Eigen::VectorXd plus = v - w;
  const Eigen::VectorXd minus = v + w;
  DistanceStats out;
  out.l2_aligned = (s > 0 ? plus : minus).norm();
  // The sup-norm minimiser over s need not coincide with the l2 one.
  out.sup_aligned_scaled = root_n * std::min(plus.lpNorm<Eigen::Infinity>(), minus.lpNorm<Eigen::Infinity>());
  out.sup_norm_v = root_n * v.lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace wnoise
