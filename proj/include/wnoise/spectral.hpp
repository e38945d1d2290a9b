#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "wnoise/ensemble.hpp"

namespace wnoise {

/// Top eigenpair (lambda, v) of a symmetric matrix.
///
/// `vector` has unit norm and canonical sign: its largest-magnitude coordinate
/// (lowest index on ties) is positive, so the pair is a deterministic function of X.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;  // ||X v - lambda v||_2
};

struct EdgeSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
};

enum class SolverKind { automatic, dense, lanczos };

struct SolverOptions {
  /// Residual tolerance relative to max(1, |lambda|).
  double tol = 1e-10;
  SolverKind kind = SolverKind::automatic;
  /// automatic uses the dense solver up to this dimension and Lanczos above it.
  std::size_t dense_max_dim = 128;
  /// Lanczos step cap; 0 means 50 * ceil(sqrt(N)).
  std::size_t max_steps = 0;
};

/// Top eigenpair together with the two largest eigenvalues.
struct EdgeEigen {
  EigenPair top;
  EdgeSpectrum edge;
};

/// Full spectrum, eigenvalues ascending, eigenvectors in the matching columns.
struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPair top_eigenpair(const SymmetricMatrix& x, const SolverOptions& opts = {});
EdgeSpectrum top_two_eigenvalues(const SymmetricMatrix& x, const SolverOptions& opts = {});
EdgeEigen edge_eigen(const SymmetricMatrix& x, const SolverOptions& opts = {});

DenseSpectrum dense_spectrum(const SymmetricMatrix& x);
DenseSpectrum dense_spectrum(const Eigen::MatrixXd& dense);

/// Gap below 1e-8 * sqrt(N): the top eigenvector is treated as ill-defined.
bool is_degenerate(const EdgeSpectrum& edge, std::size_t n) noexcept;

/// Flip `v` in place so its largest-magnitude coordinate is positive.
void canonicalize_sign(Eigen::VectorXd& v) noexcept;

/// +1 if <v, w> >= 0, else -1. Minimises ||v - s w||_2 over s in {-1, +1}.
int align_sign(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// |<v, w>|.
double overlap(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

struct DistanceStats {
  double l2_aligned = 0.0;          // min_s ||v - s w||_2
  double sup_aligned_scaled = 0.0;  // sqrt(N) min_s ||v - s w||_inf
  double sup_norm_v = 0.0;          // sqrt(N) ||v||_inf
};

DistanceStats distance_stats(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

namespace lanczos {

struct Result {
  Eigen::VectorXd ritz_values;  // descending, top `nev`
  Eigen::VectorXd top_vector;   // empty unless requested
  double residual_bound = 0.0;  // worst converged estimate over the top `nev`
  std::size_t steps = 0;
};

/// Lanczos with full reorthogonalisation for the `nev` largest eigenvalues of a
/// symmetric matrix. The start vector is a fixed pseudo-random vector, so the
/// result depends only on the matrix. Throws ConvergenceError on hitting `max_steps`.
Result largest(const Eigen::MatrixXd& a, std::size_t nev, bool want_vector, double tol, std::size_t max_steps);

}  // namespace lanczos

}  // namespace wnoise
