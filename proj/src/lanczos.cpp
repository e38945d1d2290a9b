#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "wnoise/errors.hpp"
#include "wnoise/rng.hpp"
#include "wnoise/spectral.hpp"

namespace wnoise::lanczos {
namespace {

constexpr std::uint64_t kStartKey = 0x5EED'1A2C'0000'0001ull;

Eigen::VectorXd random_unit(Eigen::Index n, std::uint64_t salt) {
  RandomStream rng(kStartKey, static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull + salt);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v.normalized();
}

// Two passes of classical Gram-Schmidt against the first `m` basis columns.
void reorthogonalize(const Eigen::MatrixXd& basis, Eigen::Index m, Eigen::VectorXd& w, Eigen::VectorXd* coeffs) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd h = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * h;
    if (pass == 0 && coeffs != nullptr) *coeffs = h;
  }
}

}  // namespace

Result largest(const Eigen::MatrixXd& a, std::size_t nev, bool want_vector, double tol, std::size_t max_steps) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw DomainError("Lanczos needs a non-empty square matrix");
  const auto want = static_cast<Eigen::Index>(std::min<std::size_t>(std::max<std::size_t>(nev, 1), static_cast<std::size_t>(n)));
  const Eigen::Index cap = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max<std::size_t>(max_steps, want)), n);

  Eigen::MatrixXd basis(n, cap);
  Eigen::VectorXd alpha(cap), beta(cap);
  Eigen::VectorXd q = random_unit(n, 0);
  Eigen::VectorXd w(n);
  const double scale_hint = std::max(1.0, a.cwiseAbs().rowwise().sum().maxCoeff());
  double best_bound = std::numeric_limits<double>::infinity();
  std::uint64_t restarts = 0;

  for (Eigen::Index j = 0; j < cap; ++j) {
    basis.col(j) = q;
    w.noalias() = a * q;
    alpha(j) = q.dot(w);
    w -= alpha(j) * q;
    if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
    Eigen::VectorXd h;
    reorthogonalize(basis, j + 1, w, &h);
    alpha(j) += h(j);
    double b = w.norm();
    const bool breakdown = b <= 1e-13 * scale_hint;
    if (breakdown) b = 0.0;
    beta(j) = b;

    const Eigen::Index m = j + 1;
    const bool check = m >= want && (breakdown || m == cap || m % 8 == 0 || m < 16);
    if (check) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd diag = alpha.head(m);
      Eigen::VectorXd sub = beta.head(std::max<Eigen::Index>(m - 1, 0));
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      double worst = 0.0;
      bool ok = true;
      for (Eigen::Index p = 0; p < want; ++p) {
        const Eigen::Index col = m - 1 - p;
        const double theta = tri.eigenvalues()(col);
        const double bound = b * std::abs(tri.eigenvectors()(m - 1, col));
        worst = std::max(worst, bound / std::max(1.0, std::abs(theta)));
        if (bound > tol * std::max(1.0, std::abs(theta))) ok = false;
      }
      best_bound = std::min(best_bound, worst);
      if (ok) {
        Result out;
        out.ritz_values.resize(want);
        for (Eigen::Index p = 0; p < want; ++p) out.ritz_values(p) = tri.eigenvalues()(m - 1 - p);
        if (want_vector) {
          out.top_vector = basis.leftCols(m) * tri.eigenvectors().col(m - 1);
          out.top_vector.normalize();
        }
        out.residual_bound = worst;
        out.steps = static_cast<std::size_t>(m);
        return out;
      }
    }

    if (breakdown) {
      // Invariant subspace found: continue from a fresh direction orthogonal to it.
      Eigen::VectorXd fresh = random_unit(n, ++restarts);
      reorthogonalize(basis, m, fresh, nullptr);
      const double fn = fresh.norm();
      if (fn <= 1e-10) break;
      q = fresh / fn;
    } else {
      q = w / b;
    }
  }
  throw ConvergenceError("Lanczos did not converge within " + std::to_string(cap) + " steps", best_bound);
}

}  // namespace wnoise::lanczos
