#include "bocs/sdp.hpp"

#include <cmath>
#include <stdexcept>

#include "bocs/rng.hpp"

namespace bocs {

namespace {

// tr(B V^T V) with B symmetric.
double factor_objective(const Eigen::MatrixXd& V, const Eigen::MatrixXd& B) {
  return (V * B).cwiseProduct(V).sum();
}

void normalize_columns(Eigen::MatrixXd& V, const Eigen::MatrixXd& fallback) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    const double n = V.col(j).norm();
    if (n > 1e-300)
      V.col(j) /= n;
    else
      V.col(j) = fallback.col(j);
  }
}

}  // namespace

SdpSolution sdp_solve(const PlusMinusForm& pm, const SdpOptions& opts, std::uint64_t seed) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("sdp_solve: tol must be positive");
  const int n = static_cast<int>(pm.B.rows());
  if (pm.B.cols() != n || n < 1)
    throw std::invalid_argument("sdp_solve: B must be square and nonempty");

  // Rank sufficient for an exact low-rank optimum of a diagonally constrained
  // SDP; iterating over V sidesteps the PSD cone entirely.
  int r = static_cast<int>(std::ceil(std::sqrt(2.0 * n)));
  if (r > n) r = n;
  if (r < 1) r = 1;

  Rng rng(seed);
  Eigen::MatrixXd V(r, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < r; ++i) V(i, j) = rng.normal();
    const double norm = V.col(j).norm();
    if (norm > 1e-300)
      V.col(j) /= norm;
    else
      V(0, j) = 1.0;
  }

  SdpSolution sol;
  double f = factor_objective(V, pm.B);
  double step = 1.0 / (1.0 + pm.B.norm());
  Eigen::MatrixXd G(r, n), W(r, n), Vprev, Gprev;

  int it = 0;
  for (; it < opts.max_iters; ++it) {
    G.noalias() = 2.0 * V * pm.B;
    for (int j = 0; j < n; ++j)  // tangent of the unit sphere, per column
      G.col(j) -= G.col(j).dot(V.col(j)) * V.col(j);
    const double gnorm = G.norm();
    sol.residual = gnorm;
    if (gnorm < opts.tol * (1.0 + std::abs(f))) {
      sol.converged = true;
      break;
    }
    if (it > 0) {
      // Spectral step guess from the previous move; plain step doubling
      // settles into an overshoot cycle on flat optimal faces and then
      // crawls sublinearly.
      const double ss = (V - Vprev).squaredNorm();
      const double sy = ((V - Vprev).cwiseProduct(Gprev - G)).sum();
      if (sy > 1e-300) step = std::clamp(ss / sy, 1e-12, 1e6);
    }
    Vprev = V;
    Gprev = G;
    // Backtracking ascent along the projected gradient with renormalization.
    double trial = step;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      W = V + trial * G;
      normalize_columns(W, V);
      const double fw = factor_objective(W, pm.B);
      if (fw >= f + 1e-4 * trial * gnorm * gnorm) {
        V.swap(W);
        f = fw;
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) break;  // step underflow: numerically stationary
    step = std::min(trial * 2.0, 1e6);
  }

  sol.iterations = it;
  sol.objective_value = f;
  sol.V = Eigen::MatrixXd::Zero(n, n);
  sol.V.topRows(r) = V;
  return sol;
}

}  // namespace bocs
