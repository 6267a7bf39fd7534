#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "bocs/binary.hpp"
#include "bocs/rng.hpp"

namespace bocs {

/// Variance parameters are clamped at this floor before any of them is
/// inverted, which keeps the shrinkage precision matrix finite when the
/// sampler drives local scales toward zero.
inline constexpr double kVarianceFloor = 1e-12;

/// Persistent Gibbs-chain state for the sparse regression model with the
/// global-local shrinkage prior: coefficients alpha, observation noise
/// sigma2, global scale tau2 with auxiliary xi, and per-coefficient local
/// scales beta2 with auxiliaries nu.
struct SurrogatePosterior {
  Eigen::VectorXd alpha;
  double sigma2 = 1.0;
  double tau2 = 1.0;
  Eigen::VectorXd beta2;
  Eigen::VectorXd nu;
  double xi = 1.0;
  Rng rng;

  SurrogatePosterior(int p, std::uint64_t seed);
};

/// One posterior sample of the regression coefficients.
struct CoefficientDraw {
  Eigen::VectorXd alpha;
  double sigma2 = 1.0;
  MonomialBasis basis;
};

struct InvGammaParams {
  double shape = 0.0;
  double scale = 0.0;
};

// Conditional-posterior parameters of the non-Gaussian blocks. Exposed so the
// update formulas can be checked directly.
InvGammaParams sigma2_conditional(const SurrogatePosterior& state, const Dataset& data);
InvGammaParams beta2_conditional(const SurrogatePosterior& state, int k);
InvGammaParams tau2_conditional(const SurrogatePosterior& state);
InvGammaParams nu_conditional(double beta2_k);
InvGammaParams xi_conditional(double tau2);

/// Floored diagonal of the shrinkage covariance tau2 * diag(beta2).
Eigen::VectorXd shrinkage_diag(const SurrogatePosterior& state);

/// Exact coefficient draw from N(A^{-1} X^T y, sigma2 A^{-1}) with
/// A = X^T X + Sigma*^{-1}, via Cholesky of the p x p matrix A. O(p^3).
Eigen::VectorXd alpha_direct_draw(const SurrogatePosterior& state, const Dataset& data, Rng& rng);

/// Same distribution through the auxiliary-variable construction that only
/// factorizes an N x N system: draw u ~ N(0, sigma2 Sigma*), delta ~ N(0, I),
/// solve (X Sigma* X^T + I) w = y/sigma - (X u / sigma + delta) and return
/// u + sigma Sigma* X^T w. O(N^2 p), the cheap regime when N << p.
Eigen::VectorXd alpha_fast_draw(const SurrogatePosterior& state, const Dataset& data, Rng& rng);

/// One full cycle over the conditionals, in order: alpha, sigma2, beta2,
/// tau2, nu, xi. The coefficient block uses the fast draw when N < p and the
/// direct Cholesky draw otherwise.
void gibbs_sweep(SurrogatePosterior& state, const Dataset& data);

/// Advances the chain `sweeps` sweeps and reads out (alpha, sigma2).
CoefficientDraw draw_coefficients(SurrogatePosterior& state, const Dataset& data, int sweeps);

/// Minimum-norm least-squares coefficients; exact solve when X has full
/// column rank.
Eigen::VectorXd mle_fit(const Dataset& data);

/// Normal-inverse-gamma prior for standard Bayesian linear regression:
/// alpha | sigma2 ~ N(mean, sigma2 * cov), sigma2 ~ IG(a, b).
struct NigPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double a = 1.0;
  double b = 1.0;
};

struct NigPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // posterior covariance factor (multiplies sigma2)
  double a = 1.0;
  double b = 1.0;
};

/// Conjugate update of the normal-inverse-gamma prior.
NigPosterior blr_fit(const Dataset& data, const NigPrior& prior);

/// f(x) under the given coefficients: dot(coeffs, expand(basis, x)).
double predict(const Eigen::VectorXd& coeffs, const MonomialBasis& basis, const BinaryPoint& x);

}  // namespace bocs
