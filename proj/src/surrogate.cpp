#include "bocs/surrogate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "bocs/errors.hpp"

namespace bocs {

SurrogatePosterior::SurrogatePosterior(int p, std::uint64_t seed)
    : alpha(Eigen::VectorXd::Zero(p)),
      beta2(Eigen::VectorXd::Ones(p)),
      nu(Eigen::VectorXd::Ones(p)),
      rng(seed) {}

Eigen::VectorXd shrinkage_diag(const SurrogatePosterior& state) {
  return (state.tau2 * state.beta2.array()).max(kVarianceFloor).matrix();
}

InvGammaParams sigma2_conditional(const SurrogatePosterior& state, const Dataset& data) {
  const int n = data.size();
  const int p = data.num_features();
  const Eigen::VectorXd resid = data.targets() - data.features() * state.alpha;
  const Eigen::VectorXd s = shrinkage_diag(state);
  const double quad = (state.alpha.array().square() / s.array()).sum();
  return {0.5 * (n + p), 0.5 * (resid.squaredNorm() + quad)};
}

InvGammaParams beta2_conditional(const SurrogatePosterior& state, int k) {
  const double a2 = state.alpha[k] * state.alpha[k];
  return {1.0, 1.0 / state.nu[k] + a2 / (2.0 * state.tau2 * state.sigma2)};
}

InvGammaParams tau2_conditional(const SurrogatePosterior& state) {
  const int p = static_cast<int>(state.alpha.size());
  const double sum = (state.alpha.array().square() / state.beta2.array().max(kVarianceFloor)).sum();
  return {0.5 * (p + 1), 1.0 / state.xi + sum / (2.0 * state.sigma2)};
}

InvGammaParams nu_conditional(double beta2_k) { return {1.0, 1.0 + 1.0 / beta2_k}; }

InvGammaParams xi_conditional(double tau2) { return {1.0, 1.0 + 1.0 / tau2}; }

Eigen::VectorXd alpha_direct_draw(const SurrogatePosterior& state, const Dataset& data, Rng& rng) {
  const int p = data.num_features();
  const Eigen::VectorXd s = shrinkage_diag(state);
  Eigen::MatrixXd a = data.features().transpose() * data.features();
  a.diagonal() += s.cwiseInverse();
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError("alpha_direct_draw: coefficient precision matrix is not positive definite");
  const Eigen::VectorXd mean = llt.solve(data.features().transpose() * data.targets());
  Eigen::VectorXd z(p);
  for (int i = 0; i < p; ++i) z[i] = rng.normal();
  // mean + sigma * L^{-T} z has covariance sigma2 A^{-1}
  llt.matrixU().solveInPlace(z);
  return mean + std::sqrt(state.sigma2) * z;
}

Eigen::VectorXd alpha_fast_draw(const SurrogatePosterior& state, const Dataset& data, Rng& rng) {
  const int n = data.size();
  const int p = data.num_features();
  const double sigma = std::sqrt(state.sigma2);
  const Eigen::VectorXd s = shrinkage_diag(state);

  Eigen::VectorXd u(p);
  for (int k = 0; k < p; ++k) u[k] = sigma * std::sqrt(s[k]) * rng.normal();
  Eigen::VectorXd delta(n);
  for (int i = 0; i < n; ++i) delta[i] = rng.normal();

  const Eigen::MatrixXd xs = data.features() * s.asDiagonal();
  Eigen::MatrixXd m = xs * data.features().transpose();
  m.diagonal().array() += 1.0;

  // eigenvalues are >= 1, so the largest Gershgorin row sum bounds the
  // condition number
  const double bound = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (bound > 1e12)
    throw NumericalError("alpha_fast_draw: capacitance matrix conditioning exceeds 1e12");

  const Eigen::VectorXd rhs = data.targets() / sigma - data.features() * u / sigma - delta;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError("alpha_fast_draw: capacitance matrix is not positive definite");
  const Eigen::VectorXd w = llt.solve(rhs);
  return u + sigma * (s.asDiagonal() * (data.features().transpose() * w));
}

void gibbs_sweep(SurrogatePosterior& state, const Dataset& data) {
  if (data.size() < 1) throw std::invalid_argument("gibbs_sweep: dataset is empty");
  const int p = data.num_features();

  if (data.size() < p) {
    for (int attempt = 0;; ++attempt) {
      try {
        state.alpha = alpha_fast_draw(state, data, state.rng);
        break;
      } catch (const NumericalError&) {
        // Near-interpolation (noiseless targets, N close to p) drives sigma2
        // toward zero while the scale-coupled shrinkage inflates tau2*beta2 to
        // keep sigma2*tau2*beta2 at the coefficient scale, and the capacitance
        // matrix overflows working precision. Tighten the slab and redraw; the
        // likelihood pins the fit-relevant directions, so the draw is barely
        // perturbed.
        if (attempt >= 6) throw;
        if (state.tau2 > kVarianceFloor)
          state.tau2 = std::max(state.tau2 * 1e-2, kVarianceFloor);
        else
          state.beta2 = (state.beta2 * 1e-2).cwiseMax(kVarianceFloor);
      }
    }
  } else {
    state.alpha = alpha_direct_draw(state, data, state.rng);
  }

  const InvGammaParams sp = sigma2_conditional(state, data);
  state.sigma2 = std::max(state.rng.inv_gamma(sp.shape, sp.scale), kVarianceFloor);

  for (int k = 0; k < p; ++k) {
    const InvGammaParams bp = beta2_conditional(state, k);
    state.beta2[k] = std::max(state.rng.inv_gamma(bp.shape, bp.scale), kVarianceFloor);
  }

  const InvGammaParams tp = tau2_conditional(state);
  state.tau2 = std::max(state.rng.inv_gamma(tp.shape, tp.scale), kVarianceFloor);

  for (int k = 0; k < p; ++k) {
    const InvGammaParams np = nu_conditional(state.beta2[k]);
    state.nu[k] = std::max(state.rng.inv_gamma(np.shape, np.scale), kVarianceFloor);
  }

  const InvGammaParams xp = xi_conditional(state.tau2);
  state.xi = std::max(state.rng.inv_gamma(xp.shape, xp.scale), kVarianceFloor);
}

CoefficientDraw draw_coefficients(SurrogatePosterior& state, const Dataset& data, int sweeps) {
  if (sweeps < 1) throw std::invalid_argument("draw_coefficients: sweeps must be >= 1");
  for (int i = 0; i < sweeps; ++i) gibbs_sweep(state, data);
  return {state.alpha, state.sigma2, data.basis()};
}

Eigen::VectorXd mle_fit(const Dataset& data) {
  const int p = data.num_features();
  if (data.size() == 0) return Eigen::VectorXd::Zero(p);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(data.features());
  return cod.solve(data.targets());
}

NigPosterior blr_fit(const Dataset& data, const NigPrior& prior) {
  const int p = data.num_features();
  if (prior.mean.size() != p || prior.cov.rows() != p || prior.cov.cols() != p)
    throw std::invalid_argument("blr_fit: prior dimensions do not match the basis");
  Eigen::LLT<Eigen::MatrixXd> prior_llt(prior.cov);
  if (prior_llt.info() != Eigen::Success)
    throw NumericalError("blr_fit: prior covariance is not positive definite");
  const Eigen::MatrixXd prior_prec = prior_llt.solve(Eigen::MatrixXd::Identity(p, p));

  const Eigen::MatrixXd post_prec = prior_prec + data.features().transpose() * data.features();
  Eigen::LLT<Eigen::MatrixXd> post_llt(post_prec);
  if (post_llt.info() != Eigen::Success)
    throw NumericalError("blr_fit: posterior precision is not positive definite");

  NigPosterior post;
  post.mean = post_llt.solve(prior_prec * prior.mean + data.features().transpose() * data.targets());
  post.cov = post_llt.solve(Eigen::MatrixXd::Identity(p, p));
  post.a = prior.a + 0.5 * data.size();
  post.b = prior.b + 0.5 * (data.targets().squaredNorm() +
                            prior.mean.dot(prior_prec * prior.mean) -
                            post.mean.dot(post_prec * post.mean));
  return post;
}

double predict(const Eigen::VectorXd& coeffs, const MonomialBasis& basis, const BinaryPoint& x) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("predict: coefficient length does not match basis");
  return coeffs.dot(expand(basis, x));
}

}  // namespace bocs
