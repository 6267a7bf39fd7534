#include "bocs/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bocs/errors.hpp"
#include "bocs/rng.hpp"
#include "bocs/surrogate.hpp"

namespace bocs {

BinaryPoint round_geometric(const SdpSolution& sol, const PlusMinusForm& pm,
                            const QuadObjective& q, int draws, std::uint64_t seed) {
  (void)pm;
  if (draws < 1) throw std::invalid_argument("round_geometric: draws must be at least 1");
  const int d = q.dim();
  if (sol.V.cols() != d + 1)
    throw std::invalid_argument("round_geometric: factor width must be d+1");

  Rng rng(seed);
  Eigen::VectorXd dir(d + 1);
  BinaryPoint best, x(d);
  double best_value = 0.0;

  for (int rep = 0; rep < draws; ++rep) {
    for (int i = 0; i <= d; ++i) dir[i] = rng.normal();
    // Split the factor columns by the random hyperplane. z and -z encode the
    // same assignment, so orient the projection to put the homogenizer on the
    // +1 side; a soft (probabilistic) sign assignment here scrambles
    // near-integral solutions and measurably degrades the acquisition.
    const Eigen::VectorXd proj = sol.V.transpose() * dir;
    const double orient = proj[d] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i) x[i] = orient * proj[i] > 0.0 ? 1 : 0;
    const double value = q.value(x);
    if (rep == 0 || value > best_value) {
      best = x;
      best_value = value;
    }
  }
  return best;
}

BinaryPoint acquire_sdp(const CoefficientDraw& draw, const Penalty& penalty,
                        const SdpAcquisitionConfig& cfg, std::uint64_t seed) {
  const QuadObjective q = build_quadratic(draw, penalty);
  const PlusMinusForm pm = to_plus_minus(q);
  SdpSolution sol;
  bool solved = false;
  for (int attempt = 0; attempt <= cfg.retries && !solved; ++attempt) {
    sol = sdp_solve(pm, cfg.sdp, subseed(seed, "sdp", static_cast<std::uint64_t>(attempt)));
    solved = sol.converged;
  }
  if (!solved)
    throw NumericalError("acquire_sdp: relaxation solver failed to converge after " +
                         std::to_string(cfg.retries + 1) + " attempts");
  return round_geometric(sol, pm, q, cfg.rounding_draws, subseed(seed, "round"));
}

BinaryPoint acquire_sa(const CoefficientDraw& draw, const Penalty& penalty, int budget,
                       const AnnealSchedule& schedule, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("acquire_sa: budget must be at least 1");
  const MonomialBasis& basis = draw.basis;
  const Objective objective = [&](const BinaryPoint& x) {
    return predict(draw.alpha, basis, x) - penalty(x);
  };
  // Start evaluation plus `budget` proposals, all against the free surrogate.
  const SearchBudget sb{budget + 1, false};
  return simulated_annealing(objective, basis.d, sb, schedule, seed).best;
}

}  // namespace bocs
