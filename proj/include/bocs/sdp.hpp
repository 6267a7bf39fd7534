#pragma once

#include <Eigen/Core>

#include "bocs/quadratic.hpp"

namespace bocs {

struct SdpOptions {
  double tol = 1e-6;
  int max_iters = 5000;
};

/// Solution of max tr(B X) over PSD X with unit diagonal, represented by a
/// factor X = V^T V with unit columns. V is padded to (d+1) x (d+1) so
/// column i is the vector assigned to coordinate i (last = homogenizer).
struct SdpSolution {
  Eigen::MatrixXd V;
  double objective_value = 0.0;
  double residual = 0.0;  // projected-gradient norm at exit
  int iterations = 0;
  bool converged = false;
};

/// Low-rank projected gradient ascent on f(V) = tr(B V^T V) over matrices
/// with unit-norm columns, rank r = ceil(sqrt(2 (d+1))). The unit-diagonal
/// constraint makes this a relaxation of max z^T B z over z in {-1,1}^(d+1),
/// so solution.objective + pm.constant upper-bounds the binary maximum.
SdpSolution sdp_solve(const PlusMinusForm& pm, const SdpOptions& opts, std::uint64_t seed);

}  // namespace bocs
