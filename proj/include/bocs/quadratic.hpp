#pragma once

#include <Eigen/Core>

#include "bocs/binary.hpp"
#include "bocs/surrogate.hpp"

namespace bocs {

/// Regularizer subtracted from the surrogate inside the acquisition
/// subproblem. On the binary cube the squared-l2 penalty coincides with l1,
/// so both fold into the linear term.
struct Penalty {
  enum class Kind { none, l1, l2sq };
  Kind kind = Kind::none;
  double lambda = 0.0;

  double operator()(const BinaryPoint& x) const;
};

/// Maximization target x^T A x + b^T x + constant over {0,1}^d, with A
/// symmetric and hollow (diagonal contributions live in b since x_i^2 = x_i).
struct QuadObjective {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double constant = 0.0;

  int dim() const { return static_cast<int>(b.size()); }
  double value(const BinaryPoint& x) const;
};

/// Assembles the acquisition subproblem from a coefficient draw of an
/// order-2 basis, subtracting the penalty. The pairwise coefficient for
/// {i, j} splits evenly across A_ij and A_ji.
QuadObjective build_quadratic(const CoefficientDraw& draw, const Penalty& penalty);

/// Homogenized +/-1 form: with y = 2x - 1 and z = [y, 1],
/// z^T B z + constant equals QuadObjective::value(x) for every x.
struct PlusMinusForm {
  Eigen::MatrixXd B;  // (d+1) x (d+1) symmetric
  double constant = 0.0;

  int dim() const { return static_cast<int>(B.rows()) - 1; }
  double value(const Eigen::VectorXd& z) const { return z.dot(B * z) + constant; }
};

/// Change of variables x -> y = 2x - 1 plus the homogenizing coordinate:
/// B = [[A/4, c], [c^T, 0]] with c = b/4 + A 1/4, and the constant absorbs
/// (1^T A 1)/4 + (b^T 1)/2.
PlusMinusForm to_plus_minus(const QuadObjective& q);

}  // namespace bocs
