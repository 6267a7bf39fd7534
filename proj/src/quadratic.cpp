#include "bocs/quadratic.hpp"

#include <stdexcept>

namespace bocs {

double Penalty::operator()(const BinaryPoint& x) const {
  if (kind == Kind::none) return 0.0;
  double s = 0.0;
  for (std::uint8_t xi : x) s += xi;  // |x|_1 == |x|_2^2 on {0,1}^d
  return lambda * s;
}

double QuadObjective::value(const BinaryPoint& x) const {
  const int d = dim();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("QuadObjective::value: dimension mismatch");
  double lin = constant;
  Eigen::VectorXd xv(d);
  for (int i = 0; i < d; ++i) {
    xv[i] = x[i];
    if (x[i]) lin += b[i];
  }
  return xv.dot(A * xv) + lin;
}

QuadObjective build_quadratic(const CoefficientDraw& draw, const Penalty& penalty) {
  const MonomialBasis& basis = draw.basis;
  if (basis.order < 2)
    throw std::invalid_argument("build_quadratic: needs an order-2 basis");
  const int d = basis.d;
  QuadObjective q;
  q.A = Eigen::MatrixXd::Zero(d, d);
  q.b = Eigen::VectorXd::Zero(d);
  q.constant = 0.0;
  for (std::size_t t = 0; t < basis.terms.size(); ++t) {
    const auto& term = basis.terms[t];
    const double a = draw.alpha[static_cast<Eigen::Index>(t)];
    switch (term.size()) {
      case 0:
        q.constant = a;
        break;
      case 1:
        q.b[term[0]] += a;
        break;
      case 2:
        q.A(term[0], term[1]) += 0.5 * a;
        q.A(term[1], term[0]) += 0.5 * a;
        break;
      default:
        break;  // higher-order terms have no quadratic image; dropped
    }
  }
  // Both penalties are linear in x on the cube, so they shift b uniformly.
  if (penalty.kind != Penalty::Kind::none) q.b.array() -= penalty.lambda;
  return q;
}

PlusMinusForm to_plus_minus(const QuadObjective& q) {
  const int d = q.dim();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d);
  const Eigen::VectorXd c = q.b / 4.0 + (q.A * ones) / 4.0;
  PlusMinusForm pm;
  pm.B = Eigen::MatrixXd::Zero(d + 1, d + 1);
  pm.B.topLeftCorner(d, d) = q.A / 4.0;
  pm.B.topRightCorner(d, 1) = c;
  pm.B.bottomLeftCorner(1, d) = c.transpose();
  pm.constant = q.constant + ones.dot(q.A * ones) / 4.0 + q.b.sum() / 2.0;
  return pm;
}

}  // namespace bocs
