#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "bocs/rng.hpp"

namespace bocs {

/// A point of the binary hypercube; entries are 0 or 1, dimension is size().
using BinaryPoint = std::vector<std::uint8_t>;

std::string to_bitstring(const BinaryPoint& x);
BinaryPoint from_bitstring(const std::string& s);
BinaryPoint point_from_mask(std::uint64_t bits, int d);
BinaryPoint random_point(int d, Rng& rng);

/// Monomial feature basis over d binary variables: the empty set (intercept),
/// singletons in index order, pairs in lexicographic order, then triples and
/// so on up to the given order. Term count is sum_{j<=order} C(d, j).
struct MonomialBasis {
  int d = 0;
  int order = 0;
  std::vector<std::vector<int>> terms;

  int size() const { return static_cast<int>(terms.size()); }
};

MonomialBasis make_basis(int d, int order);

/// Number of basis terms without materializing the term list.
std::int64_t basis_size(int d, int order);

/// Expands x into the monomial feature vector: entry for subset S is the
/// product of the selected bits, so every entry is 0 or 1.
Eigen::VectorXd expand(const MonomialBasis& basis, const BinaryPoint& x);

/// Append-only regression data: raw binary points, their expanded features
/// and the scalar observations.
class Dataset {
 public:
  explicit Dataset(MonomialBasis basis);

  void append(const BinaryPoint& x, double y);

  int size() const { return n_; }
  int num_features() const { return basis_.size(); }
  const MonomialBasis& basis() const { return basis_; }
  const std::vector<BinaryPoint>& points() const { return points_; }

  Eigen::Ref<const Eigen::MatrixXd> features() const { return X_.topRows(n_); }
  Eigen::Ref<const Eigen::VectorXd> targets() const { return y_.head(n_); }

 private:
  MonomialBasis basis_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  std::vector<BinaryPoint> points_;
  int n_ = 0;
};

}  // namespace bocs
