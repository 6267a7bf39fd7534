#include "bocs/binary.hpp"

#include <stdexcept>

namespace bocs {

std::string to_bitstring(const BinaryPoint& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s[i] = '1';
  return s;
}

BinaryPoint from_bitstring(const std::string& s) {
  BinaryPoint x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1')
      throw std::invalid_argument("from_bitstring: entries must be 0 or 1");
    x[i] = s[i] == '1' ? 1 : 0;
  }
  return x;
}

BinaryPoint point_from_mask(std::uint64_t bits, int d) {
  BinaryPoint x(d);
  for (int i = 0; i < d; ++i) x[i] = (bits >> i) & 1u;
  return x;
}

BinaryPoint random_point(int d, Rng& rng) {
  BinaryPoint x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform() < 0.5 ? 0 : 1;
  return x;
}

std::int64_t basis_size(int d, int order) {
  std::int64_t total = 0;
  for (int j = 0; j <= order; ++j) {
    std::int64_t c = 1;
    for (int i = 0; i < j; ++i) c = c * (d - i) / (i + 1);
    total += c;
  }
  return total;
}

MonomialBasis make_basis(int d, int order) {
  if (d < 1 || order < 1) throw std::invalid_argument("make_basis: d and order must be >= 1");
  MonomialBasis basis;
  basis.d = d;
  basis.order = order;
  basis.terms.reserve(static_cast<std::size_t>(basis_size(d, order)));
  basis.terms.push_back({});  // intercept
  // subsets of each cardinality in lexicographic order
  std::vector<int> idx;
  for (int k = 1; k <= order && k <= d; ++k) {
    idx.assign(k, 0);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      basis.terms.push_back(idx);
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == d - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return basis;
}

Eigen::VectorXd expand(const MonomialBasis& basis, const BinaryPoint& x) {
  if (static_cast<int>(x.size()) != basis.d)
    throw std::invalid_argument("expand: point dimension does not match basis");
  Eigen::VectorXd phi(basis.size());
  for (int t = 0; t < basis.size(); ++t) {
    double v = 1.0;
    for (int i : basis.terms[t]) v *= x[i];
    phi[t] = v;
  }
  return phi;
}

Dataset::Dataset(MonomialBasis basis) : basis_(std::move(basis)) {
  X_.resize(16, basis_.size());
  y_.resize(16);
}

void Dataset::append(const BinaryPoint& x, double y) {
  if (n_ == X_.rows()) {
    Eigen::MatrixXd grown(2 * X_.rows(), X_.cols());
    grown.topRows(n_) = X_.topRows(n_);
    X_.swap(grown);
    Eigen::VectorXd ygrown(2 * y_.size());
    ygrown.head(n_) = y_.head(n_);
    y_.swap(ygrown);
  }
  X_.row(n_) = expand(basis_, x).transpose();
  y_[n_] = y;
  points_.push_back(x);
  ++n_;
}

}  // namespace bocs
