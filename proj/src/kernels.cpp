#include "bocs/kernels.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "bocs/rng.hpp"

namespace bocs::kernels {

namespace {

void check_qubo_args(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index d = b.size();
  if (A.rows() != d || A.cols() != d)
    throw std::invalid_argument("enumerate_qubo: A must be d x d");
  if (d < 1 || d > 30) throw std::invalid_argument("enumerate_qubo: need 1 <= d <= 30");
}

bool qubo_better(double value, std::uint64_t mask, const QuboBest& best) {
  return value > best.value || (value == best.value && mask < best.mask);
}

double qubo_value_naive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::uint64_t mask) {
  const int d = static_cast<int>(b.size());
  double v = 0.0;
  for (int i = 0; i < d; ++i) {
    if (!((mask >> i) & 1u)) continue;
    v += b[i];
    for (int j = 0; j < d; ++j)
      if ((mask >> j) & 1u) v += A(i, j);
  }
  return v;
}

// Best over the Gray-code positions [lo, hi): the visited masks are
// g(i) = i ^ (i >> 1), consecutive ones differing in bit ctz(i+1).
QuboBest qubo_gray_range(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::uint64_t lo,
                         std::uint64_t hi) {
  const int d = static_cast<int>(b.size());
  std::uint64_t mask = lo ^ (lo >> 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) x[i] = (mask >> i) & 1u ? 1.0 : 0.0;
  Eigen::VectorXd m = A * x;  // m_j tracks Σ_i A_ij x_i across flips
  double value = x.dot(m) + b.dot(x);

  QuboBest best{mask, value};
  for (std::uint64_t i = lo; i + 1 < hi; ++i) {
    const int j = std::countr_zero(i + 1);
    const double s = (mask >> j) & 1u ? -1.0 : 1.0;
    value += s * (b[j] + 2.0 * m[j]);  // A hollow: flip delta from m alone
    m += s * A.col(j);
    mask ^= std::uint64_t{1} << j;
    if (qubo_better(value, mask, best)) best = {mask, value};
  }
  return best;
}

struct IsingPartials {
  double zsum = 0.0;
  Eigen::VectorXd msum;
};

// Accumulates Σ exp(E - shift) and per-edge Σ s_e exp(E - shift) over the
// Gray-code positions [lo, hi), updating edge signs incrementally.
IsingPartials ising_gray_range(int n, const EdgeList& edges, const Eigen::VectorXd& coeff,
                               double shift, std::uint64_t lo, std::uint64_t hi) {
  const int ne = static_cast<int>(edges.size());
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (int e = 0; e < ne; ++e) {
    incident[static_cast<std::size_t>(edges[e].first)].push_back(e);
    incident[static_cast<std::size_t>(edges[e].second)].push_back(e);
  }

  std::uint64_t mask = lo ^ (lo >> 1);
  std::vector<double> sign(static_cast<std::size_t>(ne));
  double energy = 0.0;
  for (int e = 0; e < ne; ++e) {
    const double za = (mask >> edges[e].first) & 1u ? 1.0 : -1.0;
    const double zb = (mask >> edges[e].second) & 1u ? 1.0 : -1.0;
    sign[e] = za * zb;
    energy += coeff[e] * sign[e];
  }

  IsingPartials out;
  out.msum = Eigen::VectorXd::Zero(ne);
  for (std::uint64_t i = lo;; ++i) {
    const double w = std::exp(energy - shift);
    out.zsum += w;
    for (int e = 0; e < ne; ++e) out.msum[e] += w * sign[e];
    if (i + 1 >= hi) break;
    const int k = std::countr_zero(i + 1);
    for (int e : incident[static_cast<std::size_t>(k)]) {
      energy -= 2.0 * coeff[e] * sign[e];
      sign[e] = -sign[e];
    }
    mask ^= std::uint64_t{1} << k;
  }
  return out;
}

void check_ising_args(int n, const EdgeList& edges, const Eigen::VectorXd& coeff) {
  if (n < 1 || n > 24) throw std::invalid_argument("ising_suff_stats: need 1 <= n <= 24");
  if (coeff.size() != static_cast<Eigen::Index>(edges.size()))
    throw std::invalid_argument("ising_suff_stats: one coefficient per edge");
  for (const auto& [a, b] : edges)
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw std::invalid_argument("ising_suff_stats: bad edge");
}

// One contamination trajectory; returns per-stage violation flags via count.
void contamination_trajectory(const ContaminationDynamics& dyn, const BinaryPoint& x,
                              std::uint64_t traj_seed, std::vector<std::int64_t>& count) {
  Rng rng(traj_seed);
  double z = rng.beta(dyn.initial_a, dyn.initial_b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double growth = rng.beta(dyn.growth_a, dyn.growth_b);
    const double cleanup = rng.beta(dyn.cleanup_a, dyn.cleanup_b);
    const double xi = x[i] ? 1.0 : 0.0;
    z = growth * (1.0 - xi) * (1.0 - z) + (1.0 - cleanup * xi) * z;
    if (z > dyn.limit) ++count[i];
  }
}

}  // namespace

QuboBest enumerate_qubo_serial(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  check_qubo_args(A, b);
  const int d = static_cast<int>(b.size());
  const std::uint64_t total = std::uint64_t{1} << d;
  QuboBest best{0, qubo_value_naive(A, b, 0)};
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const double v = qubo_value_naive(A, b, mask);
    if (qubo_better(v, mask, best)) best = {mask, v};
  }
  return best;
}

QuboBest enumerate_qubo(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  check_qubo_args(A, b);
  const int d = static_cast<int>(b.size());
  // Fold any diagonal into the linear term (x_i^2 == x_i) so the Gray-code
  // delta only needs the off-diagonal running sums.
  Eigen::MatrixXd Ah = A;
  Eigen::VectorXd bh = b + A.diagonal();
  Ah.diagonal().setZero();

  const std::uint64_t total = std::uint64_t{1} << d;
  const int chunks = total < static_cast<std::uint64_t>(kNumChunks)
                         ? static_cast<int>(total)
                         : kNumChunks;
  std::vector<QuboBest> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t lo = total / static_cast<std::uint64_t>(chunks) * c;
    const std::uint64_t hi = total / static_cast<std::uint64_t>(chunks) * (c + 1);
    partial[static_cast<std::size_t>(c)] = qubo_gray_range(Ah, bh, lo, hi);
  }
  QuboBest best = partial[0];
  for (int c = 1; c < chunks; ++c)
    if (qubo_better(partial[c].value, partial[c].mask, best)) best = partial[c];
  return best;
}

IsingStats ising_suff_stats_serial(int n, const EdgeList& edges, const Eigen::VectorXd& coeff) {
  check_ising_args(n, edges, coeff);
  const int ne = static_cast<int>(edges.size());
  const double shift = coeff.cwiseAbs().sum();
  const std::uint64_t total = std::uint64_t{1} << n;
  double zsum = 0.0;
  Eigen::VectorXd msum = Eigen::VectorXd::Zero(ne);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double energy = 0.0;
    for (int e = 0; e < ne; ++e) {
      const double za = (mask >> edges[e].first) & 1u ? 1.0 : -1.0;
      const double zb = (mask >> edges[e].second) & 1u ? 1.0 : -1.0;
      energy += coeff[e] * za * zb;
    }
    const double w = std::exp(energy - shift);
    zsum += w;
    for (int e = 0; e < ne; ++e) {
      const double za = (mask >> edges[e].first) & 1u ? 1.0 : -1.0;
      const double zb = (mask >> edges[e].second) & 1u ? 1.0 : -1.0;
      msum[e] += w * za * zb;
    }
  }
  IsingStats stats;
  stats.log_z = std::log(zsum) + shift;
  stats.moments = msum / zsum;
  return stats;
}

IsingStats ising_suff_stats(int n, const EdgeList& edges, const Eigen::VectorXd& coeff) {
  check_ising_args(n, edges, coeff);
  const double shift = coeff.cwiseAbs().sum();
  const std::uint64_t total = std::uint64_t{1} << n;
  const int chunks = total < static_cast<std::uint64_t>(kNumChunks)
                         ? static_cast<int>(total)
                         : kNumChunks;
  std::vector<IsingPartials> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t lo = total / static_cast<std::uint64_t>(chunks) * c;
    const std::uint64_t hi = total / static_cast<std::uint64_t>(chunks) * (c + 1);
    partial[static_cast<std::size_t>(c)] = ising_gray_range(n, edges, coeff, shift, lo, hi);
  }
  double zsum = 0.0;
  Eigen::VectorXd msum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(edges.size()));
  for (const IsingPartials& p : partial) {  // fixed chunk order: deterministic
    zsum += p.zsum;
    msum += p.msum;
  }
  IsingStats stats;
  stats.log_z = std::log(zsum) + shift;
  stats.moments = msum / zsum;
  return stats;
}

std::vector<std::int64_t> contamination_violations_serial(const ContaminationDynamics& dyn,
                                                          const BinaryPoint& x, int trajectories,
                                                          std::uint64_t seed) {
  if (trajectories < 1)
    throw std::invalid_argument("contamination_violations: trajectories must be positive");
  std::vector<std::int64_t> count(x.size(), 0);
  for (int t = 0; t < trajectories; ++t)
    contamination_trajectory(dyn, x, subseed(seed, static_cast<std::uint64_t>(t)), count);
  return count;
}

std::vector<std::int64_t> contamination_violations(const ContaminationDynamics& dyn,
                                                   const BinaryPoint& x, int trajectories,
                                                   std::uint64_t seed) {
  if (trajectories < 1)
    throw std::invalid_argument("contamination_violations: trajectories must be positive");
  std::vector<std::int64_t> count(x.size(), 0);
#pragma omp parallel
  {
    std::vector<std::int64_t> local(x.size(), 0);
#pragma omp for schedule(static)
    for (int t = 0; t < trajectories; ++t)
      contamination_trajectory(dyn, x, subseed(seed, static_cast<std::uint64_t>(t)), local);
#pragma omp critical
    for (std::size_t i = 0; i < count.size(); ++i) count[i] += local[i];
  }
  return count;
}

}  // namespace bocs::kernels
