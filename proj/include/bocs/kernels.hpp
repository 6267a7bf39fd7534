#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bocs/binary.hpp"

namespace bocs::kernels {

/// All parallel kernels split their iteration space into this many fixed
/// chunks and combine per-chunk results in chunk order, so floating-point
/// output is bitwise independent of the OpenMP thread count.
inline constexpr int kNumChunks = 64;

struct QuboBest {
  std::uint64_t mask = 0;
  double value = 0.0;
};

/// Exhaustive maximization of x^T A x + b^T x over {0,1}^d (A symmetric; a
/// nonzero diagonal is folded into b first). `_serial` recomputes every
/// point from scratch in natural mask order; the parallel version walks a
/// Gray-code sequence per chunk with O(d) incremental updates. Ties resolve
/// to the smallest mask in both.
QuboBest enumerate_qubo_serial(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
QuboBest enumerate_qubo(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

using EdgeList = std::vector<std::pair<int, int>>;

struct IsingStats {
  double log_z = 0.0;
  Eigen::VectorXd moments;  // E[z_a z_b] per edge, in edge-list order
};

/// Partition function and pairwise moments of p(z) ∝ exp(Σ_e c_e z_a z_b)
/// over z ∈ {-1,+1}^n by enumeration of all 2^n spin states. Energies are
/// shifted by their maximum bound before exponentiation so the sums never
/// overflow. Serial version: natural order, from-scratch energies; parallel:
/// chunked Gray-code walk with incremental edge-sign updates.
IsingStats ising_suff_stats_serial(int n, const EdgeList& edges, const Eigen::VectorXd& coeff);
IsingStats ising_suff_stats(int n, const EdgeList& edges, const Eigen::VectorXd& coeff);

/// Stage transition rates for the contamination recursion
/// Z_i = Lambda_i (1 - x_i)(1 - Z_{i-1}) + (1 - Gamma_i x_i) Z_{i-1},
/// with fractions drawn fresh per trajectory from the Beta laws below.
struct ContaminationDynamics {
  double initial_a = 1.0, initial_b = 30.0;   // Z_0
  double growth_a = 1.0, growth_b = 17.0 / 3.0;   // Lambda_i
  double cleanup_a = 1.0, cleanup_b = 3.0 / 7.0;  // Gamma_i
  double limit = 0.1;                             // violation threshold U
};

/// Simulates `trajectories` independent runs of the recursion for a given
/// prevention plan x and returns, per stage, how many trajectories exceeded
/// the contamination limit. Each trajectory gets its own generator seeded
/// from (seed, trajectory index), so results are independent of execution
/// order; counts are integers, so the parallel reduction is exact.
std::vector<std::int64_t> contamination_violations_serial(const ContaminationDynamics& dyn,
                                                          const BinaryPoint& x, int trajectories,
                                                          std::uint64_t seed);
std::vector<std::int64_t> contamination_violations(const ContaminationDynamics& dyn,
                                                   const BinaryPoint& x, int trajectories,
                                                   std::uint64_t seed);

}  // namespace bocs::kernels
