// Microbenchmarks for the enumeration and simulation kernels: each parallel
// kernel against its serial reference, plus the Gibbs sweep that dominates
// the optimizer loop.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cstdint>

#include "bocs/binary.hpp"
#include "bocs/kernels.hpp"
#include "bocs/rng.hpp"
#include "bocs/surrogate.hpp"

namespace {

using namespace bocs;

struct QuboFixture {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  QuboFixture(int d, std::uint64_t seed) : A(d, d), b(d) {
    Rng rng(seed);
    A.setZero();
    for (int i = 0; i < d; ++i) {
      b[i] = rng.normal();
      for (int j = i + 1; j < d; ++j) A(i, j) = A(j, i) = rng.normal();
    }
  }
};

void bm_enumerate_qubo_serial(benchmark::State& state) {
  const QuboFixture f(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::enumerate_qubo_serial(f.A, f.b));
}
BENCHMARK(bm_enumerate_qubo_serial)->Arg(12)->Arg(16)->Arg(18);

void bm_enumerate_qubo(benchmark::State& state) {
  const QuboFixture f(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::enumerate_qubo(f.A, f.b));
}
BENCHMARK(bm_enumerate_qubo)->Arg(12)->Arg(16)->Arg(18);

kernels::EdgeList ring_edges(int n) {
  kernels::EdgeList edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  for (int i = 0; i + 7 < n; i += 5) edges.emplace_back(i, i + 7);
  return edges;
}

void bm_ising_suff_stats_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kernels::EdgeList edges = ring_edges(n);
  Rng rng(5);
  Eigen::VectorXd coeff(static_cast<int>(edges.size()));
  for (int e = 0; e < coeff.size(); ++e) coeff[e] = rng.normal();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::ising_suff_stats_serial(n, edges, coeff));
}
BENCHMARK(bm_ising_suff_stats_serial)->Arg(12)->Arg(16);

void bm_ising_suff_stats(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kernels::EdgeList edges = ring_edges(n);
  Rng rng(5);
  Eigen::VectorXd coeff(static_cast<int>(edges.size()));
  for (int e = 0; e < coeff.size(); ++e) coeff[e] = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::ising_suff_stats(n, edges, coeff));
}
BENCHMARK(bm_ising_suff_stats)->Arg(12)->Arg(16);

void bm_contamination_serial(benchmark::State& state) {
  const kernels::ContaminationDynamics dyn;
  Rng rng(9);
  const BinaryPoint x = random_point(25, rng);
  const int trajectories = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::contamination_violations_serial(dyn, x, trajectories, 42));
}
BENCHMARK(bm_contamination_serial)->Arg(100)->Arg(10000);

void bm_contamination(benchmark::State& state) {
  const kernels::ContaminationDynamics dyn;
  Rng rng(9);
  const BinaryPoint x = random_point(25, rng);
  const int trajectories = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::contamination_violations(dyn, x, trajectories, 42));
}
BENCHMARK(bm_contamination)->Arg(100)->Arg(10000);

void bm_gibbs_sweep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const MonomialBasis basis = make_basis(d, 2);
  Dataset data(basis);
  Rng rng(3);
  const int n = 150;
  for (int i = 0; i < n; ++i) data.append(random_point(d, rng), rng.normal());
  SurrogatePosterior posterior(basis.size(), 77);
  for (auto _ : state) {
    gibbs_sweep(posterior, data);
    benchmark::DoNotOptimize(posterior.alpha);
  }
}
BENCHMARK(bm_gibbs_sweep)->Arg(10)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
