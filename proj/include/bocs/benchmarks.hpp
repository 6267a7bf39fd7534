#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>

#include <Eigen/Core>

#include "bocs/binary.hpp"
#include "bocs/kernels.hpp"

#include "json.hpp"

namespace bocs {

/// One benchmark call. `raw` is the unregularized value the surrogate
/// models; `objective` adds the lambda term and is what curves report.
/// Both are in the benchmark's native sense (BQP maximizes, the others
/// minimize).
struct EvalResult {
  double raw = 0.0;
  double objective = 0.0;
};

struct BqpOptimum {
  BinaryPoint point;
  double value = 0.0;  // max of x^T Q x - lambda |x|_1
};

/// Quadratic with smoothly correlated coefficients: Q = G ∘ K where G is
/// i.i.d. standard Gaussian and K_ij = exp(-(i-j)^2 / lc^2).
struct BqpInstance {
  int d = 10;
  double lc = 10.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd Q;
  std::optional<BqpOptimum> optimum;  // cached by enumeration for d <= 20
};

BqpInstance bqp_generate(int d, double lc, double lambda, std::uint64_t seed);
double bqp_eval(const BqpInstance& inst, const BinaryPoint& x);

/// Zero-field Ising model p(z) ∝ exp(z^T J z) on a 4x4 grid: n = 16 spins,
/// 24 edges. Edge magnitudes are uniform in [0.05, 5] with random sign.
/// Moments and log Z_p are enumerated once at generation.
struct IsingInstance {
  int n = 16;
  kernels::EdgeList edges;
  Eigen::VectorXd jp;       // per-edge interaction values, edge-list order
  std::uint64_t seed = 0;
  Eigen::VectorXd moments;  // E_p[z_a z_b] per edge
  double log_zp = 0.0;

  int num_edges() const { return static_cast<int>(edges.size()); }
};

IsingInstance ising_generate(std::uint64_t seed);
/// KL(p || q_x) where q_x keeps exactly the edges with x_e = 1 at their
/// original weights. Requires a fresh 2^n enumeration for Z_q each call.
double ising_kl(const IsingInstance& inst, const BinaryPoint& x);
double ising_eval(const IsingInstance& inst, const BinaryPoint& x, double lambda);

/// Food-chain contamination control: choose prevention stages x to trade
/// staffing cost against the fraction of Monte Carlo runs whose
/// contamination exceeds the limit at each stage.
struct ContaminationInstance {
  int d = 25;
  int trajectories = 100;  // Monte Carlo runs per evaluation
  std::uint64_t seed = 0;
  kernels::ContaminationDynamics dynamics;
  Eigen::VectorXd costs;  // per-stage prevention cost, ones by default
  double rho = 1.0;       // weight per violation fraction
  double eps = 0.05;      // recorded for provenance; not in the objective
};

ContaminationInstance contamination_generate(int d, int trajectories, std::uint64_t seed);
/// Stochastic: simulates a fresh batch of trajectories from `seed`.
double contamination_eval(const ContaminationInstance& inst, const BinaryPoint& x, double lambda,
                          std::uint64_t seed);

/// Uniform facade the harness runs against.
class Benchmark {
 public:
  Benchmark(BqpInstance inst);
  Benchmark(IsingInstance inst, double lambda);
  Benchmark(ContaminationInstance inst, double lambda);

  const std::string& kind() const { return kind_; }
  int dim() const { return dim_; }
  bool minimize() const { return minimize_; }
  double lambda() const { return lambda_; }
  bool stochastic() const { return kind_ == "contamination"; }

  /// `seed` only matters for stochastic benchmarks; callers pass a fresh
  /// namespaced seed per evaluation either way.
  EvalResult evaluate(const BinaryPoint& x, std::uint64_t seed) const;

  /// Score used for best-so-far reporting. Deterministic benchmarks return the
  /// observed objective unchanged; stochastic ones re-simulate x under a fixed
  /// instance-keyed valuation stream, so curves rank plans rather than lucky
  /// draws.
  double report_value(const BinaryPoint& x, const EvalResult& observed) const;

  /// Exact optimum of `objective` in the native sense, when enumerable.
  std::optional<double> optimum_value() const;
  std::optional<BinaryPoint> optimum_point() const;

  const BqpInstance* as_bqp() const { return std::get_if<BqpInstance>(&instance_); }
  const IsingInstance* as_ising() const { return std::get_if<IsingInstance>(&instance_); }
  const ContaminationInstance* as_contamination() const {
    return std::get_if<ContaminationInstance>(&instance_);
  }

  nlohmann::json to_json() const;
  static Benchmark from_json(const nlohmann::json& j);

 private:
  std::string kind_;
  int dim_ = 0;
  bool minimize_ = false;
  double lambda_ = 0.0;
  std::variant<BqpInstance, IsingInstance, ContaminationInstance> instance_;
  // The valuation batch is deterministic per instance, so report values can be
  // memoized across every run sharing this benchmark (keyed by the bit pattern;
  // only populated for d <= 64).
  mutable std::unordered_map<std::uint64_t, double> report_cache_;
};

}  // namespace bocs
