#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bocs/acquisition.hpp"
#include "bocs/benchmarks.hpp"
#include "bocs/search.hpp"
#include "bocs/surrogate.hpp"

#include "json.hpp"

namespace bocs {

enum class OptimizerKind { bocs_sdp, bocs_sa, mle_sa, sa, ols, rs };

std::string optimizer_kind_name(OptimizerKind kind);
OptimizerKind optimizer_kind_from_name(const std::string& name);  // ConfigError on unknown

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::bocs_sdp;
  std::string name;  // unique label; seeds and outputs key off it

  int order = 2;           // surrogate basis order (model-based kinds)
  int burn_in = 100;       // Gibbs sweeps after the initial dataset
  int sweeps = 5;          // Gibbs sweeps between acquisitions
  SdpAcquisitionConfig sdp;
  int sa_proposals = 0;    // acquisition annealer budget; 0 means max(500, d^2)
  AnnealSchedule schedule;  // annealer cooling (acquisition and baseline)

  bool model_based() const {
    return kind == OptimizerKind::bocs_sdp || kind == OptimizerKind::bocs_sa ||
           kind == OptimizerKind::mle_sa;
  }

  nlohmann::json to_json() const;
  static OptimizerSpec from_json(const nlohmann::json& j);
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string benchmark = "bqp";  // "bqp" | "ising" | "contamination"
  int d = 10;                     // bqp dimension / contamination stages
  double lc = 10.0;               // bqp correlation length
  int trajectories = 100;         // contamination Monte Carlo runs
  double lambda = 0.0;
  std::string penalty = "l1";  // acquisition regularizer: "l1" | "l2sq" | "none"
  int instances = 1;

  std::vector<OptimizerSpec> optimizers;

  int n0 = 20;
  int nmax = 120;
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);

  Penalty make_penalty() const;
  Benchmark make_benchmark(int instance_index) const;
};

struct IterationRow {
  int eval_index = 0;  // 0-based position in the evaluation sequence
  int iteration = 0;   // eval_index + 1 - n0; <= 0 during the initial phase
  bool charged = false;
  BinaryPoint x;
  double raw = 0.0;
  double objective = 0.0;
  double best = 0.0;  // running best objective in the benchmark's sense
  // Wall-clock seconds; kept out of the trace files so re-runs are
  // byte-identical, emitted separately instead.
  double t_model = 0.0, t_acq = 0.0, t_eval = 0.0, t_iter = 0.0;
};

struct RunRecord {
  std::string benchmark;
  std::string optimizer;
  int instance_index = 0;
  int replication = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t run_seed = 0;
  double lambda = 0.0;
  bool minimize = false;
  int n0 = 0;
  int nmax = 0;
  std::vector<IterationRow> rows;  // exactly nmax entries
  BinaryPoint final_point;         // best evaluated point
  double final_objective = 0.0;
  std::optional<double> optimum;  // exact objective optimum when enumerable
  nlohmann::json config_snapshot;  // optimizer parameters + instance payload

  nlohmann::json to_json() const;  // no timing fields
  static RunRecord from_json(const nlohmann::json& j);
};

/// Model-based loop: initial dataset, then draw-acquire-evaluate-append.
/// The initial points and observations depend only on (master seed,
/// instance, replication), so every model-based optimizer in a replication
/// starts from the same data.
RunRecord run_bocs(const Benchmark& bench, const ExperimentConfig& config,
                   const OptimizerSpec& spec, int instance_index, int replication);

/// Search baselines over the true objective with the first n0 evaluations
/// granted as free steps.
RunRecord run_baseline(const Benchmark& bench, const ExperimentConfig& config,
                       const OptimizerSpec& spec, int instance_index, int replication);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;  // instance-major, then replication, then optimizer
};

/// Runs every (instance, replication, optimizer) task; tasks execute in
/// parallel but land in deterministic slots.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Per-evaluation |optimum - running best|; nonincreasing.
std::vector<double> simple_regret(const RunRecord& rec, double optimum);

struct SummaryRow {
  std::string optimizer;
  int iteration = 0;
  std::string statistic;  // "regret" or "best"
  double mean = 0.0;
  double two_se = 0.0;  // 2 standard errors across runs
  int count = 0;
};

/// Mean +/- 2 SE of the reported statistic at the given iterations, pooled
/// across instances and replications.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records,
                                  const std::vector<int>& iterations);

/// Surrogate-fit comparison on held-out points: for each training size,
/// mean absolute prediction error of the least-squares, conjugate-Gaussian
/// and shrinkage-posterior fits, averaged over seeds.
struct ValidationRow {
  int n = 0;
  double mle_error = 0.0, blr_error = 0.0, sparse_error = 0.0;
  double mle_se = 0.0, blr_se = 0.0, sparse_se = 0.0;
};

std::vector<ValidationRow> validate_models(const Benchmark& bench, const std::vector<int>& n_grid,
                                           int test_points, int replications, std::uint64_t seed);

/// Writes traces.jsonl (timing-free), curves.csv, timings.csv, summary.csv
/// and an SVG of the mean +/- 2 SE curves into `dir`.
void emit_outputs(const std::vector<RunRecord>& records, const std::string& dir);

std::vector<RunRecord> load_records(const std::string& jsonl_path);

}  // namespace bocs
