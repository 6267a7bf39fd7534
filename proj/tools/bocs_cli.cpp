#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bocs/errors.hpp"
#include "bocs/harness.hpp"
#include "bocs/kernels.hpp"
#include "bocs/svg.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bocs::ConfigError("cannot open " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw bocs::ConfigError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_summary(const std::vector<bocs::SummaryRow>& rows) {
  for (const bocs::SummaryRow& row : rows)
    std::cout << row.optimizer << " @ iteration " << row.iteration << ": " << row.statistic << " = "
              << fmt(row.mean) << " +/- " << fmt(row.two_se) << " (n=" << row.count << ")\n";
}

int run_verb(const std::string& config_path, const CLI::Option* seed_opt, std::uint64_t seed,
             const CLI::Option* reps_opt, int reps, const CLI::Option* out_opt,
             const std::string& out_dir, const std::vector<std::string>& optimizer_filter) {
  bocs::ExperimentConfig cfg = bocs::ExperimentConfig::from_json(read_json_file(config_path));
  if (*seed_opt) cfg.master_seed = seed;
  if (*reps_opt) cfg.replications = reps;
  if (*out_opt) cfg.output_dir = out_dir;
  if (!optimizer_filter.empty()) {
    std::vector<bocs::OptimizerSpec> kept;
    for (const std::string& want : optimizer_filter) {
      const auto it = std::find_if(cfg.optimizers.begin(), cfg.optimizers.end(),
                                   [&](const bocs::OptimizerSpec& s) { return s.name == want; });
      if (it == cfg.optimizers.end())
        throw bocs::ConfigError("optimizer \"" + want + "\" not present in config");
      kept.push_back(*it);
    }
    cfg.optimizers = kept;
  }
  cfg.validate();

  const bocs::ExperimentResult result = bocs::run_experiment(cfg);
  bocs::emit_outputs(result.records, cfg.output_dir);
  write_text_file(cfg.output_dir + "/config.json", cfg.to_json().dump(2) + "\n");

  std::vector<int> iters{cfg.nmax - cfg.n0};
  print_summary(bocs::summarize(result.records, iters));
  std::cout << "wrote " << result.records.size() << " runs to " << cfg.output_dir << "\n";
  return 0;
}

int validate_verb(const std::string& benchmark, int d, int trajectories, double lc, double lambda,
                  std::vector<int> train_sizes, int test_points, int replications,
                  std::uint64_t seed, const std::string& out_dir) {
  bocs::ExperimentConfig cfg;
  cfg.benchmark = benchmark;
  cfg.d = d;
  cfg.lc = lc;
  cfg.trajectories = trajectories;
  cfg.lambda = lambda;
  cfg.master_seed = seed;
  if (d < 1 || trajectories < 1 || lambda < 0.0)
    throw bocs::ConfigError("validate: invalid benchmark parameters");
  const bocs::Benchmark bench = cfg.make_benchmark(0);

  if (train_sizes.empty()) train_sizes = {20, 40, 60, 80, 105, 130, 160, 200};
  const std::vector<bocs::ValidationRow> table =
      bocs::validate_models(bench, train_sizes, test_points, replications, seed);

  std::filesystem::create_directories(out_dir);
  std::string csv = "n,mle_error,mle_se,blr_error,blr_se,sparse_error,sparse_se\n";
  for (const bocs::ValidationRow& row : table) {
    csv += std::to_string(row.n) + ',' + fmt(row.mle_error) + ',' + fmt(row.mle_se) + ',' +
           fmt(row.blr_error) + ',' + fmt(row.blr_se) + ',' + fmt(row.sparse_error) + ',' +
           fmt(row.sparse_se) + '\n';
  }
  write_text_file(out_dir + "/validation.csv", csv);

  std::vector<bocs::CurveSeries> series(3);
  series[0].label = "mle";
  series[1].label = "blr";
  series[2].label = "sparse";
  for (const bocs::ValidationRow& row : table) {
    series[0].x.push_back(row.n);
    series[0].mean.push_back(row.mle_error);
    series[0].half_width.push_back(2.0 * row.mle_se);
    series[1].x.push_back(row.n);
    series[1].mean.push_back(row.blr_error);
    series[1].half_width.push_back(2.0 * row.blr_se);
    series[2].x.push_back(row.n);
    series[2].mean.push_back(row.sparse_error);
    series[2].half_width.push_back(2.0 * row.sparse_se);
  }
  bocs::write_curve_svg(out_dir + "/validation.svg",
                        benchmark + ": mean absolute test error ± 2 SE", "training points N",
                        "test error", series);

  for (const bocs::ValidationRow& row : table)
    std::cout << "N=" << row.n << ": mle=" << fmt(row.mle_error) << " blr=" << fmt(row.blr_error)
              << " sparse=" << fmt(row.sparse_error) << "\n";
  std::cout << "wrote " << out_dir << "/validation.csv\n";
  return 0;
}

int oracle_verb(const std::string& instance_path, const CLI::Option* bench_opt,
                const std::string& benchmark, int d, double lc, double lambda,
                std::uint64_t seed) {
  std::optional<bocs::Benchmark> bench;
  if (!instance_path.empty())
    bench = bocs::Benchmark::from_json(read_json_file(instance_path));
  else if (*bench_opt) {
    bocs::ExperimentConfig cfg;
    cfg.benchmark = benchmark;
    cfg.d = d;
    cfg.lc = lc;
    cfg.lambda = lambda;
    cfg.master_seed = seed;
    bench = cfg.make_benchmark(0);
  } else {
    throw bocs::ConfigError("oracle: pass --instance FILE or --benchmark KIND");
  }

  if (bench->kind() != "bqp")
    throw bocs::ConfigError("oracle: " + bench->kind() +
                            " has no enumerable optimum; use best-value curves instead");
  const bocs::BqpInstance* inst = bench->as_bqp();
  if (inst->d > 30) throw bocs::ConfigError("oracle: enumeration beyond d=30 is not supported");
  const Eigen::MatrixXd S = 0.5 * (inst->Q + inst->Q.transpose());
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(inst->d, -inst->lambda);
  const bocs::kernels::QuboBest best = bocs::kernels::enumerate_qubo(S, b);
  std::cout << "optimum " << fmt(best.value) << " at "
            << bocs::to_bitstring(bocs::point_from_mask(best.mask, inst->d)) << "\n";
  return 0;
}

int plot_verb(const std::string& traces_path, const std::string& out_dir) {
  const std::vector<bocs::RunRecord> records = bocs::load_records(traces_path);
  bocs::emit_outputs(records, out_dir);
  std::cout << "wrote curves for " << records.size() << " runs to " << out_dir << "\n";
  return 0;
}

int bench_gen_verb(const std::string& benchmark, int count, int d, double lc, int trajectories,
                   double lambda, std::uint64_t seed, const std::string& out_dir) {
  if (count < 1) throw bocs::ConfigError("bench-gen: count must be positive");
  bocs::ExperimentConfig cfg;
  cfg.benchmark = benchmark;
  cfg.d = d;
  cfg.lc = lc;
  cfg.trajectories = trajectories;
  cfg.lambda = lambda;
  cfg.master_seed = seed;
  if (d < 1 || trajectories < 1 || lambda < 0.0)
    throw bocs::ConfigError("bench-gen: invalid benchmark parameters");
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const bocs::Benchmark bench = cfg.make_benchmark(i);
    const std::string path = out_dir + "/" + benchmark + "-" + std::to_string(i) + ".json";
    write_text_file(path, bench.to_json().dump(2) + "\n");
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization of combinatorial structures: experiments and tools"};
  app.require_subcommand(1);

  // run
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config and write outputs");
  std::string config_path;
  run_cmd->add_option("-c,--config", config_path, "experiment config (JSON)")->required();
  std::uint64_t run_seed = 0;
  CLI::Option* run_seed_opt = run_cmd->add_option("-s,--seed", run_seed, "override master seed");
  int run_reps = 1;
  CLI::Option* run_reps_opt =
      run_cmd->add_option("-r,--replications", run_reps, "override replication count");
  std::string run_out;
  CLI::Option* run_out_opt = run_cmd->add_option("-o,--output-dir", run_out, "override output dir");
  std::vector<std::string> run_optimizers;
  run_cmd->add_option("--optimizers", run_optimizers, "run only these optimizers (by name)")
      ->delimiter(',');

  // validate
  CLI::App* val_cmd =
      app.add_subcommand("validate", "compare surrogate fits on held-out benchmark points");
  std::string val_bench = "contamination";
  val_cmd->add_option("-b,--benchmark", val_bench, "bqp | ising | contamination");
  int val_d = 20;
  val_cmd->add_option("-d,--d", val_d, "dimension (bqp / contamination)");
  int val_T = 1000;
  val_cmd->add_option("-T,--trajectories", val_T, "contamination Monte Carlo runs");
  double val_lc = 10.0;
  val_cmd->add_option("--lc", val_lc, "bqp correlation length");
  double val_lambda = 0.0;
  val_cmd->add_option("-l,--lambda", val_lambda, "regularization weight");
  std::vector<int> val_sizes;
  val_cmd->add_option("-n,--train-sizes", val_sizes, "training-set sizes")->delimiter(',');
  int val_m = 50;
  val_cmd->add_option("-m,--test-points", val_m, "held-out test points");
  int val_reps = 10;
  val_cmd->add_option("-r,--replications", val_reps, "seeds to average over");
  std::uint64_t val_seed = 0;
  val_cmd->add_option("-s,--seed", val_seed, "master seed");
  std::string val_out = "out/validate";
  val_cmd->add_option("-o,--output-dir", val_out, "output directory");

  // oracle
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force the optimum of an instance");
  std::string oracle_instance;
  oracle_cmd->add_option("-i,--instance", oracle_instance, "instance file from bench-gen");
  std::string oracle_bench = "bqp";
  CLI::Option* oracle_bench_opt =
      oracle_cmd->add_option("-b,--benchmark", oracle_bench, "generate instead: benchmark kind");
  int oracle_d = 10;
  oracle_cmd->add_option("-d,--d", oracle_d, "dimension");
  double oracle_lc = 10.0;
  oracle_cmd->add_option("--lc", oracle_lc, "bqp correlation length");
  double oracle_lambda = 0.0;
  oracle_cmd->add_option("-l,--lambda", oracle_lambda, "regularization weight");
  std::uint64_t oracle_seed = 0;
  oracle_cmd->add_option("-s,--seed", oracle_seed, "master seed");

  // plot
  CLI::App* plot_cmd = app.add_subcommand("plot", "regenerate curves and plots from saved traces");
  std::string plot_traces;
  plot_cmd->add_option("-t,--traces", plot_traces, "traces.jsonl from a previous run")->required();
  std::string plot_out = "out/plot";
  plot_cmd->add_option("-o,--output-dir", plot_out, "output directory");

  // bench-gen
  CLI::App* gen_cmd = app.add_subcommand("bench-gen", "emit benchmark instance files");
  std::string gen_bench = "bqp";
  gen_cmd->add_option("-b,--benchmark", gen_bench, "bqp | ising | contamination")->required();
  int gen_count = 1;
  gen_cmd->add_option("-n,--count", gen_count, "number of instances");
  int gen_d = 10;
  gen_cmd->add_option("-d,--d", gen_d, "dimension (bqp / contamination)");
  double gen_lc = 10.0;
  gen_cmd->add_option("--lc", gen_lc, "bqp correlation length");
  int gen_T = 100;
  gen_cmd->add_option("-T,--trajectories", gen_T, "contamination Monte Carlo runs");
  double gen_lambda = 0.0;
  gen_cmd->add_option("-l,--lambda", gen_lambda, "regularization weight");
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("-s,--seed", gen_seed, "master seed");
  std::string gen_out = "out/instances";
  gen_cmd->add_option("-o,--output-dir", gen_out, "output directory");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(run_cmd))
      return run_verb(config_path, run_seed_opt, run_seed, run_reps_opt, run_reps, run_out_opt,
                      run_out, run_optimizers);
    if (app.got_subcommand(val_cmd))
      return validate_verb(val_bench, val_d, val_T, val_lc, val_lambda, val_sizes, val_m, val_reps,
                           val_seed, val_out);
    if (app.got_subcommand(oracle_cmd))
      return oracle_verb(oracle_instance, oracle_bench_opt, oracle_bench, oracle_d, oracle_lc,
                         oracle_lambda, oracle_seed);
    if (app.got_subcommand(plot_cmd)) return plot_verb(plot_traces, plot_out);
    if (app.got_subcommand(gen_cmd))
      return bench_gen_verb(gen_bench, gen_count, gen_d, gen_lc, gen_T, gen_lambda, gen_seed,
                            gen_out);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const bocs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bocs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
