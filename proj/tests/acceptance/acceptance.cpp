// End-to-end acceptance gate. Each criterion prints one [PASS]/[FAIL] line;
// the exit status is the number of failures. Pass criterion numbers as
// arguments to run a subset, e.g. `acceptance 1 2 10`.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bocs/acquisition.hpp"
#include "bocs/benchmarks.hpp"
#include "bocs/binary.hpp"
#include "bocs/harness.hpp"
#include "bocs/quadratic.hpp"
#include "bocs/rng.hpp"
#include "bocs/sdp.hpp"
#include "bocs/surrogate.hpp"

using namespace bocs;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

QuadObjective random_quad(int d, std::uint64_t seed) {
  Rng rng(seed);
  QuadObjective q;
  q.A = Eigen::MatrixXd::Zero(d, d);
  q.b.resize(d);
  for (int i = 0; i < d; ++i) {
    q.b[i] = 2.0 * rng.normal();
    for (int j = i + 1; j < d; ++j) {
      const double a = rng.normal();
      q.A(i, j) = a;
      q.A(j, i) = a;
    }
  }
  q.constant = rng.normal();
  return q;
}

double enumerate_quad_max(const QuadObjective& q) {
  const int d = q.dim();
  double best = q.value(point_from_mask(0, d));
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask)
    best = std::max(best, q.value(point_from_mask(mask, d)));
  return best;
}

double summary_mean(const std::vector<SummaryRow>& rows, const std::string& opt, int iter) {
  for (const SummaryRow& row : rows)
    if (row.optimizer == opt && row.iteration == iter) return row.mean;
  throw std::runtime_error("summary row missing for " + opt);
}

double summary_two_se(const std::vector<SummaryRow>& rows, const std::string& opt, int iter) {
  for (const SummaryRow& row : rows)
    if (row.optimizer == opt && row.iteration == iter) return row.two_se;
  throw std::runtime_error("summary row missing for " + opt);
}

OptimizerSpec make_spec(OptimizerKind kind, const std::string& name) {
  OptimizerSpec spec;
  spec.kind = kind;
  spec.name = name;
  return spec;
}

// --- criterion 1 ------------------------------------------------------------

bool criterion_transform(std::string& detail) {
  const double t0 = now_s();
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 9;
    const QuadObjective q = random_quad(d, 800 + static_cast<std::uint64_t>(k));
    const PlusMinusForm pm = to_plus_minus(q);
    Eigen::VectorXd z(d + 1);
    z[d] = 1.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      const BinaryPoint x = point_from_mask(mask, d);
      for (int i = 0; i < d; ++i) z[i] = x[i] ? 1.0 : -1.0;
      const double direct = q.value(x);
      const double lifted = pm.value(z);
      if (std::abs(direct - lifted) > 1e-9 * (1.0 + std::abs(direct))) {
        detail = "mismatch at instance " + std::to_string(k);
        return false;
      }
    }
  }
  const double elapsed = now_s() - t0;
  detail = "200 instances exact, " + fmt(elapsed) + " s";
  return elapsed < 10.0;
}

// --- criterion 2 ------------------------------------------------------------

bool criterion_sandwich(std::string& detail) {
  const double t0 = now_s();
  const int d = 8;
  int attained = 0;
  for (int k = 0; k < 100; ++k) {
    const QuadObjective q = random_quad(d, 900 + static_cast<std::uint64_t>(k));
    const PlusMinusForm pm = to_plus_minus(q);
    // Same retry-on-non-convergence policy as the acquisition path.
    SdpSolution sol;
    for (int attempt = 0; attempt < 3 && !sol.converged; ++attempt) {
      const std::uint64_t s = attempt == 0
                                  ? 1900 + static_cast<std::uint64_t>(k)
                                  : subseed(1900 + static_cast<std::uint64_t>(k), "retry",
                                            static_cast<std::uint64_t>(attempt));
      sol = sdp_solve(pm, SdpOptions{}, s);
    }
    if (!sol.converged) {
      detail = "solver failed to converge on instance " + std::to_string(k);
      return false;
    }
    const double bound = sol.objective_value;
    const double slack = 1e-6 * (1.0 + std::abs(bound));
    const double opt = enumerate_quad_max(q) - pm.constant;
    if (opt > bound + slack) {
      detail = "enumeration exceeded the relaxation bound on instance " + std::to_string(k);
      return false;
    }
    const BinaryPoint xr = round_geometric(sol, pm, q, 20, 2900 + static_cast<std::uint64_t>(k));
    const double rounded = q.value(xr) - pm.constant;
    if (rounded > bound + slack) {
      detail = "rounded value exceeded the relaxation bound on instance " + std::to_string(k);
      return false;
    }
    if (rounded >= opt - 1e-9 * (1.0 + std::abs(opt))) ++attained;
  }
  const double elapsed = now_s() - t0;
  detail = "bounds held on 100/100, rounding attained the optimum on " + std::to_string(attained) +
           "/100, " + fmt(elapsed) + " s";
  return attained >= 60 && elapsed < 120.0;
}

// --- criterion 3 ------------------------------------------------------------

bool criterion_samplers(std::string& detail) {
  const double t0 = now_s();
  struct Shape {
    int n, d;  // order-1 basis: p = d + 1
  };
  for (const Shape shape : {Shape{5, 29}, Shape{50, 2}}) {
    const MonomialBasis basis = make_basis(shape.d, 1);
    const int p = basis.size();
    Dataset data(basis);
    Rng gen(3000 + static_cast<std::uint64_t>(shape.n));
    for (int i = 0; i < shape.n; ++i) data.append(random_point(shape.d, gen), gen.normal());

    // Spiky scale pattern (a few live coefficients, the rest shrunk hard):
    // the regime the fast sampler exists for. A near-isotropic 30-dim
    // covariance would need ~2(p+1)/draws > 5% Frobenius error from Monte
    // Carlo alone, so the tolerance encodes this low effective rank.
    SurrogatePosterior state(p, 0);
    state.sigma2 = 0.8;
    state.tau2 = 0.5;
    for (int k = 0; k < p; ++k) state.beta2[k] = 1e-3;
    for (int k : {0, 7, 13, 21, 28})
      if (k < p) state.beta2[k] = 2.0 + 0.5 * (k % 3);

    const int draws = 20000;
    Rng rf(3100), rd(3200);
    Eigen::MatrixXd fast(draws, p), direct(draws, p);
    for (int i = 0; i < draws; ++i) {
      fast.row(i) = alpha_fast_draw(state, data, rf).transpose();
      direct.row(i) = alpha_direct_draw(state, data, rd).transpose();
    }
    const Eigen::VectorXd mf = fast.colwise().mean().transpose();
    const Eigen::VectorXd md = direct.colwise().mean().transpose();
    const Eigen::MatrixXd cf_centered = fast.rowwise() - fast.colwise().mean();
    const Eigen::MatrixXd cd_centered = direct.rowwise() - direct.colwise().mean();
    const Eigen::MatrixXd cf = cf_centered.transpose() * cf_centered / (draws - 1.0);
    const Eigen::MatrixXd cd = cd_centered.transpose() * cd_centered / (draws - 1.0);

    for (int k = 0; k < p; ++k) {
      const double se = std::sqrt((cf(k, k) + cd(k, k)) / draws);
      if (std::abs(mf[k] - md[k]) > 3.0 * se) {
        detail = "mean mismatch at (N,p)=(" + std::to_string(shape.n) + "," + std::to_string(p) +
                 ") component " + std::to_string(k);
        return false;
      }
    }
    const double frob = (cf - cd).norm() / cd.norm();
    if (frob >= 0.05) {
      detail = "covariance error " + fmt(frob) + " at (N,p)=(" + std::to_string(shape.n) + "," +
               std::to_string(p) + ")";
      return false;
    }
  }
  const double elapsed = now_s() - t0;
  detail = "means within 3 SE and covariances within 5% on both shapes, " + fmt(elapsed) + " s";
  return elapsed < 120.0;
}

// --- criteria 4-7 and 9: experiment presets ---------------------------------

ExperimentConfig bqp_config(double lc, double lambda, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.benchmark = "bqp";
  cfg.d = 10;
  cfg.lc = lc;
  cfg.lambda = lambda;
  cfg.instances = 5;
  cfg.replications = 10;
  cfg.n0 = 20;
  cfg.nmax = 120;
  cfg.master_seed = seed;
  return cfg;
}

ExperimentConfig ising_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.benchmark = "ising";
  cfg.lambda = 1e-4;
  cfg.instances = 3;
  cfg.replications = 5;
  cfg.n0 = 20;
  cfg.nmax = 170;
  cfg.master_seed = seed;
  return cfg;
}

bool criterion_bqp(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg = bqp_config(10.0, 0.0, 7001);
  cfg.optimizers = {make_spec(OptimizerKind::bocs_sdp, "bocs-sdp"),
                    make_spec(OptimizerKind::ols, "ols"), make_spec(OptimizerKind::rs, "rs")};
  const ExperimentResult result = run_experiment(cfg);
  const std::vector<SummaryRow> summary = summarize(result.records, {100});
  const double bocs = summary_mean(summary, "bocs-sdp", 100);
  const double ols = summary_mean(summary, "ols", 100);
  const double rs = summary_mean(summary, "rs", 100);
  const double elapsed = now_s() - t0;
  detail = "regret x10 at iteration 100: bocs-sdp " + fmt(10.0 * bocs) + ", ols " +
           fmt(10.0 * ols) + ", rs " + fmt(10.0 * rs) + ", " + fmt(elapsed) + " s";
  return 10.0 * bocs <= 0.5 && bocs < ols && bocs < rs && elapsed < 1800.0;
}

bool criterion_ising(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg = ising_config(7002);
  cfg.optimizers = {make_spec(OptimizerKind::bocs_sdp, "bocs-sdp"),
                    make_spec(OptimizerKind::ols, "ols")};
  const ExperimentResult result = run_experiment(cfg);
  const std::vector<SummaryRow> summary = summarize(result.records, {150});
  const double bocs = summary_mean(summary, "bocs-sdp", 150);
  const double ols = summary_mean(summary, "ols", 150);
  const double elapsed = now_s() - t0;
  detail = "best divergence at iteration 150: bocs-sdp " + fmt(bocs) + ", ols " + fmt(ols) + ", " +
           fmt(elapsed) + " s";
  return bocs <= 0.35 && bocs <= ols && elapsed < 14400.0;
}

bool criterion_contamination(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.benchmark = "contamination";
  cfg.d = 25;
  cfg.trajectories = 100;
  cfg.lambda = 1e-2;
  cfg.instances = 1;
  cfg.replications = 10;
  cfg.n0 = 20;
  cfg.nmax = 270;
  cfg.master_seed = 7003;
  cfg.optimizers = {make_spec(OptimizerKind::bocs_sdp, "bocs-sdp"),
                    make_spec(OptimizerKind::bocs_sa, "bocs-sa"),
                    make_spec(OptimizerKind::mle_sa, "mle-sa"), make_spec(OptimizerKind::sa, "sa")};
  const ExperimentResult result = run_experiment(cfg);
  const std::vector<SummaryRow> summary = summarize(result.records, {250});
  const double sdp = summary_mean(summary, "bocs-sdp", 250);
  const double sab = summary_mean(summary, "bocs-sa", 250);
  const double mle = summary_mean(summary, "mle-sa", 250);
  const double sa = summary_mean(summary, "sa", 250);
  const double elapsed = now_s() - t0;
  detail = "best value at iteration 250: bocs-sdp " + fmt(sdp) + ", bocs-sa " + fmt(sab) +
           ", mle-sa " + fmt(mle) + ", sa " + fmt(sa) + ", " + fmt(elapsed) + " s";
  return sdp <= sab && sab <= mle && sdp <= sa && elapsed < 3600.0;
}

bool criterion_mle_plateau(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg = bqp_config(100.0, 1.0, 7004);
  cfg.optimizers = {make_spec(OptimizerKind::mle_sa, "mle-sa"),
                    make_spec(OptimizerKind::bocs_sa, "bocs-sa")};
  const ExperimentResult result = run_experiment(cfg);
  const std::vector<SummaryRow> summary = summarize(result.records, {100});
  const double mle = summary_mean(summary, "mle-sa", 100);
  const double bocs = summary_mean(summary, "bocs-sa", 100);
  const double elapsed = now_s() - t0;
  detail = "final regret: mle-sa " + fmt(mle) + ", bocs-sa " + fmt(bocs) + ", " + fmt(elapsed) +
           " s";
  return mle >= 2.0 * bocs && elapsed < 1800.0;
}

// --- criterion 8 ------------------------------------------------------------

bool criterion_model_validation(std::string& detail) {
  const double t0 = now_s();
  const Benchmark bench(contamination_generate(20, 1000, 7005), 1e-2);
  // p = 211 features for the order-2 model on d = 20; train at N = p/2
  const std::vector<ValidationRow> table = validate_models(bench, {105}, 50, 10, 7005);
  const ValidationRow& row = table.front();
  const double elapsed = now_s() - t0;
  detail = "test error at N=105: sparse " + fmt(row.sparse_error) + ", blr " +
           fmt(row.blr_error) + ", mle " + fmt(row.mle_error) + ", " + fmt(elapsed) + " s";
  return row.sparse_error <= row.blr_error && row.blr_error <= row.mle_error && elapsed < 1200.0;
}

// --- criterion 9 ------------------------------------------------------------

bool criterion_third_order(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg = ising_config(7006);
  OptimizerSpec k2 = make_spec(OptimizerKind::bocs_sa, "bocs-sa-k2");
  OptimizerSpec k3 = make_spec(OptimizerKind::bocs_sa, "bocs-sa-k3");
  k3.order = 3;
  cfg.optimizers = {k2, k3};
  const ExperimentResult result = run_experiment(cfg);
  const std::vector<SummaryRow> summary = summarize(result.records, {150});
  const double m2 = summary_mean(summary, "bocs-sa-k2", 150);
  const double m3 = summary_mean(summary, "bocs-sa-k3", 150);
  const double t2 = summary_two_se(summary, "bocs-sa-k2", 150);
  const double t3 = summary_two_se(summary, "bocs-sa-k3", 150);
  // 2 * sqrt(se2^2 + se3^2) == sqrt(two_se2^2 + two_se3^2)
  const double band = std::sqrt(t2 * t2 + t3 * t3);
  const double elapsed = now_s() - t0;
  detail = "best at iteration 150: k2 " + fmt(m2) + " (2se " + fmt(t2) + "), k3 " + fmt(m3) +
           " (2se " + fmt(t3) + "), " + fmt(elapsed) + " s";
  return std::abs(m3 - m2) <= band && elapsed < 14400.0;
}

// --- criterion 10 -----------------------------------------------------------

std::string run_and_trace(const ExperimentConfig& cfg, const std::string& tag) {
  const ExperimentResult result = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / ("bocs-acceptance-" + tag);
  std::filesystem::remove_all(dir);
  emit_outputs(result.records, dir.string());
  std::ifstream in(dir / "traces.jsonl", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove_all(dir);
  return ss.str();
}

bool criterion_determinism(std::string& detail) {
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.benchmark = "bqp";
  cfg.d = 8;
  cfg.lambda = 0.01;
  cfg.instances = 1;
  cfg.replications = 2;
  cfg.n0 = 5;
  cfg.nmax = 15;
  cfg.master_seed = 7007;
  cfg.optimizers = {make_spec(OptimizerKind::bocs_sdp, "bocs-sdp"),
                    make_spec(OptimizerKind::bocs_sa, "bocs-sa"),
                    make_spec(OptimizerKind::mle_sa, "mle-sa"),
                    make_spec(OptimizerKind::sa, "sa"),
                    make_spec(OptimizerKind::ols, "ols"),
                    make_spec(OptimizerKind::rs, "rs")};
  for (OptimizerSpec& spec : cfg.optimizers) {
    spec.burn_in = 10;
    spec.sweeps = 2;
  }
  const std::string first = run_and_trace(cfg, "a");
  const std::string second = run_and_trace(cfg, "b");
  const double elapsed = now_s() - t0;
  if (first != second) {
    detail = "repeated runs produced different traces";
    return false;
  }
  detail = "byte-identical traces across repeated runs (" +
           std::to_string(first.size()) + " bytes), " + fmt(elapsed) + " s";
  return true;
}

struct Criterion {
  int id;
  const char* title;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "0/1-to-spin lift is exact on random quadratics", criterion_transform},
    {2, "relaxation bound sandwiches enumeration and rounding", criterion_sandwich},
    {3, "fast and direct coefficient samplers agree in law", criterion_samplers},
    {4, "correlated quadratic benchmark: relaxation optimizer beats the baselines",
     criterion_bqp},
    {5, "spin-model divergence benchmark: relaxation optimizer hits the target",
     criterion_ising},
    {6, "contamination benchmark: documented optimizer ordering holds", criterion_contamination},
    {7, "point-estimate ablation plateaus at twice the posterior-sampling regret",
     criterion_mle_plateau},
    {8, "surrogate test error orders sparse <= conjugate <= least squares",
     criterion_model_validation},
    {9, "third-order surrogate matches the quadratic one on the spin model",
     criterion_third_order},
    {10, "repeated runs emit byte-identical traces", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const Criterion& c : kCriteria) ids.push_back(c.id);

  int failures = 0;
  for (int id : ids) {
    const Criterion* found = nullptr;
    for (const Criterion& c : kCriteria)
      if (c.id == id) found = &c;
    if (!found) {
      std::cout << "[FAIL] criterion " << id << ": no such criterion\n";
      ++failures;
      continue;
    }
    std::string detail;
    bool ok = false;
    try {
      ok = found->fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << found->id << ": " << found->title
              << " — " << detail << "\n";
    std::cout.flush();
    failures += !ok;
  }
  return failures;
}
