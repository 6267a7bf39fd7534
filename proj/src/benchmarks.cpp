#include "bocs/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

#include "bocs/rng.hpp"

namespace bocs {

namespace {

double l1(const BinaryPoint& x) {
  double s = 0.0;
  for (std::uint8_t xi : x) s += xi;
  return s;
}

Eigen::MatrixXd matrix_from_rows(const nlohmann::json& j, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  const auto flat = j.get<std::vector<double>>();
  if (static_cast<int>(flat.size()) != rows * cols)
    throw std::invalid_argument("instance file: matrix size mismatch");
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = flat[static_cast<std::size_t>(i * cols + k)];
  return m;
}

std::vector<double> rows_of(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
  return flat;
}

}  // namespace

BqpInstance bqp_generate(int d, double lc, double lambda, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("bqp_generate: d must be positive");
  if (!(lc > 0.0)) throw std::invalid_argument("bqp_generate: correlation length must be positive");
  BqpInstance inst;
  inst.d = d;
  inst.lc = lc;
  inst.lambda = lambda;
  inst.seed = seed;
  Rng rng(subseed(seed, "bqp-q"));
  inst.Q.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double gap = static_cast<double>(i - j);
      inst.Q(i, j) = rng.normal() * std::exp(-gap * gap / (lc * lc));
    }
  if (d <= 20) {
    // x^T Q x == x^T sym(Q) x, so the enumerator sees the symmetric part
    // with the l1 penalty folded into the linear term.
    const Eigen::MatrixXd S = 0.5 * (inst.Q + inst.Q.transpose());
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(d, -lambda);
    const kernels::QuboBest best = kernels::enumerate_qubo(S, b);
    BqpOptimum opt;
    opt.point = point_from_mask(best.mask, d);
    opt.value = best.value;
    inst.optimum = opt;
  }
  return inst;
}

double bqp_eval(const BqpInstance& inst, const BinaryPoint& x) {
  if (static_cast<int>(x.size()) != inst.d)
    throw std::invalid_argument("bqp_eval: dimension mismatch");
  Eigen::VectorXd xv(inst.d);
  for (int i = 0; i < inst.d; ++i) xv[i] = x[i];
  return xv.dot(inst.Q * xv) - inst.lambda * l1(x);
}

IsingInstance ising_generate(std::uint64_t seed) {
  IsingInstance inst;
  inst.seed = seed;
  inst.n = 16;
  // 4x4 grid, nodes row-major; right edge then down edge per node.
  const int side = 4;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (c + 1 < side) inst.edges.emplace_back(v, v + 1);
      if (r + 1 < side) inst.edges.emplace_back(v, v + side);
    }
  Rng rng(subseed(seed, "ising-j"));
  inst.jp.resize(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) {
    const double magnitude = 0.05 + 4.95 * rng.uniform();
    inst.jp[e] = rng.uniform() < 0.5 ? magnitude : -magnitude;
  }
  // z^T J z doubles each undirected edge, so the enumeration kernel takes 2J.
  const kernels::IsingStats stats =
      kernels::ising_suff_stats(inst.n, inst.edges, 2.0 * inst.jp);
  inst.moments = stats.moments;
  inst.log_zp = stats.log_z;
  return inst;
}

double ising_kl(const IsingInstance& inst, const BinaryPoint& x) {
  if (static_cast<int>(x.size()) != inst.num_edges())
    throw std::invalid_argument("ising_kl: one bit per edge required");
  Eigen::VectorXd jq = inst.jp;
  for (int e = 0; e < inst.num_edges(); ++e)
    if (!x[e]) jq[e] = 0.0;
  const double log_zq = kernels::ising_suff_stats(inst.n, inst.edges, 2.0 * jq).log_z;
  // E_p[energy_p - energy_q] + log Zq/Zp, with energies z^T J z.
  return 2.0 * (inst.jp - jq).dot(inst.moments) + log_zq - inst.log_zp;
}

double ising_eval(const IsingInstance& inst, const BinaryPoint& x, double lambda) {
  return ising_kl(inst, x) + lambda * l1(x);
}

ContaminationInstance contamination_generate(int d, int trajectories, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("contamination_generate: d must be positive");
  if (trajectories < 1)
    throw std::invalid_argument("contamination_generate: trajectories must be positive");
  ContaminationInstance inst;
  inst.d = d;
  inst.trajectories = trajectories;
  inst.seed = seed;
  inst.costs = Eigen::VectorXd::Ones(d);
  return inst;
}

double contamination_eval(const ContaminationInstance& inst, const BinaryPoint& x, double lambda,
                          std::uint64_t seed) {
  if (static_cast<int>(x.size()) != inst.d)
    throw std::invalid_argument("contamination_eval: dimension mismatch");
  const std::vector<std::int64_t> violations =
      kernels::contamination_violations(inst.dynamics, x, inst.trajectories, seed);
  double value = lambda * l1(x);
  for (int i = 0; i < inst.d; ++i) {
    if (x[i]) value += inst.costs[i];
    value += inst.rho * static_cast<double>(violations[static_cast<std::size_t>(i)]) /
             static_cast<double>(inst.trajectories);
  }
  return value;
}

Benchmark::Benchmark(BqpInstance inst)
    : kind_("bqp"),
      dim_(inst.d),
      minimize_(false),
      lambda_(inst.lambda),
      instance_(std::move(inst)) {}

Benchmark::Benchmark(IsingInstance inst, double lambda)
    : kind_("ising"),
      dim_(inst.num_edges()),
      minimize_(true),
      lambda_(lambda),
      instance_(std::move(inst)) {}

Benchmark::Benchmark(ContaminationInstance inst, double lambda)
    : kind_("contamination"),
      dim_(inst.d),
      minimize_(true),
      lambda_(lambda),
      instance_(std::move(inst)) {}

EvalResult Benchmark::evaluate(const BinaryPoint& x, std::uint64_t seed) const {
  EvalResult r;
  if (const BqpInstance* bqp = as_bqp()) {
    Eigen::VectorXd xv(bqp->d);
    for (int i = 0; i < bqp->d; ++i) xv[i] = x.at(static_cast<std::size_t>(i));
    r.raw = xv.dot(bqp->Q * xv);
    r.objective = r.raw - lambda_ * l1(x);
  } else if (const IsingInstance* ising = as_ising()) {
    r.raw = ising_kl(*ising, x);
    r.objective = r.raw + lambda_ * l1(x);
  } else {
    const ContaminationInstance& inst = std::get<ContaminationInstance>(instance_);
    r.objective = contamination_eval(inst, x, lambda_, seed);
    r.raw = r.objective - lambda_ * l1(x);
  }
  return r;
}

double Benchmark::report_value(const BinaryPoint& x, const EvalResult& observed) const {
  const ContaminationInstance* c = as_contamination();
  if (c == nullptr) return observed.objective;
  std::uint64_t key = 0;
  if (c->d <= 64) {
    for (int i = 0; i < c->d; ++i) key = key << 1 | x[static_cast<std::size_t>(i)];
    const auto hit = report_cache_.find(key);
    if (hit != report_cache_.end()) return hit->second;
  }
  // One shared high-resolution valuation batch per instance: per-evaluation
  // draws at T=10^2 carry ~0.3 objective noise, so a running minimum over them
  // tracks the luckiest draw, not the best plan.
  constexpr int kValuationRuns = 30000;
  const std::vector<std::int64_t> violations =
      kernels::contamination_violations(c->dynamics, x, kValuationRuns, subseed(c->seed, "valuation"));
  double value = lambda_ * l1(x);
  for (int i = 0; i < c->d; ++i) {
    if (x[i]) value += c->costs[i];
    value += c->rho * static_cast<double>(violations[static_cast<std::size_t>(i)]) /
             static_cast<double>(kValuationRuns);
  }
  if (c->d <= 64) report_cache_.emplace(key, value);
  return value;
}

std::optional<double> Benchmark::optimum_value() const {
  if (const BqpInstance* bqp = as_bqp())
    if (bqp->optimum) return bqp->optimum->value;
  return std::nullopt;
}

std::optional<BinaryPoint> Benchmark::optimum_point() const {
  if (const BqpInstance* bqp = as_bqp())
    if (bqp->optimum) return bqp->optimum->point;
  return std::nullopt;
}

nlohmann::json Benchmark::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_;
  j["lambda"] = lambda_;
  if (const BqpInstance* bqp = as_bqp()) {
    j["d"] = bqp->d;
    j["lc"] = bqp->lc;
    j["seed"] = bqp->seed;
    j["Q"] = rows_of(bqp->Q);
    if (bqp->optimum) {
      j["optimum_value"] = bqp->optimum->value;
      j["optimum_point"] = to_bitstring(bqp->optimum->point);
    }
  } else if (const IsingInstance* ising = as_ising()) {
    j["n"] = ising->n;
    j["seed"] = ising->seed;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : ising->edges) edges.push_back({a, b});
    j["edges"] = edges;
    j["jp"] = std::vector<double>(ising->jp.data(), ising->jp.data() + ising->jp.size());
    j["moments"] =
        std::vector<double>(ising->moments.data(), ising->moments.data() + ising->moments.size());
    j["log_zp"] = ising->log_zp;
  } else {
    const ContaminationInstance& inst = std::get<ContaminationInstance>(instance_);
    j["d"] = inst.d;
    j["trajectories"] = inst.trajectories;
    j["seed"] = inst.seed;
    j["costs"] = std::vector<double>(inst.costs.data(), inst.costs.data() + inst.costs.size());
    j["rho"] = inst.rho;
    j["eps"] = inst.eps;
    j["limit"] = inst.dynamics.limit;
    j["initial_beta"] = {inst.dynamics.initial_a, inst.dynamics.initial_b};
    j["growth_beta"] = {inst.dynamics.growth_a, inst.dynamics.growth_b};
    j["cleanup_beta"] = {inst.dynamics.cleanup_a, inst.dynamics.cleanup_b};
  }
  return j;
}

Benchmark Benchmark::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double lambda = j.at("lambda").get<double>();
  if (kind == "bqp") {
    BqpInstance inst;
    inst.d = j.at("d").get<int>();
    inst.lc = j.at("lc").get<double>();
    inst.lambda = lambda;
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.Q = matrix_from_rows(j.at("Q"), inst.d, inst.d);
    if (j.contains("optimum_value")) {
      BqpOptimum opt;
      opt.value = j.at("optimum_value").get<double>();
      opt.point = from_bitstring(j.at("optimum_point").get<std::string>());
      inst.optimum = opt;
    }
    return Benchmark(std::move(inst));
  }
  if (kind == "ising") {
    IsingInstance inst;
    inst.n = j.at("n").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("edges")) inst.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    const auto jp = j.at("jp").get<std::vector<double>>();
    inst.jp = Eigen::Map<const Eigen::VectorXd>(jp.data(), static_cast<Eigen::Index>(jp.size()));
    const auto moments = j.at("moments").get<std::vector<double>>();
    inst.moments =
        Eigen::Map<const Eigen::VectorXd>(moments.data(), static_cast<Eigen::Index>(moments.size()));
    inst.log_zp = j.at("log_zp").get<double>();
    return Benchmark(std::move(inst), lambda);
  }
  if (kind == "contamination") {
    ContaminationInstance inst;
    inst.d = j.at("d").get<int>();
    inst.trajectories = j.at("trajectories").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    const auto costs = j.at("costs").get<std::vector<double>>();
    inst.costs = Eigen::Map<const Eigen::VectorXd>(costs.data(), static_cast<Eigen::Index>(costs.size()));
    inst.rho = j.at("rho").get<double>();
    inst.eps = j.at("eps").get<double>();
    inst.dynamics.limit = j.at("limit").get<double>();
    inst.dynamics.initial_a = j.at("initial_beta").at(0).get<double>();
    inst.dynamics.initial_b = j.at("initial_beta").at(1).get<double>();
    inst.dynamics.growth_a = j.at("growth_beta").at(0).get<double>();
    inst.dynamics.growth_b = j.at("growth_beta").at(1).get<double>();
    inst.dynamics.cleanup_a = j.at("cleanup_beta").at(0).get<double>();
    inst.dynamics.cleanup_b = j.at("cleanup_beta").at(1).get<double>();
    return Benchmark(std::move(inst), lambda);
  }
  throw std::invalid_argument("unknown benchmark kind: " + kind);
}

}  // namespace bocs
