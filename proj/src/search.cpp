#include "bocs/search.hpp"

#include <cmath>
#include <stdexcept>

namespace bocs {

namespace {

void validate(int d, const SearchBudget& budget) {
  if (d < 1) throw std::invalid_argument("search: d must be positive");
  if (budget.evaluations < 1) throw std::invalid_argument("search: budget must be at least 1");
}

// Appends an evaluation to the trace and folds it into the running best.
void record(SearchResult& res, const BinaryPoint& x, double value) {
  res.trace.push_back({x, value});
  if (res.trace.size() == 1 || value > res.best_value) {
    res.best = x;
    res.best_value = value;
  }
}

}  // namespace

bool anneal_accept(double delta, double temperature, Rng& rng) {
  if (delta >= 0.0) return true;
  return rng.uniform() < std::exp(delta / temperature);
}

SearchResult simulated_annealing(const Objective& objective, int d, const SearchBudget& budget,
                                 const AnnealSchedule& schedule, std::uint64_t seed) {
  validate(d, budget);
  if (!(schedule.t0 >= schedule.t_final && schedule.t_final > 0.0))
    throw std::invalid_argument("simulated_annealing: need t0 >= t_final > 0");
  Rng rng(seed);
  SearchResult res;
  res.trace.reserve(static_cast<std::size_t>(budget.evaluations));

  BinaryPoint x = random_point(d, rng);
  double fx = objective(x);
  record(res, x, fx);

  // Cooling reaches t_final exactly when the budget runs out.
  const double gamma =
      std::pow(schedule.t_final / schedule.t0, 1.0 / static_cast<double>(budget.evaluations));
  double temperature = schedule.t0;
  for (int step = 1; step < budget.evaluations; ++step) {
    temperature *= gamma;
    BinaryPoint y = x;
    const int flip = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    y[flip] ^= 1;
    const double fy = objective(y);
    record(res, y, fy);
    if (anneal_accept(fy - fx, temperature, rng)) {
      x.swap(y);
      fx = fy;
    }
  }
  return res;
}

SearchResult oblivious_local_search(const Objective& objective, int d, const SearchBudget& budget,
                                    std::uint64_t seed) {
  validate(d, budget);
  Rng rng(seed);
  SearchResult res;
  res.trace.reserve(static_cast<std::size_t>(budget.evaluations));

  int remaining = budget.evaluations;
  while (remaining > 0) {
    BinaryPoint x = random_point(d, rng);
    double fx = objective(x);
    record(res, x, fx);
    --remaining;
    bool improved = true;
    while (improved && remaining > 0) {
      improved = false;
      int best_flip = -1;
      double best_neighbor = fx;
      for (int i = 0; i < d && remaining > 0; ++i) {
        x[i] ^= 1;
        const double fy = objective(x);
        record(res, x, fy);
        x[i] ^= 1;
        --remaining;
        if (fy > best_neighbor) {
          best_neighbor = fy;
          best_flip = i;
        }
      }
      if (best_flip >= 0) {
        x[best_flip] ^= 1;
        fx = best_neighbor;
        improved = true;
      }
      // else: local optimum; fall through to a fresh random restart
    }
  }
  return res;
}

SearchResult random_search(const Objective& objective, int d, const SearchBudget& budget,
                           std::uint64_t seed) {
  validate(d, budget);
  Rng rng(seed);
  SearchResult res;
  res.trace.reserve(static_cast<std::size_t>(budget.evaluations));
  for (int i = 0; i < budget.evaluations; ++i) {
    BinaryPoint x = random_point(d, rng);
    record(res, x, objective(x));
  }
  return res;
}

}  // namespace bocs
