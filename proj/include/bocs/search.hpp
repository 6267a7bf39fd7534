#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bocs/binary.hpp"
#include "bocs/rng.hpp"

namespace bocs {

/// Objective for the searchers. Always maximized; callers minimizing a
/// benchmark negate before handing it over.
using Objective = std::function<double(const BinaryPoint&)>;

/// Evaluation allowance for one search run. `charged` records whether these
/// evaluations count against a benchmark budget or hit a free surrogate;
/// the searchers themselves only consume `evaluations`.
struct SearchBudget {
  int evaluations = 1;
  bool charged = true;
};

/// Geometric cooling from t0 down to t_final across the whole run.
struct AnnealSchedule {
  double t0 = 1.0;
  double t_final = 1e-3;
};

struct TracePoint {
  BinaryPoint x;
  double value = 0.0;
};

struct SearchResult {
  BinaryPoint best;
  double best_value = 0.0;
  std::vector<TracePoint> trace;  // one entry per evaluation, in order
};

/// Metropolis rule: improvements always pass, deteriorations pass with
/// probability exp(delta / temperature). Exposed so the acceptance frequency
/// can be tested directly.
bool anneal_accept(double delta, double temperature, Rng& rng);

/// Hamming-1 annealer with geometric cooling. The uniform random start is
/// the first evaluation; every proposal costs one more.
SearchResult simulated_annealing(const Objective& objective, int d, const SearchBudget& budget,
                                 const AnnealSchedule& schedule, std::uint64_t seed);

/// Best-improvement local search: evaluates the full Hamming-1 neighborhood
/// each sweep and moves to the best neighbor if it improves, restarting from
/// a fresh random point at local optima until the budget is spent.
SearchResult oblivious_local_search(const Objective& objective, int d, const SearchBudget& budget,
                                    std::uint64_t seed);

/// I.i.d. uniform sampling over the cube.
SearchResult random_search(const Objective& objective, int d, const SearchBudget& budget,
                           std::uint64_t seed);

}  // namespace bocs
