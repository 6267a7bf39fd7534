#pragma once

#include <cstdint>

#include "bocs/quadratic.hpp"
#include "bocs/sdp.hpp"
#include "bocs/search.hpp"

namespace bocs {

/// Randomized rounding of the vector-program solution: project columns onto
/// a shared Gaussian direction, truncate, draw signs, and fix the global
/// sign so the homogenizing coordinate reads +1. Repeats `draws` times and
/// keeps the candidate with the largest q.value (first winner on ties).
BinaryPoint round_geometric(const SdpSolution& sol, const PlusMinusForm& pm,
                            const QuadObjective& q, int draws, std::uint64_t seed);

struct SdpAcquisitionConfig {
  SdpOptions sdp;
  int rounding_draws = 20;
  int retries = 2;  // extra sdp_solve attempts on non-convergence
};

/// Relaxation path: build the penalized quadratic from the draw, lift to the
/// +/-1 form, solve the unit-diagonal SDP, and round. Retries the solve with
/// fresh seeds on non-convergence before giving up.
BinaryPoint acquire_sdp(const CoefficientDraw& draw, const Penalty& penalty,
                        const SdpAcquisitionConfig& cfg, std::uint64_t seed);

/// Annealer path over the raw surrogate (any basis order): maximizes
/// predict(draw, x) - penalty(x) with `budget` Hamming-1 proposals after the
/// random start. Surrogate calls are free, so nothing is charged.
BinaryPoint acquire_sa(const CoefficientDraw& draw, const Penalty& penalty, int budget,
                       const AnnealSchedule& schedule, std::uint64_t seed);

}  // namespace bocs
