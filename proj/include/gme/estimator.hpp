#pragma once

// Monte Carlo estimation of basis-averaged detection probabilities:
// the Haar-measure fraction of local basis changes under which a detector
// fires on a noisy state.
//
// Reproducibility contract: a (family/base, group, detector, n_samples,
// seed) tuple fully determines every count.  Sample k uses the substream
// (seed, k) regardless of thread count or scheduling, so estimates are
// bitwise identical across ExecPolicy settings, and a sweep evaluates the
// same unitaries at every grid point (the rotated state is reused across q).

#include <cstdint>
#include <utility>
#include <vector>

#include "gme/criteria.hpp"
#include "gme/haar.hpp"
#include "gme/states.hpp"

namespace gme {

struct ProbabilityEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_hits = 0;
  std::uint64_t seed = 0;
  double threshold = detection_threshold;
};

// Wilson score interval for a binomial proportion at the given confidence.
// Degenerate edges are exact: hits == 0 gives low = 0, hits == total gives
// high = 1.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t total,
                                          double confidence);

struct ExecPolicy {
  // 0 = one worker per hardware thread, 1 = sequential, otherwise explicit.
  unsigned threads = 0;
};

ProbabilityEstimate estimate_probability(const NoiseFamily& family, const UnitaryGroup& group,
                                         const DetectorConfig& detector, std::uint64_t n_samples,
                                         std::uint64_t seed, ExecPolicy policy = {});

struct SweepPoint {
  double q = 0.0;
  ProbabilityEstimate estimate;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

// One estimate per grid point, sharing the sampled unitaries across the
// grid.  The grid must be nonempty, strictly increasing, and within [0, 1].
SweepResult sweep_noise(const StateVector& base, const std::vector<double>& q_grid,
                        const UnitaryGroup& group, const DetectorConfig& detector,
                        std::uint64_t n_samples, std::uint64_t seed, ExecPolicy policy = {});

}  // namespace gme
