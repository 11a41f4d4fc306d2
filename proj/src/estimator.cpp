#include "gme/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace gme {

namespace {

// Acklam's rational approximation to the standard normal quantile, sharpened
// with one Halley step through erfc.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile argument must be in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct DetectorPlan {
  struct Entry {
    std::size_t rotation_slot;
    CriterionEvaluator evaluator;
  };
  // nullopt marks the computational basis (no rotation applied).
  std::vector<std::optional<LocalUnitary>> rotations;
  std::vector<Entry> entries;
};

DetectorPlan build_plan(const DetectorConfig& detector, QubitCount n) {
  DetectorPlan plan;
  std::vector<BasisRotation> seen;
  for (const auto& [id, rotation] : detector.pairs()) {
    std::size_t slot;
    const auto it = std::find(seen.begin(), seen.end(), rotation);
    if (it == seen.end()) {
      seen.push_back(rotation);
      if (rotation.kind() == BasisRotation::Kind::Computational) {
        plan.rotations.emplace_back(std::nullopt);
      } else {
        plan.rotations.emplace_back(rotation.unitary(n));
      }
      slot = plan.rotations.size() - 1;
    } else {
      slot = static_cast<std::size_t>(it - seen.begin());
    }
    plan.entries.push_back({slot, CriterionEvaluator(id, n)});
  }
  return plan;
}

void run_samples(const StateVector& base, const UnitaryGroup& group, const DetectorPlan& plan,
                 const std::vector<double>& q_grid, std::uint64_t seed, std::uint64_t begin,
                 std::uint64_t end, std::vector<std::uint64_t>& hits) {
  const QubitCount n = base.qubit_count();
  const auto dim = static_cast<Eigen::Index>(n.dim());
  Eigen::VectorXcd sampled(dim);
  std::vector<Eigen::VectorXcd> rotated(plan.rotations.size(), Eigen::VectorXcd(dim));
  std::vector<double> best(q_grid.size());
  for (std::uint64_t k = begin; k < end; ++k) {
    RandomStream rng(seed, k);
    const LocalUnitary u = sample_group(group, n, rng);
    sampled = base.amplitudes();
    apply_local_unitary_in_place(sampled, u);
    for (std::size_t s = 0; s < plan.rotations.size(); ++s) {
      if (plan.rotations[s]) {
        rotated[s] = sampled;
        apply_local_unitary_in_place(rotated[s], *plan.rotations[s]);
      }
    }
    std::fill(best.begin(), best.end(), -std::numeric_limits<double>::infinity());
    for (const auto& entry : plan.entries) {
      const Eigen::VectorXcd& amps =
          plan.rotations[entry.rotation_slot] ? rotated[entry.rotation_slot] : sampled;
      for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
        const IsotropicView view{n, amps, q_grid[qi]};
        best[qi] = std::max(best[qi], entry.evaluator.value(view));
      }
    }
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      if (best[qi] > detection_threshold) ++hits[qi];
    }
  }
}

// Shared core: hit counts per grid point, deterministic in (seed, k) and
// independent of the thread split.
std::vector<std::uint64_t> accumulate_hits(const StateVector& base, const UnitaryGroup& group,
                                           const DetectorConfig& detector,
                                           const std::vector<double>& q_grid,
                                           std::uint64_t n_samples, std::uint64_t seed,
                                           ExecPolicy policy) {
  if (n_samples == 0) throw std::invalid_argument("estimation needs at least one sample");
  if (q_grid.empty()) throw std::invalid_argument("the noise grid cannot be empty");
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (!(q_grid[i] >= 0.0 && q_grid[i] <= 1.0))
      throw std::invalid_argument("noise weights must be in [0, 1]");
    if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
      throw std::invalid_argument("the noise grid must be strictly increasing");
  }
  if (group.mode() == UnitaryGroup::Mode::Fixed) {
    const auto& sequence = group.fixed_sequence();
    if (sequence.size() < n_samples)
      throw CapabilityError("fixed unitary sequence holds " + std::to_string(sequence.size()) +
                            " entries, need " + std::to_string(n_samples));
    for (const LocalUnitary& u : sequence) {
      if (!(u.qubit_count() == base.qubit_count()))
        throw std::invalid_argument("fixed sequence register size does not match the state");
    }
  }
  const DetectorPlan plan = build_plan(detector, base.qubit_count());

  std::uint64_t thread_count =
      policy.threads != 0 ? policy.threads : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<std::uint64_t>(thread_count, n_samples);

  if (thread_count <= 1) {
    std::vector<std::uint64_t> hits(q_grid.size(), 0);
    run_samples(base, group, plan, q_grid, seed, 0, n_samples, hits);
    return hits;
  }

  std::vector<std::vector<std::uint64_t>> partial(
      thread_count, std::vector<std::uint64_t>(q_grid.size(), 0));
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> failures(thread_count);
  const std::uint64_t chunk = (n_samples + thread_count - 1) / thread_count;
  for (std::uint64_t t = 0; t < thread_count; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(n_samples, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, t, begin, end] {
      try {
        run_samples(base, group, plan, q_grid, seed, begin, end, partial[t]);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<std::uint64_t> hits(q_grid.size(), 0);
  for (const auto& part : partial) {
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) hits[qi] += part[qi];
  }
  return hits;
}

constexpr double kConfidence = 0.95;

ProbabilityEstimate make_estimate(std::uint64_t hits, std::uint64_t n_samples,
                                  std::uint64_t seed) {
  ProbabilityEstimate estimate;
  estimate.p_hat = static_cast<double>(hits) / static_cast<double>(n_samples);
  std::tie(estimate.ci_low, estimate.ci_high) = wilson_interval(hits, n_samples, kConfidence);
  estimate.n_samples = n_samples;
  estimate.n_hits = hits;
  estimate.seed = seed;
  estimate.threshold = detection_threshold;
  return estimate;
}

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t total,
                                          double confidence) {
  if (total == 0) throw std::invalid_argument("the interval needs at least one trial");
  if (hits > total) throw std::invalid_argument("hits cannot exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must be in (0, 1)");
  const double z = normal_quantile(0.5 * (1.0 + confidence));
  const double trials = static_cast<double>(total);
  const double p_hat = static_cast<double>(hits) / trials;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double center = (p_hat + z2 / (2.0 * trials)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials)) / denom;
  const double low = hits == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = hits == total ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

ProbabilityEstimate estimate_probability(const NoiseFamily& family, const UnitaryGroup& group,
                                         const DetectorConfig& detector, std::uint64_t n_samples,
                                         std::uint64_t seed, ExecPolicy policy) {
  const std::vector<double> grid{family.q()};
  const auto hits =
      accumulate_hits(family.base(), group, detector, grid, n_samples, seed, policy);
  return make_estimate(hits[0], n_samples, seed);
}

SweepResult sweep_noise(const StateVector& base, const std::vector<double>& q_grid,
                        const UnitaryGroup& group, const DetectorConfig& detector,
                        std::uint64_t n_samples, std::uint64_t seed, ExecPolicy policy) {
  const auto hits = accumulate_hits(base, group, detector, q_grid, n_samples, seed, policy);
  SweepResult result;
  result.points.reserve(q_grid.size());
  for (std::size_t qi = 0; qi < q_grid.size(); ++qi)
    result.points.push_back({q_grid[qi], make_estimate(hits[qi], n_samples, seed)});
  return result;
}

}  // namespace gme
