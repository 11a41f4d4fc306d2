#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gme/errors.hpp"
#include "gme/estimator.hpp"
#include "test_support.hpp"

using namespace gme;

namespace {

const QubitCount n3{3};
const QubitCount n4{4};

DetectorConfig q0_comp() {
  return DetectorConfig::single(CriterionId::q0(), BasisRotation::computational());
}

DetectorConfig full_detector() {
  return DetectorConfig{{{CriterionId::q0(), BasisRotation::computational()},
                         {CriterionId::q0(), BasisRotation::hadamard()},
                         {CriterionId::qm(1), BasisRotation::computational()},
                         {CriterionId::qm(1), BasisRotation::hadamard()}}};
}

}  // namespace

TEST_CASE("wilson interval reproduces a reference value") {
  const auto [low, high] = wilson_interval(50, 100, 0.95);
  CHECK(low == doctest::Approx(0.4038315304).epsilon(1e-9));
  CHECK(high == doctest::Approx(0.5961684696).epsilon(1e-9));
}

TEST_CASE("wilson interval handles degenerate edges exactly") {
  const auto [low0, high0] = wilson_interval(0, 250, 0.95);
  CHECK(low0 == 0.0);
  CHECK(high0 > 0.0);
  CHECK(high0 < 0.05);

  const auto [low1, high1] = wilson_interval(250, 250, 0.95);
  CHECK(high1 == 1.0);
  CHECK(low1 < 1.0);
  CHECK(low1 > 0.95);
}

TEST_CASE("wilson interval is symmetric under success and failure exchange") {
  for (const std::uint64_t hits : {3u, 17u, 200u}) {
    const auto [low, high] = wilson_interval(hits, 250, 0.95);
    const auto [flip_low, flip_high] = wilson_interval(250 - hits, 250, 0.95);
    CHECK(low == doctest::Approx(1.0 - flip_high).epsilon(1e-12));
    CHECK(high == doctest::Approx(1.0 - flip_low).epsilon(1e-12));
  }
}

TEST_CASE("wilson interval validates its arguments") {
  CHECK_THROWS_AS(wilson_interval(5, 0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(6, 5, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1, 5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1, 5, 1.0), std::invalid_argument);
}

TEST_CASE("estimates are identical across thread counts") {
  const NoiseFamily family{make_ghz(n3), 0.3};
  const UnitaryGroup group = UnitaryGroup::product();
  const DetectorConfig detector = full_detector();
  const ProbabilityEstimate sequential =
      estimate_probability(family, group, detector, 4000, 99, ExecPolicy{1});
  for (const unsigned threads : {0u, 2u, 3u, 7u}) {
    const ProbabilityEstimate parallel =
        estimate_probability(family, group, detector, 4000, 99, ExecPolicy{threads});
    CHECK(parallel.n_hits == sequential.n_hits);
    CHECK(parallel.p_hat == sequential.p_hat);
    CHECK(parallel.ci_low == sequential.ci_low);
    CHECK(parallel.ci_high == sequential.ci_high);
  }
}

TEST_CASE("the estimator counts exactly what a manual replay counts") {
  const std::uint64_t n_samples = 2000, seed = 123;
  const double q = 0.4;
  const StateVector base = make_ghz(n3);
  const UnitaryGroup group = UnitaryGroup::product();
  const ProbabilityEstimate estimate =
      estimate_probability(NoiseFamily{base, q}, group, q0_comp(), n_samples, seed);

  const CriterionEvaluator evaluator{CriterionId::q0(), n3};
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < n_samples; ++k) {
    RandomStream rng{seed, k};
    const LocalUnitary u = sample_group(group, n3, rng);
    Eigen::VectorXcd amps = base.amplitudes();
    apply_local_unitary_in_place(amps, u);
    const IsotropicView view{n3, amps, q};
    if (evaluator.value(view) > detection_threshold) ++hits;
  }
  CHECK(estimate.n_hits == hits);
  CHECK(estimate.p_hat == double(hits) / double(n_samples));
  CHECK(estimate.n_samples == n_samples);
  CHECK(estimate.seed == seed);
  CHECK(estimate.threshold == detection_threshold);
  CHECK(hits > 0);
  CHECK(hits < n_samples);
}

TEST_CASE("adding detector pairs never loses hits") {
  const NoiseFamily family{make_ghz(n3), 0.45};
  const UnitaryGroup group = UnitaryGroup::product();
  const std::uint64_t n_samples = 3000, seed = 7;

  const DetectorConfig a = q0_comp();
  const DetectorConfig b{{{CriterionId::q0(), BasisRotation::computational()},
                          {CriterionId::qm(1), BasisRotation::computational()}}};
  const DetectorConfig c = full_detector();

  const auto hits_a = estimate_probability(family, group, a, n_samples, seed).n_hits;
  const auto hits_b = estimate_probability(family, group, b, n_samples, seed).n_hits;
  const auto hits_c = estimate_probability(family, group, c, n_samples, seed).n_hits;
  CHECK(hits_a <= hits_b);
  CHECK(hits_b <= hits_c);
  CHECK(hits_a > 0);
}

TEST_CASE("different seeds explore different unitaries") {
  const NoiseFamily family{make_ghz(n3), 0.4};
  const auto first = estimate_probability(family, UnitaryGroup::product(), q0_comp(), 2000, 1);
  const auto second = estimate_probability(family, UnitaryGroup::product(), q0_comp(), 2000, 2);
  CHECK(first.n_hits != second.n_hits);
}

TEST_CASE("interval width scales with the square root of the sample count") {
  const NoiseFamily family{make_ghz(n3), 0.3};
  const auto small =
      estimate_probability(family, UnitaryGroup::product(), q0_comp(), 20000, 11);
  const auto large =
      estimate_probability(family, UnitaryGroup::product(), q0_comp(), 80000, 11);
  const double ratio =
      (small.ci_high - small.ci_low) / (large.ci_high - large.ci_low);
  CHECK(ratio > 1.7);
  CHECK(ratio < 2.3);
}

TEST_CASE("symmetric sampling never detects the four-qubit w state") {
  const NoiseFamily family{make_w(n4), 0.0};
  const auto estimate =
      estimate_probability(family, UnitaryGroup::symmetric(), q0_comp(), 10000, 5);
  CHECK(estimate.n_hits == 0);
  CHECK(estimate.ci_low == 0.0);
}

TEST_CASE("fully depolarized states are never detected") {
  const NoiseFamily family{make_ghz(n3), 1.0};
  const auto estimate =
      estimate_probability(family, UnitaryGroup::product(), full_detector(), 5000, 3);
  CHECK(estimate.n_hits == 0);
}

TEST_CASE("past the noise threshold the detector goes quiet") {
  // 4/7 is where the ghz corner stops outrunning the cut populations.
  for (const double q : {4.0 / 7.0, 0.7}) {
    for (const UnitaryGroup& group : {UnitaryGroup::product(), UnitaryGroup::symmetric()}) {
      const auto estimate =
          estimate_probability(NoiseFamily{make_ghz(n3), q}, group, full_detector(), 20000, 17);
      CAPTURE(q);
      CAPTURE(group.name());
      CHECK(estimate.n_hits == 0);
    }
  }
  for (const double q : {0.53, 0.7}) {
    for (const UnitaryGroup& group : {UnitaryGroup::product(), UnitaryGroup::symmetric()}) {
      const auto estimate =
          estimate_probability(NoiseFamily{make_w(n3), q}, group, full_detector(), 20000, 17);
      CAPTURE(q);
      CAPTURE(group.name());
      CHECK(estimate.n_hits == 0);
    }
  }
}

TEST_CASE("a fixed identity sequence detects the clean ghz state always") {
  const std::uint64_t n_samples = 50;
  const UnitaryGroup group =
      UnitaryGroup::fixed(std::vector<LocalUnitary>(n_samples, LocalUnitary::identity(n3)));
  const auto estimate =
      estimate_probability(NoiseFamily{make_ghz(n3), 0.0}, group, q0_comp(), n_samples, 0);
  CHECK(estimate.n_hits == n_samples);
  CHECK(estimate.p_hat == 1.0);
  CHECK(estimate.ci_high == 1.0);
}

TEST_CASE("fixed sequences must cover the sample count and register") {
  const UnitaryGroup short_group =
      UnitaryGroup::fixed(std::vector<LocalUnitary>(3, LocalUnitary::identity(n3)));
  CHECK_THROWS_AS(
      estimate_probability(NoiseFamily{make_ghz(n3), 0.0}, short_group, q0_comp(), 4, 0),
      CapabilityError);
  const UnitaryGroup wrong_register =
      UnitaryGroup::fixed(std::vector<LocalUnitary>(4, LocalUnitary::identity(n4)));
  CHECK_THROWS_AS(
      estimate_probability(NoiseFamily{make_ghz(n3), 0.0}, wrong_register, q0_comp(), 4, 0),
      std::invalid_argument);
}

TEST_CASE("estimation rejects an empty sample budget") {
  CHECK_THROWS_AS(
      estimate_probability(NoiseFamily{make_ghz(n3), 0.0}, UnitaryGroup::product(), q0_comp(), 0, 1),
      std::invalid_argument);
}

TEST_CASE("sweep points match standalone estimates exactly") {
  const StateVector base = make_ghz(n3);
  const std::vector<double> grid = {0.2, 0.5};
  const SweepResult sweep =
      sweep_noise(base, grid, UnitaryGroup::product(), q0_comp(), 3000, 21);
  REQUIRE(sweep.points.size() == 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto standalone = estimate_probability(NoiseFamily{base, grid[i]},
                                                 UnitaryGroup::product(), q0_comp(), 3000, 21);
    CHECK(sweep.points[i].q == grid[i]);
    CHECK(sweep.points[i].estimate.n_hits == standalone.n_hits);
    CHECK(sweep.points[i].estimate.p_hat == standalone.p_hat);
    CHECK(sweep.points[i].estimate.ci_low == standalone.ci_low);
    CHECK(sweep.points[i].estimate.ci_high == standalone.ci_high);
  }
  CHECK(sweep.points[0].estimate.n_hits > sweep.points[1].estimate.n_hits);
}

TEST_CASE("sweep grids are validated") {
  const StateVector base = make_ghz(n3);
  const UnitaryGroup group = UnitaryGroup::product();
  CHECK_THROWS_AS(sweep_noise(base, {}, group, q0_comp(), 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep_noise(base, {0.5, 0.2}, group, q0_comp(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_noise(base, {0.2, 0.2}, group, q0_comp(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_noise(base, {-0.1, 0.5}, group, q0_comp(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_noise(base, {0.5, 1.2}, group, q0_comp(), 100, 1),
                  std::invalid_argument);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  const StateVector base = make_w(n3);
  const std::vector<double> grid = {0.0, 0.3, 0.6};
  const SweepResult a =
      sweep_noise(base, grid, UnitaryGroup::symmetric(), full_detector(), 2000, 8, ExecPolicy{1});
  const SweepResult b =
      sweep_noise(base, grid, UnitaryGroup::symmetric(), full_detector(), 2000, 8, ExecPolicy{4});
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    CHECK(a.points[i].estimate.n_hits == b.points[i].estimate.n_hits);
}
