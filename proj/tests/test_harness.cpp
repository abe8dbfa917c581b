#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ackf/harness.hpp"

using namespace ackf;

TEST_CASE("variant names round-trip") {
  for (FilterVariant v :
       {FilterVariant::ckf, FilterVariant::ackf, FilterVariant::cmrackf}) {
    CHECK(variant_from_name(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(variant_from_name("ekf"), std::invalid_argument);
}

TEST_CASE("derive_seed: distinct streams, stable values") {
  CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("simulate_truth: Q=0 equals the deterministic rollout") {
  TargetScenario sc;
  sc.steps = 50;
  const SpdMat q(1e-30 * Mat::Identity(4, 4));
  const Trajectory traj = simulate_truth(sc, q, 7);
  REQUIRE(traj.states.size() == 51);
  Vec x = sc.x0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    CHECK((traj.states[k] - x).norm() <= 1e-10);
    x = target_process(x, sc);
  }
}

TEST_CASE("simulate_truth: same seed twice is identical") {
  TargetScenario sc;
  sc.steps = 100;
  const SpdMat q(0.01 * Mat::Identity(4, 4));
  const Trajectory a = simulate_truth(sc, q, 99);
  const Trajectory b = simulate_truth(sc, q, 99);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    CHECK(a.states[k] == b.states[k]);
  }
}

TEST_CASE("simulate_truth: injected noise covariance within 5% of Q") {
  // Ts = 0 turns the dynamics into the identity map, so consecutive state
  // differences are exactly the injected noise draws.
  TargetScenario sc;
  sc.Ts = 0.0;
  sc.x0 = Vec::Zero(4);
  sc.steps = 100000;
  Mat q = Mat::Zero(4, 4);
  q.diagonal() << 0.5, 1.0, 2.0, 0.25;
  const Trajectory traj = simulate_truth(sc, SpdMat(q), 13);

  Mat cov = Mat::Zero(4, 4);
  for (int k = 0; k < sc.steps; ++k) {
    const Vec w = traj.states[k + 1] - traj.states[k];
    cov.noalias() += w * w.transpose();
  }
  cov /= static_cast<double>(sc.steps);
  for (int i = 0; i < 4; ++i) {
    CHECK(cov(i, i) == doctest::Approx(q(i, i)).epsilon(0.05));
  }
}

TEST_CASE("simulate_truth: maneuver kicks shift the horizontal velocity") {
  TargetScenario sc;
  sc.steps = 200;
  const SpdMat q(1e-30 * Mat::Identity(4, 4));
  const Trajectory calm = simulate_truth(sc, q, 3);
  const Trajectory kicked = simulate_truth(sc, q, 3, ManeuverModel{0.5, 10.0});
  CHECK(calm.states.back()(1) < 1.0);
  CHECK(kicked.states.back()(1) > 10.0);
}

namespace {

Trajectory constant_trajectory(const Vec& state, int epochs) {
  Trajectory traj;
  traj.dt = 0.1;
  traj.states.assign(epochs + 1, state);
  return traj;
}

}  // namespace

TEST_CASE("simulate_measurements: near-zero R reproduces target_measure") {
  TargetScenario sc;
  sc.steps = 20;
  const Trajectory traj =
      constant_trajectory((Vec(4) << 500, 0, -200, 0).finished(), 20);
  const SpdMat r(1e-30 * Mat::Identity(2, 2));
  OutlierModel outliers;
  outliers.probability = 0.0;
  const std::vector<Vec> zs = simulate_measurements(traj, sc, r, outliers, 5);
  REQUIRE(zs.size() == 20);
  const Vec expected = target_measure(traj.states[1], sc);
  for (const Vec& z : zs) {
    CHECK((z - expected).norm() <= 1e-10);
  }
}

TEST_CASE("simulate_measurements: contaminated fraction near probability") {
  TargetScenario sc;
  const int epochs = 10000;
  const Trajectory traj =
      constant_trajectory((Vec(4) << 1000, 0, 0, 0).finished(), epochs);
  Mat r = Mat::Zero(2, 2);
  r << 1.0, 0.0, 0.0, 1e-6;
  OutlierModel outliers;
  outliers.probability = 0.1;
  outliers.magnitude = 10.0;
  const std::vector<Vec> zs =
      simulate_measurements(traj, sc, SpdMat(r), outliers, 21);

  const double true_range = target_measure(traj.states[1], sc)(0);
  int contaminated = 0;
  double worst = 0.0;
  for (const Vec& z : zs) {
    const double dev = std::abs(z(0) - true_range);
    worst = std::max(worst, dev);
    if (dev > 5.0) {
      ++contaminated;
    }
  }
  const double fraction = contaminated / static_cast<double>(epochs);
  CHECK(fraction == doctest::Approx(0.1).epsilon(0.1));
  CHECK(std::abs(fraction - 0.1) <= 0.01);
  // 10 sigma spikes stand clear of the 5 sigma clean-noise envelope.
  CHECK(worst > 5.0);
}

TEST_CASE("simulate_measurements: same seed twice is identical") {
  TargetScenario sc;
  sc.steps = 50;
  const Trajectory traj = simulate_truth(sc, SpdMat(0.01 * Mat::Identity(4, 4)), 1);
  const SpdMat r(Mat::Identity(2, 2));
  const std::vector<Vec> a = simulate_measurements(traj, sc, r, OutlierModel{}, 9);
  const std::vector<Vec> b = simulate_measurements(traj, sc, r, OutlierModel{}, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);
  }
}

TEST_CASE("run_filter: zero-length measurement list") {
  const ExperimentSetup setup = default_setup();
  const Trajectory traj = simulate_truth(setup.scenario, setup.true_Q, 1);
  const RunResult res =
      run_filter(FilterVariant::ckf, setup, traj, {}, initial_belief(setup), 1);
  CHECK(res.estimate.size() == 1);
  CHECK(res.steps_completed == 0);
  CHECK_FALSE(res.diverged);
  CHECK(res.innovation.empty());
}

TEST_CASE("run_filter: forced-uniform cmrackf matches ackf") {
  ExperimentSetup setup = default_setup();
  setup.scenario.steps = 120;
  setup.adaptive.force_uniform_weights = true;
  setup.adaptive.adapt_q = false;

  const Trajectory traj = simulate_truth(setup.scenario, setup.true_Q, 11);
  const std::vector<Vec> zs = simulate_measurements(
      traj, setup.scenario, setup.true_R, setup.outliers, 12);
  const Gaussian init = initial_belief(setup);
  const RunResult a =
      run_filter(FilterVariant::ackf, setup, traj, zs, init, 12);
  const RunResult b =
      run_filter(FilterVariant::cmrackf, setup, traj, zs, init, 12);
  REQUIRE(a.estimate.size() == b.estimate.size());
  for (std::size_t k = 0; k < a.estimate.size(); ++k) {
    CHECK((a.estimate[k] - b.estimate[k]).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("position_rmse: exact estimate gives zero") {
  TargetScenario sc;
  sc.steps = 10;
  const Trajectory traj = simulate_truth(sc, SpdMat(0.01 * Mat::Identity(4, 4)), 2);
  RunResult res;
  res.estimate = traj.states;
  CHECK(position_rmse(res, traj) == 0.0);
}

TEST_CASE("position_rmse: constant 1 m offset in x1") {
  TargetScenario sc;
  sc.steps = 10;
  const Trajectory traj = simulate_truth(sc, SpdMat(0.01 * Mat::Identity(4, 4)), 2);
  RunResult res;
  for (const Vec& x : traj.states) {
    Vec e = x;
    e(0) += 1.0;
    res.estimate.push_back(e);
  }
  CHECK(position_rmse(res, traj) == doctest::Approx(1.0));
}

TEST_CASE("position_rmse: hand-computed 3-step case") {
  Trajectory traj;
  traj.dt = 0.1;
  traj.states = {Vec::Zero(4), Vec::Zero(4), Vec::Zero(4), Vec::Zero(4)};
  RunResult res;
  res.estimate.push_back(Vec::Zero(4));
  res.estimate.push_back((Vec(4) << 3, 0, 4, 0).finished());   // error 5
  res.estimate.push_back((Vec(4) << 0, 0, 1, 0).finished());   // error 1
  res.estimate.push_back((Vec(4) << -2, 0, 0, 0).finished());  // error 2
  // sqrt((25 + 1 + 4) / 3), initial entry excluded
  CHECK(position_rmse(res, traj) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("position_rmse: truth shorter than estimate throws") {
  Trajectory traj;
  traj.states = {Vec::Zero(4)};
  RunResult res;
  res.estimate = {Vec::Zero(4), Vec::Zero(4)};
  CHECK_THROWS_AS(position_rmse(res, traj), LengthMismatch);
}

TEST_CASE("monte_carlo: one run, all variants share the realization") {
  ExperimentSetup setup = default_setup();
  setup.scenario.steps = 80;
  const RmseTable table = monte_carlo(
      {FilterVariant::ckf, FilterVariant::ackf, FilterVariant::cmrackf}, setup,
      1, 3);
  REQUIRE(table.rows.size() == 3);
  for (const RmseRow& row : table.rows) {
    CHECK(row.runs == 1);
    CHECK(row.per_run.size() == 1);
    CHECK(row.per_run[0] >= 0.0);
  }
  // Paired seeds: every variant records the same measurement seed.
  CHECK(table.rows[0].seeds == table.rows[1].seeds);
  CHECK(table.rows[1].seeds == table.rows[2].seeds);
}

TEST_CASE("monte_carlo: single-variant table") {
  ExperimentSetup setup = default_setup();
  setup.scenario.steps = 60;
  const RmseTable table = monte_carlo({FilterVariant::ckf}, setup, 4, 3);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].filter == "ckf");
  CHECK(table.rows[0].runs == 4);
}

TEST_CASE("monte_carlo: deterministic under the base seed") {
  ExperimentSetup setup = default_setup();
  setup.scenario.steps = 80;
  const std::vector<FilterVariant> variants = {FilterVariant::ackf,
                                               FilterVariant::cmrackf};
  const RmseTable a = monte_carlo(variants, setup, 3, 17);
  const RmseTable b = monte_carlo(variants, setup, 3, 17);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].per_run == b.rows[i].per_run);
    CHECK(a.rows[i].mean_rmse == b.rows[i].mean_rmse);
  }
}

TEST_CASE("monte_carlo: rejects nonpositive run counts") {
  const ExperimentSetup setup = default_setup();
  CHECK_THROWS_AS(monte_carlo({FilterVariant::ckf}, setup, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("monte_carlo: default robust scenario orders the filters") {
  // Small-scale preview of the acceptance experiment.
  const RmseTable table = monte_carlo(
      {FilterVariant::ckf, FilterVariant::ackf, FilterVariant::cmrackf},
      default_setup(), 15, 1);
  const double ckf = table.rows[0].mean_rmse;
  const double ackf = table.rows[1].mean_rmse;
  const double cmrackf = table.rows[2].mean_rmse;
  CHECK(cmrackf < ackf);
  CHECK(ackf < ckf);
}
