#ifndef ACKF_HARNESS_HPP_
#define ACKF_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ackf/adaptive.hpp"

namespace ackf {

enum class FilterVariant { ckf, ackf, cmrackf };

std::string variant_name(FilterVariant v);
FilterVariant variant_from_name(const std::string& name);

enum class OutlierMode { additive_spike, variance_inflation };

struct OutlierModel {
  double probability = 0.1;
  double magnitude = 10.0;  // multiplier on the measurement-noise std
  OutlierMode mode = OutlierMode::additive_spike;
};

/// Sudden target maneuvers: with the given per-step probability the
/// horizontal velocity receives a forward thrust burst of `kick` m/s.
/// The drag term keeps the boosted speed bounded. Unlike measurement
/// outliers these innovation spikes carry real state information, so
/// inflating R in response to them loses track accuracy.
struct ManeuverModel {
  double probability = 0.0;
  double kick = 0.0;  // m/s
};

struct Trajectory {
  std::vector<Vec> states;  // steps + 1 entries, index 0 is the initial state
  double dt = 0.0;
};

struct RunResult {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<Vec> truth;      // aligned with estimates
  std::vector<Vec> estimate;   // posterior means, entry 0 = initial belief
  std::vector<Vec> innovation; // one per processed measurement
  std::vector<Vec> r_diag;     // adapted R diagonal per measurement
  std::vector<std::vector<double>> weights;  // window weights per measurement
  std::vector<double> position_error;        // meters, aligned with estimates
  bool diverged = false;
  int steps_completed = 0;
};

struct RmseRow {
  std::string filter;
  double mean_rmse = 0.0;
  int runs = 0;
  int diverged = 0;
  std::vector<double> per_run;
  std::vector<std::uint64_t> seeds;
  std::vector<bool> run_diverged;
};

struct RmseTable {
  std::vector<RmseRow> rows;
};

/// Everything one experiment needs besides the run count and seed.
struct ExperimentSetup {
  TargetScenario scenario;
  SpdMat true_Q;     // process noise driving the truth
  SpdMat true_R;     // measurement noise driving the sensor
  NoiseSpec nominal; // what the filters are told
  OutlierModel outliers;
  ManeuverModel maneuvers;
  AdaptiveConfig adaptive;
  CkfOptions ckf_opts;
  Mat P0;            // initial covariance (diagonal by default)
};

ExperimentSetup default_setup();

Trajectory simulate_truth(const TargetScenario& sc, const SpdMat& Q,
                          std::uint64_t seed,
                          const ManeuverModel& maneuvers = ManeuverModel{});

std::vector<Vec> simulate_measurements(const Trajectory& traj,
                                       const TargetScenario& sc,
                                       const SpdMat& R,
                                       const OutlierModel& outliers,
                                       std::uint64_t seed);

/// Initial belief: truth x0 shifted by one prior standard deviation per
/// component, covariance P0.
Gaussian initial_belief(const ExperimentSetup& setup);

RunResult run_filter(FilterVariant variant, const ExperimentSetup& setup,
                     const Trajectory& truth,
                     const std::vector<Vec>& measurements,
                     const Gaussian& init, std::uint64_t seed);

double position_rmse(const RunResult& result, const Trajectory& truth);

RmseTable monte_carlo(const std::vector<FilterVariant>& variants,
                      const ExperimentSetup& setup, int runs,
                      std::uint64_t base_seed);

/// Per-run seed derivation shared by the CLI so exports stay reproducible.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run,
                          std::uint64_t stream);

}  // namespace ackf

#endif  // ACKF_HARNESS_HPP_
