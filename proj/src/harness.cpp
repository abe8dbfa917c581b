#include "ackf/harness.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace ackf {

std::string variant_name(FilterVariant v) {
  switch (v) {
    case FilterVariant::ckf:
      return "ckf";
    case FilterVariant::ackf:
      return "ackf";
    case FilterVariant::cmrackf:
      return "cmrackf";
  }
  return "unknown";
}

FilterVariant variant_from_name(const std::string& name) {
  if (name == "ckf") return FilterVariant::ckf;
  if (name == "ackf") return FilterVariant::ackf;
  if (name == "cmrackf") return FilterVariant::cmrackf;
  throw std::invalid_argument("unknown filter variant: " + name);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run,
                          std::uint64_t stream) {
  // splitmix64 over the combined identifier
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (2 * run + stream + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

ExperimentSetup default_setup() {
  const double bearing_std = 0.5 * M_PI / 180.0;
  Mat true_r(2, 2);
  true_r << 5.0 * 5.0, 0.0, 0.0, bearing_std * bearing_std;
  const Mat true_q = 0.01 * Mat::Identity(4, 4);

  // The filters are handed an understated R (selected "by hand", as one
  // would without truth access); the adaptive variants recover the real
  // level.
  const double r_mismatch = 0.1;

  Mat p0 = Mat::Zero(4, 4);
  p0.diagonal() << 100.0, 100.0, 10.0, 10.0;

  return ExperimentSetup{
      TargetScenario{},
      SpdMat(true_q),
      SpdMat(true_r),
      NoiseSpec{SpdMat(true_q), SpdMat(r_mismatch * true_r)},
      OutlierModel{},
      ManeuverModel{},
      AdaptiveConfig{},
      CkfOptions{},
      p0,
  };
}

Trajectory simulate_truth(const TargetScenario& sc, const SpdMat& Q,
                          std::uint64_t seed, const ManeuverModel& maneuvers) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Mat l = cholesky_factor(Q);
  const Eigen::Index n = sc.x0.size();

  Trajectory traj;
  traj.dt = sc.Ts;
  traj.states.reserve(sc.steps + 1);
  traj.states.push_back(sc.x0);
  for (int k = 0; k < sc.steps; ++k) {
    Vec w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i) = gauss(rng);
    }
    // Consume the maneuver draw every epoch so the base noise stream does
    // not depend on where maneuvers land.
    const bool kick = uniform(rng) < maneuvers.probability;

    Vec x = target_process(traj.states.back(), sc) + l * w;
    if (kick) {
      x(1) += maneuvers.kick;
    }
    traj.states.push_back(std::move(x));
  }
  return traj;
}

std::vector<Vec> simulate_measurements(const Trajectory& traj,
                                       const TargetScenario& sc,
                                       const SpdMat& R,
                                       const OutlierModel& outliers,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Mat l = cholesky_factor(R);
  const Vec sigma = R.mat().diagonal().cwiseSqrt();
  const Eigen::Index m = R.dim();

  std::vector<Vec> out;
  out.reserve(traj.states.size() > 0 ? traj.states.size() - 1 : 0);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    Vec g(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      g(i) = gauss(rng);
    }
    // Consume the contamination draws every epoch so the clean part of the
    // stream does not depend on where outliers land.
    const bool contaminated = uniform(rng) < outliers.probability;
    Vec signs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      signs(i) = uniform(rng) < 0.5 ? -1.0 : 1.0;
    }

    Vec noise = l * g;
    if (contaminated) {
      if (outliers.mode == OutlierMode::variance_inflation) {
        noise *= outliers.magnitude;
      } else {
        noise += outliers.magnitude * sigma.cwiseProduct(signs);
      }
    }
    Vec z = target_measure(traj.states[k], sc) + noise;
    z(1) = wrap_angle(z(1));
    out.push_back(std::move(z));
  }
  return out;
}

Gaussian initial_belief(const ExperimentSetup& setup) {
  const Vec sigma = setup.P0.diagonal().cwiseSqrt();
  return Gaussian{setup.scenario.x0 + sigma, SpdMat(setup.P0)};
}

RunResult run_filter(FilterVariant variant, const ExperimentSetup& setup,
                     const Trajectory& truth,
                     const std::vector<Vec>& measurements,
                     const Gaussian& init, std::uint64_t seed) {
  const SystemModel model = make_target_model(setup.scenario);
  const Vec u = Vec::Zero(1);

  RunResult result;
  result.label = variant_name(variant);
  result.seed = seed;
  result.estimate.push_back(init.mean);

  SlidingWindow window(setup.adaptive.window_size);
  Gaussian belief = init;
  SpdMat q = setup.nominal.Q;

  for (const Vec& z : measurements) {
    try {
      if (variant == FilterVariant::ckf) {
        auto [posterior, out] =
            ckf_step(model, belief, z, u, q, setup.nominal.R,
                     setup.scenario.Ts, setup.ckf_opts);
        belief = posterior;
        result.innovation.push_back(out.innovation);
        result.r_diag.push_back(setup.nominal.R.mat().diagonal());
        result.weights.emplace_back();
      } else {
        auto step = variant == FilterVariant::ackf ? &ackf_step : &cmrackf_step;
        AdaptiveStepOutput out =
            step(model, belief, z, u, q, setup.nominal.R, window,
                 setup.adaptive, setup.scenario.Ts, setup.ckf_opts);
        belief = out.posterior;
        q = out.next_Q;
        result.innovation.push_back(out.update.innovation);
        result.r_diag.push_back(out.adapted_R.mat().diagonal());
        result.weights.push_back(window_weights(window));
      }
    } catch (const std::runtime_error&) {
      result.diverged = true;
      break;
    }
    if (!belief.mean.allFinite()) {
      result.diverged = true;
      break;
    }
    result.estimate.push_back(belief.mean);
    ++result.steps_completed;
  }

  const std::size_t n = std::min(result.estimate.size(), truth.states.size());
  result.truth.assign(truth.states.begin(), truth.states.begin() + n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ex = result.estimate[k](0) - truth.states[k](0);
    const double ey = result.estimate[k](2) - truth.states[k](2);
    result.position_error.push_back(std::hypot(ex, ey));
  }
  return result;
}

double position_rmse(const RunResult& result, const Trajectory& truth) {
  if (truth.states.size() < result.estimate.size()) {
    throw LengthMismatch("position_rmse: truth shorter than estimate series");
  }
  const std::size_t n = result.estimate.size();
  if (n <= 1) {
    return 0.0;
  }
  double sum = 0.0;
  // Skip index 0: it is the initial belief, untouched by any filter.
  for (std::size_t k = 1; k < n; ++k) {
    const double ex = result.estimate[k](0) - truth.states[k](0);
    const double ey = result.estimate[k](2) - truth.states[k](2);
    sum += ex * ex + ey * ey;
  }
  return std::sqrt(sum / static_cast<double>(n - 1));
}

RmseTable monte_carlo(const std::vector<FilterVariant>& variants,
                      const ExperimentSetup& setup, int runs,
                      std::uint64_t base_seed) {
  if (runs < 1) {
    throw std::invalid_argument("monte_carlo: runs must be >= 1");
  }
  RmseTable table;
  for (FilterVariant v : variants) {
    RmseRow row;
    row.filter = variant_name(v);
    table.rows.push_back(std::move(row));
  }

  for (int r = 0; r < runs; ++r) {
    const std::uint64_t truth_seed = derive_seed(base_seed, r, 0);
    const std::uint64_t meas_seed = derive_seed(base_seed, r, 1);
    const Trajectory traj =
        simulate_truth(setup.scenario, setup.true_Q, truth_seed,
                       setup.maneuvers);
    const std::vector<Vec> zs = simulate_measurements(
        traj, setup.scenario, setup.true_R, setup.outliers, meas_seed);
    const Gaussian init = initial_belief(setup);

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const RunResult res =
          run_filter(variants[vi], setup, traj, zs, init, meas_seed);
      RmseRow& row = table.rows[vi];
      row.seeds.push_back(meas_seed);
      row.run_diverged.push_back(res.diverged);
      row.per_run.push_back(res.diverged ? std::nan("")
                                         : position_rmse(res, traj));
      if (res.diverged) {
        ++row.diverged;
      }
    }
  }

  for (RmseRow& row : table.rows) {
    double sum = 0.0;
    int count = 0;
    for (double v : row.per_run) {
      if (std::isfinite(v)) {
        sum += v;
        ++count;
      }
    }
    row.runs = static_cast<int>(row.per_run.size());
    row.mean_rmse = count > 0 ? sum / count : std::nan("");
  }
  return table;
}

}  // namespace ackf
