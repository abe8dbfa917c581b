#include "ackf/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ackf {

namespace {
constexpr double kVarianceFloor = 1e-12;
}

SlidingWindow::SlidingWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1) {
    throw std::invalid_argument("SlidingWindow: capacity must be positive");
  }
}

void SlidingWindow::push(EpochRecord rec) {
  records_.push_back(std::move(rec));
  if (static_cast<int>(records_.size()) > capacity_) {
    records_.pop_front();
  }
}

double epoch_variance(const Vec& innovation, const SpdMat& R, int m,
                      VarianceMode mode) {
  double quad;
  if (mode == VarianceMode::paper_literal) {
    quad = innovation.dot(R.mat() * innovation);
  } else {
    quad = innovation.dot(R.mat().llt().solve(innovation));
  }
  return std::max(quad / static_cast<double>(m), kVarianceFloor);
}

std::vector<double> window_weights(const SlidingWindow& window) {
  const int len = window.size();
  std::vector<double> weights(len);
  double total = 0.0;
  for (int j = 0; j < len; ++j) {
    weights[j] = 1.0 / window.at(j).variance;
    total += weights[j];
  }
  for (double& w : weights) {
    w /= total;
  }
  return weights;
}

Mat innovation_cov_plain(const SlidingWindow& window) {
  const int len = window.size();
  if (len == 0) {
    throw LengthMismatch("innovation_cov_plain: empty window");
  }
  const Eigen::Index m = window.at(0).innovation.size();
  Mat sum = Mat::Zero(m, m);
  for (int j = 0; j < len; ++j) {
    const Vec& v = window.at(j).innovation;
    sum.noalias() += v * v.transpose();
  }
  return symmetrize(sum / static_cast<double>(len));
}

Mat innovation_cov_weighted(const SlidingWindow& window) {
  const int len = window.size();
  if (len == 0) {
    throw LengthMismatch("innovation_cov_weighted: empty window");
  }
  const std::vector<double> weights = window_weights(window);
  const Eigen::Index m = window.at(0).innovation.size();
  Mat sum = Mat::Zero(m, m);
  for (int j = 0; j < len; ++j) {
    const Vec& v = window.at(j).innovation;
    sum.noalias() += weights[j] * v * v.transpose();
  }
  return symmetrize(sum / static_cast<double>(len));
}

double robust_cutoff(const SlidingWindow& window, const AdaptiveConfig& cfg) {
  const int len = window.size();
  if (len == 0) {
    throw LengthMismatch("robust_cutoff: empty window");
  }
  std::vector<double> sorted(len);
  for (int j = 0; j < len; ++j) {
    sorted[j] = window.at(j).variance;
  }
  std::nth_element(sorted.begin(), sorted.begin() + len / 2, sorted.end());
  const double median = std::max(sorted[len / 2], kVarianceFloor);
  return cfg.huber_threshold * median;
}

std::vector<double> estimator_weights(const SlidingWindow& window,
                                      const AdaptiveConfig& cfg) {
  const int len = window.size();
  if (cfg.force_uniform_weights) {
    return std::vector<double>(len, 1.0 / len);
  }
  if (cfg.weight_scheme == WeightScheme::literal) {
    return window_weights(window);
  }
  const double cutoff = robust_cutoff(window, cfg);
  std::vector<double> variances(len);
  for (int j = 0; j < len; ++j) {
    variances[j] = window.at(j).variance;
  }

  std::vector<double> weights(len);
  double total = 0.0;
  for (int j = 0; j < len; ++j) {
    weights[j] = variances[j] <= cutoff ? 1.0 : cutoff / variances[j];
    total += weights[j];
  }
  for (double& w : weights) {
    w /= total;
  }
  return weights;
}

namespace {

Mat window_mean_hph(const SlidingWindow& window) {
  const Eigen::Index m = window.at(0).hph.rows();
  Mat mean = Mat::Zero(m, m);
  for (int j = 0; j < window.size(); ++j) {
    mean += window.at(j).hph;
  }
  return mean / static_cast<double>(window.size());
}

}  // namespace

SpdMat estimate_R(const SlidingWindow& window, const AdaptiveConfig& cfg) {
  if (window.size() == 0) {
    throw LengthMismatch("estimate_R: empty window");
  }
  const std::vector<double> weights = estimator_weights(window, cfg);
  const Eigen::Index m = window.at(0).innovation.size();
  Mat second_moment = Mat::Zero(m, m);
  for (int j = 0; j < window.size(); ++j) {
    const Vec& v = window.at(j).innovation;
    second_moment.noalias() += weights[j] * v * v.transpose();
  }
  return spd_project(second_moment - window_mean_hph(window), cfg.r_floor);
}

SpdMat estimate_Q(const SlidingWindow& window, const Mat& projected_bracket,
                  const Mat& projected_nominal_q, const SpdMat& nominal_Q,
                  const AdaptiveConfig& cfg) {
  if (!cfg.adapt_q) {
    return nominal_Q;
  }
  if (window.size() == 0) {
    throw LengthMismatch("estimate_Q: empty window");
  }
  const std::vector<double> weights = estimator_weights(window, cfg);
  const Eigen::Index m = window.at(0).innovation.size();
  Mat second_moments = Mat::Zero(m, m);
  for (int j = 0; j < window.size(); ++j) {
    const Vec& v = window.at(j).innovation;
    const Vec& e = window.at(j).residual;
    second_moments.noalias() += weights[j] * v * v.transpose();
    second_moments.noalias() += weights[j] * e * e.transpose();
  }
  const SpdMat q_meas =
      spd_project(second_moments - projected_bracket, cfg.q_floor);
  if (nominal_Q.dim() == m) {
    return q_meas;
  }
  // Rank-deficient observation: rescale the nominal Q shape by the trace
  // ratio of the measurement-space estimate to the projected nominal.
  const double denom = std::max(projected_nominal_q.trace(), cfg.q_floor);
  const double ratio = q_meas.mat().trace() / denom;
  return spd_project(ratio * nominal_Q.mat(), cfg.q_floor);
}

namespace {

Vec wrapped_meas_diff(const SystemModel& model, const Vec& z, const Vec& zhat) {
  Vec d = z - zhat;
  for (int idx : model.angle_components) {
    d(idx) = wrap_angle(d(idx));
  }
  return d;
}

AdaptiveStepOutput adaptive_epoch(const SystemModel& model,
                                  const Gaussian& belief, const Vec& z,
                                  const Vec& u, const SpdMat& Q,
                                  const SpdMat& nominal_R,
                                  SlidingWindow& window,
                                  const AdaptiveConfig& cfg, double dt,
                                  const CkfOptions& opts) {
  const Gaussian predicted = predict(model, belief, Q, u, dt, opts);
  const MeasurementMoments moments = measurement_moments(model, predicted);

  EpochRecord rec;
  rec.innovation = wrapped_meas_diff(model, z, moments.predicted_z);
  rec.residual = Vec::Zero(model.meas_dim);
  rec.variance =
      epoch_variance(rec.innovation, nominal_R, model.meas_dim,
                     cfg.variance_mode);
  rec.hph = moments.hph;
  window.push(std::move(rec));

  // nominal_until_full warm-up: adapt only once the window is populated.
  const SpdMat adapted_R =
      window.full() ? estimate_R(window, cfg) : nominal_R;

  // Robust gating: an epoch whose variance lands past the estimator cutoff
  // is downweighted in the update itself, not just in the window average;
  // otherwise the recovered (clean) R hands an outlier a near-optimal gain.
  SpdMat update_R = adapted_R;
  double gate_scale = 1.0;
  if (window.full() && !cfg.force_uniform_weights &&
      cfg.weight_scheme == WeightScheme::huber) {
    const double cutoff = robust_cutoff(window, cfg);
    const double var = window.back().variance;
    if (var > cutoff) {
      gate_scale = var / cutoff;
      update_R = SpdMat(symmetrize(gate_scale * adapted_R.mat()));
    }
  }

  UpdateOutput out =
      update_with_moments(model, predicted, moments, z, update_R, opts);
  window.back().residual =
      wrapped_meas_diff(model, z, model.measure(out.posterior.mean));

  SpdMat next_Q = Q;
  if (cfg.adapt_q && window.full()) {
    const Mat hqh =
        measurement_moments(model, Gaussian{predicted.mean, Q}).hph;
    // E[vv^T] = S and E[nn^T] = R S^-1 R with S = hph + R, so subtracting
    // S + R S^-1 R - hqh leaves hqh in expectation (the measurement-space
    // image of Q).
    const Mat s = moments.hph + adapted_R.mat();
    const Mat rsr =
        adapted_R.mat() * s.ldlt().solve(adapted_R.mat());
    const Mat bracket = symmetrize(s + rsr) - hqh;
    next_Q = estimate_Q(window, bracket, hqh, Q, cfg);
  }

  return AdaptiveStepOutput{out.posterior, std::move(out), adapted_R,
                            std::move(next_Q), gate_scale};
}

}  // namespace

AdaptiveStepOutput ackf_step(const SystemModel& model, const Gaussian& belief,
                             const Vec& z, const Vec& u, const SpdMat& Q,
                             const SpdMat& nominal_R, SlidingWindow& window,
                             const AdaptiveConfig& cfg, double dt,
                             const CkfOptions& opts) {
  AdaptiveConfig uniform = cfg;
  uniform.force_uniform_weights = true;
  return adaptive_epoch(model, belief, z, u, Q, nominal_R, window, uniform, dt,
                        opts);
}

AdaptiveStepOutput cmrackf_step(const SystemModel& model,
                                const Gaussian& belief, const Vec& z,
                                const Vec& u, const SpdMat& Q,
                                const SpdMat& nominal_R, SlidingWindow& window,
                                const AdaptiveConfig& cfg, double dt,
                                const CkfOptions& opts) {
  return adaptive_epoch(model, belief, z, u, Q, nominal_R, window, cfg, dt,
                        opts);
}

}  // namespace ackf
