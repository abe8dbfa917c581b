#include "ackf/ckf.hpp"

#include <cmath>

namespace ackf {

CubatureSet cubature_points(const Gaussian& belief) {
  const Eigen::Index n = belief.mean.size();
  const Mat s = cholesky_factor(belief.cov);
  const double scale = std::sqrt(static_cast<double>(n));
  CubatureSet set;
  set.points.resize(n, 2 * n);
  set.weight = 1.0 / (2.0 * static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    set.points.col(j) = belief.mean + scale * s.col(j);
    set.points.col(n + j) = belief.mean - scale * s.col(j);
  }
  return set;
}

Gaussian predict(const SystemModel& model, const Gaussian& belief,
                 const SpdMat& Q, const Vec& u, double dt,
                 const CkfOptions& opts) {
  const CubatureSet set = cubature_points(belief);
  const Eigen::Index n = belief.mean.size();
  const Eigen::Index count = set.points.cols();

  Mat propagated(n, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    propagated.col(i) = model.process(set.points.col(i), u, dt);
  }
  const Vec mean = propagated.rowwise().mean();
  Mat cov = Q.mat();
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vec d = propagated.col(i) - mean;
    cov.noalias() += set.weight * d * d.transpose();
  }
  return Gaussian{mean, spd_project(cov, opts.spd_floor)};
}

MeasurementMoments measurement_moments(const SystemModel& model,
                                       const Gaussian& predicted) {
  const CubatureSet set = cubature_points(predicted);
  const Eigen::Index count = set.points.cols();
  const Eigen::Index m = model.meas_dim;
  const Eigen::Index n = predicted.mean.size();

  Mat z_points(m, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    z_points.col(i) = model.measure(set.points.col(i));
  }
  MeasurementMoments mm;
  mm.predicted_z = z_points.rowwise().mean();
  mm.hph = Mat::Zero(m, m);
  mm.pxz = Mat::Zero(n, m);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vec dz = z_points.col(i) - mm.predicted_z;
    const Vec dx = set.points.col(i) - predicted.mean;
    mm.hph.noalias() += set.weight * dz * dz.transpose();
    mm.pxz.noalias() += set.weight * dx * dz.transpose();
  }
  mm.hph = symmetrize(mm.hph);
  return mm;
}

UpdateOutput update_with_moments(const SystemModel& model,
                                 const Gaussian& predicted,
                                 const MeasurementMoments& moments,
                                 const Vec& z, const SpdMat& R,
                                 const CkfOptions& opts) {
  const SpdMat pzz = spd_project(moments.hph + R.mat(), opts.spd_floor);

  Eigen::LDLT<Mat> ldlt(pzz.mat());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw SingularInnovationCovariance(
        "update: innovation covariance not invertible");
  }
  // K = Pxz * Pzz^-1, solved as Pzz^T K^T = Pxz^T.
  const Mat gain = ldlt.solve(moments.pxz.transpose()).transpose();

  Vec innovation = z - moments.predicted_z;
  for (int idx : model.angle_components) {
    innovation(idx) = wrap_angle(innovation(idx));
  }

  Mat cov;
  if (opts.joseph_form) {
    cov = predicted.cov.mat() - moments.pxz * gain.transpose() -
          gain * moments.pxz.transpose() +
          gain * pzz.mat() * gain.transpose();
  } else {
    cov = predicted.cov.mat() - gain * pzz.mat() * gain.transpose();
  }

  UpdateOutput out{Gaussian{predicted.mean + gain * innovation,
                            spd_project(cov, opts.spd_floor)},
                   std::move(innovation),
                   moments.predicted_z,
                   pzz,
                   moments.pxz,
                   gain,
                   moments.hph};
  return out;
}

UpdateOutput update(const SystemModel& model, const Gaussian& predicted,
                    const Vec& z, const SpdMat& R, const CkfOptions& opts) {
  return update_with_moments(model, predicted,
                             measurement_moments(model, predicted), z, R,
                             opts);
}

std::pair<Gaussian, UpdateOutput> ckf_step(const SystemModel& model,
                                           const Gaussian& belief,
                                           const Vec& z, const Vec& u,
                                           const SpdMat& Q, const SpdMat& R,
                                           double dt, const CkfOptions& opts) {
  const Gaussian predicted = predict(model, belief, Q, u, dt, opts);
  UpdateOutput out = update(model, predicted, z, R, opts);
  return {out.posterior, std::move(out)};
}

}  // namespace ackf
