#ifndef ACKF_CKF_HPP_
#define ACKF_CKF_HPP_

#include <utility>

#include "ackf/models.hpp"
#include "ackf/numerics.hpp"

namespace ackf {

struct SingularInnovationCovariance : std::runtime_error {
  explicit SingularInnovationCovariance(const std::string& what)
      : std::runtime_error(what) {}
};

struct Gaussian {
  Vec mean;
  SpdMat cov;
};

/// 2L cubature points with uniform weight 1/(2L); one point per column.
struct CubatureSet {
  Mat points;
  double weight;
};

struct UpdateOutput {
  Gaussian posterior;
  Vec innovation;   // z - zhat, angle components wrapped
  Vec predicted_z;  // cubature mean of the propagated measurement points
  SpdMat pzz;       // innovation covariance used for the gain
  Mat pxz;
  Mat gain;
  Mat hph;  // centered measurement covariance, i.e. pzz - R
};

struct CkfOptions {
  double spd_floor = kDefaultSpdFloor;
  /// Symmetric four-term covariance update instead of P- - K Pzz K^T.
  bool joseph_form = false;
};

CubatureSet cubature_points(const Gaussian& belief);

/// Cubature moments of the measurement prediction: zhat, the centered
/// measurement covariance (without R) and the state/measurement cross
/// covariance.
struct MeasurementMoments {
  Vec predicted_z;
  Mat hph;
  Mat pxz;
};

MeasurementMoments measurement_moments(const SystemModel& model,
                                       const Gaussian& predicted);

Gaussian predict(const SystemModel& model, const Gaussian& belief,
                 const SpdMat& Q, const Vec& u, double dt,
                 const CkfOptions& opts = {});

/// Measurement update with externally supplied moments and noise covariance.
/// The adaptive filters reuse this with an adapted R.
UpdateOutput update_with_moments(const SystemModel& model,
                                 const Gaussian& predicted,
                                 const MeasurementMoments& moments,
                                 const Vec& z, const SpdMat& R,
                                 const CkfOptions& opts = {});

UpdateOutput update(const SystemModel& model, const Gaussian& predicted,
                    const Vec& z, const SpdMat& R,
                    const CkfOptions& opts = {});

std::pair<Gaussian, UpdateOutput> ckf_step(const SystemModel& model,
                                           const Gaussian& belief,
                                           const Vec& z, const Vec& u,
                                           const SpdMat& Q, const SpdMat& R,
                                           double dt,
                                           const CkfOptions& opts = {});

}  // namespace ackf

#endif  // ACKF_CKF_HPP_
