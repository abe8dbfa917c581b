#ifndef ACKF_MODELS_HPP_
#define ACKF_MODELS_HPP_

#include <functional>
#include <stdexcept>
#include <vector>

#include "ackf/numerics.hpp"

namespace ackf {

struct SensorCoincidence : std::runtime_error {
  explicit SensorCoincidence(const std::string& what)
      : std::runtime_error(what) {}
};

/// Nonlinear state-space model: x_k = f(x_{k-1}, u_{k-1}) + w,
/// z_k = h(x_k) + v.
struct SystemModel {
  int state_dim = 0;
  int meas_dim = 0;
  std::function<Vec(const Vec& x, const Vec& u, double dt)> process;
  std::function<Vec(const Vec& x)> measure;
  /// Measurement components that are angles; their innovations are wrapped
  /// into (-pi, pi].
  std::vector<int> angle_components;
};

struct NoiseSpec {
  SpdMat Q;  // process noise, state_dim x state_dim
  SpdMat R;  // measurement noise, meas_dim x meas_dim
};

/// Ballistic-style planar target with drag/lift terms and a fixed
/// range/bearing sensor. State is (x1, x2, x3, x4) with (x1, x3) the
/// position pair seen by the sensor.
struct TargetScenario {
  double Ts = 0.1;    // step size, s
  double kx = 0.01;   // drag coefficient, 1/m
  double ky = 0.01;   // lift coefficient, 1/m
  double g = 9.81;    // gravity, m/s^2
  double sx = -100.0; // sensor position, m
  double sy = 300.0;
  Vec x0 = (Vec(4) << 0.0, 0.0, -31.3, 0.0).finished();
  int steps = 400;
};

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

/// One noise-free step of the target dynamics.
Vec target_process(const Vec& x, const TargetScenario& sc);

/// Range (m) and bearing (rad, in (-pi, pi]) from the sensor to the target.
/// Throws SensorCoincidence when the target sits exactly on the sensor.
Vec target_measure(const Vec& x, const TargetScenario& sc);

SystemModel make_target_model(const TargetScenario& sc);

}  // namespace ackf

#endif  // ACKF_MODELS_HPP_
