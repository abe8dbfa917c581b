#include "ackf/models.hpp"

#include <cmath>

namespace ackf {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) {
    a += 2.0 * M_PI;
  } else if (a > M_PI) {
    a -= 2.0 * M_PI;
  }
  return a;
}

Vec target_process(const Vec& x, const TargetScenario& sc) {
  Vec out(4);
  out(0) = x(0) + sc.Ts * x(2);
  out(1) = x(1) + sc.Ts * (-sc.kx * x(2) * x(2));
  out(2) = x(2) + sc.Ts * x(3);
  out(3) = x(3) + sc.Ts * (sc.ky * x(2) * x(2) - sc.g);
  return out;
}

Vec target_measure(const Vec& x, const TargetScenario& sc) {
  const double dx = x(0) - sc.sx;
  const double dy = x(2) - sc.sy;
  if (dx == 0.0 && dy == 0.0) {
    throw SensorCoincidence("target_measure: target at sensor position");
  }
  Vec z(2);
  z(0) = std::hypot(dx, dy);
  z(1) = std::atan2(dy, dx);
  return z;
}

SystemModel make_target_model(const TargetScenario& sc) {
  SystemModel model;
  model.state_dim = 4;
  model.meas_dim = 2;
  model.process = [sc](const Vec& x, const Vec& /*u*/, double /*dt*/) {
    return target_process(x, sc);
  };
  model.measure = [sc](const Vec& x) { return target_measure(x, sc); };
  model.angle_components = {1};
  return model;
}

}  // namespace ackf
