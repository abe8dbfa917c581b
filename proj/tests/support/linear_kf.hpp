#ifndef ACKF_TESTS_LINEAR_KF_HPP_
#define ACKF_TESTS_LINEAR_KF_HPP_

// Textbook linear Kalman filter, written directly from the closed-form
// equations. Used as an independent oracle for the cubature filter on
// linear-Gaussian systems; deliberately shares no code with the library.

#include <Eigen/Dense>
#include <utility>

namespace ackf_test {

struct LinearKf {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd H;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;

  struct Belief {
    Eigen::VectorXd x;
    Eigen::MatrixXd P;
  };

  Belief predict(const Belief& prior) const {
    return Belief{A * prior.x + b, A * prior.P * A.transpose() + Q};
  }

  Belief update(const Belief& predicted, const Eigen::VectorXd& z) const {
    const Eigen::MatrixXd S = H * predicted.P * H.transpose() + R;
    const Eigen::MatrixXd K =
        predicted.P * H.transpose() * S.inverse();
    const Eigen::VectorXd x = predicted.x + K * (z - H * predicted.x);
    const Eigen::MatrixXd I =
        Eigen::MatrixXd::Identity(predicted.P.rows(), predicted.P.cols());
    return Belief{x, (I - K * H) * predicted.P};
  }

  Belief step(const Belief& prior, const Eigen::VectorXd& z) const {
    return update(predict(prior), z);
  }
};

}  // namespace ackf_test

#endif  // ACKF_TESTS_LINEAR_KF_HPP_
