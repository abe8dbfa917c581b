#ifndef ACKF_NUMERICS_HPP_
#define ACKF_NUMERICS_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace ackf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what)
      : std::runtime_error(what) {}
};

struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what)
      : std::runtime_error(what) {}
};

/// Square matrix that is symmetric and admits a Cholesky factorization.
/// Construction validates; use spd_project() to repair an indefinite matrix.
class SpdMat {
 public:
  explicit SpdMat(Mat m);

  const Mat& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  double operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

 private:
  Mat m_;
};

/// Lower-triangular S with m = S * S^T. Throws NotPositiveDefinite.
Mat cholesky_factor(const Mat& m);
Mat cholesky_factor(const SpdMat& m);

/// (m + m^T) / 2
Mat symmetrize(const Mat& m);

/// Symmetrize and clamp eigenvalues below `floor` up to `floor`.
/// Total on square matrices; the result always satisfies SpdMat.
SpdMat spd_project(const Mat& m, double floor);

/// sum_j weights[j] * v_j * v_j^T
Mat weighted_outer_sum(const std::vector<Vec>& vectors,
                       const std::vector<double>& weights);

inline constexpr double kDefaultSpdFloor = 1e-9;

}  // namespace ackf

#endif  // ACKF_NUMERICS_HPP_
