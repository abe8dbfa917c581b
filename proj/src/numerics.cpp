#include "ackf/numerics.hpp"

#include <cmath>

namespace ackf {

namespace {

bool is_symmetric(const Mat& m, double rel_tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace

SpdMat::SpdMat(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw NotPositiveDefinite("SpdMat: matrix is not square");
  }
  if (!m_.allFinite()) {
    throw NotPositiveDefinite("SpdMat: matrix has non-finite entries");
  }
  if (!is_symmetric(m_, 1e-10)) {
    throw NotPositiveDefinite("SpdMat: matrix is not symmetric");
  }
  Eigen::LLT<Mat> llt(m_);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("SpdMat: Cholesky factorization failed");
  }
}

Mat cholesky_factor(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw NotPositiveDefinite("cholesky_factor: matrix is not square");
  }
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_factor: matrix is not positive definite");
  }
  return llt.matrixL();
}

Mat cholesky_factor(const SpdMat& m) { return cholesky_factor(m.mat()); }

Mat symmetrize(const Mat& m) {
  return 0.5 * (m + m.transpose());
}

SpdMat spd_project(const Mat& m, double floor) {
  Mat sym = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_project: eigendecomposition failed");
  }
  if (eig.eigenvalues().minCoeff() >= floor) {
    return SpdMat(sym);
  }
  Vec clamped = eig.eigenvalues().cwiseMax(floor);
  Mat repaired = eig.eigenvectors() * clamped.asDiagonal() *
                 eig.eigenvectors().transpose();
  return SpdMat(symmetrize(repaired));
}

Mat weighted_outer_sum(const std::vector<Vec>& vectors,
                       const std::vector<double>& weights) {
  if (vectors.empty() || vectors.size() != weights.size()) {
    throw LengthMismatch("weighted_outer_sum: list lengths differ or empty");
  }
  const Eigen::Index n = vectors.front().size();
  Mat sum = Mat::Zero(n, n);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) {
      throw LengthMismatch("weighted_outer_sum: vector length mismatch");
    }
    sum.noalias() += weights[j] * vectors[j] * vectors[j].transpose();
  }
  return sum;
}

}  // namespace ackf
