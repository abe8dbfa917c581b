#ifndef ACKF_ADAPTIVE_HPP_
#define ACKF_ADAPTIVE_HPP_

#include <deque>
#include <vector>

#include "ackf/ckf.hpp"

namespace ackf {

/// Per-epoch quantities kept for the windowed noise estimators.
struct EpochRecord {
  Vec innovation;  // z - zhat(predicted)
  Vec residual;    // z - h(posterior mean), filled after the update
  double variance; // scalar epoch variance driving the weights
  Mat hph;         // centered measurement covariance of that epoch (Pzz - R)
};

/// FIFO ring of the last `capacity` epochs.
class SlidingWindow {
 public:
  explicit SlidingWindow(int capacity);

  void push(EpochRecord rec);
  int size() const { return static_cast<int>(records_.size()); }
  int capacity() const { return capacity_; }
  bool full() const { return size() == capacity_; }
  const EpochRecord& at(int j) const { return records_[j]; }
  EpochRecord& back() { return records_.back(); }
  void clear() { records_.clear(); }

 private:
  int capacity_;
  std::deque<EpochRecord> records_;
};

enum class VarianceMode {
  paper_literal,  // v^T R v / m
  normalized,     // v^T R^-1 v / m
};

enum class WeightScheme {
  /// Unit weight for epochs near the window's median variance, inverse
  /// variance beyond a threshold. Keeps the noise estimators unbiased on
  /// clean data while still suppressing outlier epochs.
  huber,
  /// Raw inverse-variance weights everywhere. Strongly biases the weighted
  /// second moment low (it degenerates into a harmonic mean), kept as an
  /// escape hatch.
  literal,
};

struct AdaptiveConfig {
  int window_size = 30;
  double r_floor = kDefaultSpdFloor;
  double q_floor = kDefaultSpdFloor;
  bool adapt_q = false;
  VarianceMode variance_mode = VarianceMode::paper_literal;
  WeightScheme weight_scheme = WeightScheme::huber;
  double huber_threshold = 9.0;  // in units of the window median variance
  /// Test hook: replace the estimator weights with uniform ones so the
  /// robust estimator degenerates to the plain windowed average.
  bool force_uniform_weights = false;
};

/// Scalar variance of one epoch's innovation, clamped below at 1e-12.
double epoch_variance(const Vec& innovation, const SpdMat& R, int m,
                      VarianceMode mode);

/// Inverse-variance weights, normalized to sum to 1.
std::vector<double> window_weights(const SlidingWindow& window);

/// Variance level past which an epoch counts as an outlier:
/// huber_threshold times the window's median variance.
double robust_cutoff(const SlidingWindow& window, const AdaptiveConfig& cfg);

/// Weights the noise estimators actually consume, per cfg.weight_scheme.
std::vector<double> estimator_weights(const SlidingWindow& window,
                                      const AdaptiveConfig& cfg);

/// (1/L) sum_j v_j v_j^T over the records present.
Mat innovation_cov_plain(const SlidingWindow& window);

/// (1/L) sum_j w_j v_j v_j^T with inverse-variance weights.
Mat innovation_cov_weighted(const SlidingWindow& window);

/// Windowed measurement-noise estimate: weighted innovation second moment
/// minus the window-averaged hph term, floored to stay SPD.
SpdMat estimate_R(const SlidingWindow& window, const AdaptiveConfig& cfg);

/// Windowed process-noise estimate from innovation plus residual second
/// moments minus the measurement-projected prediction bracket. The result
/// lives in measurement space; when the state and measurement dimensions
/// match it is used directly, otherwise the nominal Q is rescaled by the
/// trace ratio against its own projection.
SpdMat estimate_Q(const SlidingWindow& window, const Mat& projected_bracket,
                  const Mat& projected_nominal_q, const SpdMat& nominal_Q,
                  const AdaptiveConfig& cfg);

struct AdaptiveStepOutput {
  Gaussian posterior;
  UpdateOutput update;
  SpdMat adapted_R;  // windowed R estimate for this epoch
  SpdMat next_Q;     // Q to use for the next prediction
  /// Outlier gate applied to R in this epoch's update: 1 for inlier epochs,
  /// variance/cutoff when the epoch lands past the robust cutoff.
  double gate_scale = 1.0;
};

/// IAE-ACKF epoch: windowed innovation covariance with uniform weights
/// replaces R once the window is full.
AdaptiveStepOutput ackf_step(const SystemModel& model, const Gaussian& belief,
                             const Vec& z, const Vec& u, const SpdMat& Q,
                             const SpdMat& nominal_R, SlidingWindow& window,
                             const AdaptiveConfig& cfg, double dt,
                             const CkfOptions& opts = {});

/// CMRACKF epoch: inverse-variance weighted R* estimate, rebuilt Pzz, and
/// optional Q adaptation.
AdaptiveStepOutput cmrackf_step(const SystemModel& model,
                                const Gaussian& belief, const Vec& z,
                                const Vec& u, const SpdMat& Q,
                                const SpdMat& nominal_R, SlidingWindow& window,
                                const AdaptiveConfig& cfg, double dt,
                                const CkfOptions& opts = {});

}  // namespace ackf

#endif  // ACKF_ADAPTIVE_HPP_
