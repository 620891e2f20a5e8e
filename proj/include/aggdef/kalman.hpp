#pragma once

#include <optional>

#include "aggdef/types.hpp"

namespace aggdef {

// Constant-velocity kinematic model on R^3:
//   state xi = (position, velocity), transition F = [[I, dt I], [0, I]],
//   input map G = [[0], [dt I]], observation H = [I, 0].
struct KinematicModel {
  double dt = 0.01;
  Mat6 F = Mat6::Identity();
  Mat63 G = Mat63::Zero();
  Mat36 H = Mat36::Zero();
  Mat6 S = Mat6::Zero();  // process covariance
  Mat3 R = Mat3::Zero();  // measurement covariance

  static KinematicModel make(double dt, const Mat6& process_cov, const Mat3& measurement_cov);

  // Process covariance variants: isotropic sigma2 * I6, or the
  // input-driven form G G^T sigma2 (rank 3).
  static Mat6 process_iso(double sigma2);
  static Mat6 process_ggt(double dt, double sigma2);
};

struct FilterState {
  Vec6 xi = Vec6::Zero();
  Mat6 P = Mat6::Zero();
};

// Filtering gain L = P H^T (H P H^T + R)^-1.
Mat63 kf_filter_gain(const Mat6& P, const KinematicModel& m);

// One-step-ahead predictor gain K = F P H^T (H P H^T + R)^-1 = F * L.
// Throws std::runtime_error when the innovation covariance is singular.
Mat63 kf_gain(const Mat6& P, const KinematicModel& m);

// xi <- F xi, P <- F P F^T + S.
FilterState kf_predict(const FilterState& st, const KinematicModel& m);

// Joseph-form correction with the supplied gain:
//   xi <- xi + gain (z - H xi), P <- (I - gain H) P (I - gain H)^T + gain R gain^T.
FilterState kf_correct(const FilterState& st, const Vec3& z, const Mat63& gain,
                       const KinematicModel& m);

// Compact one-step-ahead update with K = kf_gain(P):
//   xi <- (F - K H) xi + K z, P <- (F - K H) P (F - K H)^T + K R K^T + S.
// Algebraically identical to kf_predict(kf_correct(st, z, kf_filter_gain(P))).
FilterState kf_step_compact(const FilterState& st, const Vec3& z, const KinematicModel& m);

// Two block-independent filters sharing the stacked layout
// (intruder block, target block); cross-block covariance is identically zero.
class StackedFilter {
 public:
  StackedFilter() = default;
  StackedFilter(const KinematicModel& model_p, const KinematicModel& model_b,
                const FilterState& init_p, const FilterState& init_b);

  // Compact update of both blocks from the stacked measurement
  // z = (z_p, z_b). Also retains the filtered (posterior) estimate of the
  // measured instant alongside the carried one-step-ahead prediction.
  void step(const Vec6& z);

  // Missing measurement: propagate through the model only.
  void step_predict_only();

  const FilterState& prediction_p() const { return pred_p_; }
  const FilterState& prediction_b() const { return pred_b_; }
  const FilterState& posterior_p() const { return post_p_; }
  const FilterState& posterior_b() const { return post_b_; }
  const KinematicModel& model_p() const { return model_p_; }
  const KinematicModel& model_b() const { return model_b_; }

  Vec6 stacked_prediction() const;

 private:
  KinematicModel model_p_, model_b_;
  FilterState pred_p_, pred_b_;  // carried one-step-ahead state
  FilterState post_p_, post_b_;  // filtered state at the last measured tick
};

// Measurement covariances and dropout probability for one agent's sensor.
struct MeasurementModel {
  Mat3 R_p = Mat3::Zero();
  Mat3 R_b = Mat3::Zero();
  double dropout = 0.0;
};

// Noisy stacked measurement of the true intruder and target positions,
// z = (p + w_p, b + w_b) with w ~ N(0, R). Returns nullopt with probability
// `dropout`, in which case the caller runs a prediction-only step.
std::optional<Vec6> measure(const Vec3& p_true, const Vec3& b_true, const MeasurementModel& mm,
                            RngStream& rng_p, RngStream& rng_b, RngStream& rng_dropout);

// Position components of both block predictions: (p_hat, b_hat).
std::pair<Vec3, Vec3> position_estimate(const StackedFilter& filter);

}  // namespace aggdef
