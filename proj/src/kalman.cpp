#include "aggdef/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace aggdef {

KinematicModel KinematicModel::make(double dt, const Mat6& process_cov,
                                    const Mat3& measurement_cov) {
  if (!(dt > 0.0)) throw std::invalid_argument("KinematicModel: dt must be positive");
  KinematicModel m;
  m.dt = dt;
  m.F.setIdentity();
  m.F.topRightCorner<3, 3>() = dt * Mat3::Identity();
  m.G.setZero();
  m.G.bottomRows<3>() = dt * Mat3::Identity();
  m.H.setZero();
  m.H.leftCols<3>() = Mat3::Identity();
  m.S = process_cov;
  m.R = measurement_cov;
  return m;
}

Mat6 KinematicModel::process_iso(double sigma2) { return sigma2 * Mat6::Identity(); }

Mat6 KinematicModel::process_ggt(double dt, double sigma2) {
  Mat63 g = Mat63::Zero();
  g.bottomRows<3>() = dt * Mat3::Identity();
  return g * g.transpose() * sigma2;
}

Mat63 kf_filter_gain(const Mat6& P, const KinematicModel& m) {
  const Mat3 innovation_cov = m.H * P * m.H.transpose() + m.R;
  Eigen::LDLT<Mat3> solver(innovation_cov);
  if (solver.info() != Eigen::Success || !solver.isPositive()) {
    throw std::runtime_error("kf_filter_gain: singular innovation covariance");
  }
  Mat63 gain = solver.solve((P * m.H.transpose()).transpose()).transpose();
  if (!gain.allFinite()) {
    throw std::runtime_error("kf_filter_gain: non-finite gain");
  }
  return gain;
}

Mat63 kf_gain(const Mat6& P, const KinematicModel& m) { return m.F * kf_filter_gain(P, m); }

FilterState kf_predict(const FilterState& st, const KinematicModel& m) {
  FilterState out;
  out.xi = m.F * st.xi;
  out.P = m.F * st.P * m.F.transpose() + m.S;
  return out;
}

FilterState kf_correct(const FilterState& st, const Vec3& z, const Mat63& gain,
                       const KinematicModel& m) {
  FilterState out;
  out.xi = st.xi + gain * (z - m.H * st.xi);
  const Mat6 closed = Mat6::Identity() - gain * m.H;
  out.P = closed * st.P * closed.transpose() + gain * m.R * gain.transpose();
  return out;
}

FilterState kf_step_compact(const FilterState& st, const Vec3& z, const KinematicModel& m) {
  const Mat63 K = kf_gain(st.P, m);
  const Mat6 closed = m.F - K * m.H;
  FilterState out;
  out.xi = closed * st.xi + K * z;
  out.P = closed * st.P * closed.transpose() + K * m.R * K.transpose() + m.S;
  return out;
}

StackedFilter::StackedFilter(const KinematicModel& model_p, const KinematicModel& model_b,
                             const FilterState& init_p, const FilterState& init_b)
    : model_p_(model_p), model_b_(model_b), pred_p_(init_p), pred_b_(init_b),
      post_p_(init_p), post_b_(init_b) {}

void StackedFilter::step(const Vec6& z) {
  const Vec3 z_p = z.head<3>();
  const Vec3 z_b = z.tail<3>();
  post_p_ = kf_correct(pred_p_, z_p, kf_filter_gain(pred_p_.P, model_p_), model_p_);
  post_b_ = kf_correct(pred_b_, z_b, kf_filter_gain(pred_b_.P, model_b_), model_b_);
  pred_p_ = kf_step_compact(pred_p_, z_p, model_p_);
  pred_b_ = kf_step_compact(pred_b_, z_b, model_b_);
}

void StackedFilter::step_predict_only() {
  post_p_ = pred_p_;
  post_b_ = pred_b_;
  pred_p_ = kf_predict(pred_p_, model_p_);
  pred_b_ = kf_predict(pred_b_, model_b_);
}

Vec6 StackedFilter::stacked_prediction() const {
  Vec6 out;
  out.head<3>() = pred_p_.xi.head<3>();
  out.tail<3>() = pred_b_.xi.head<3>();
  return out;
}

namespace {

Vec3 sample_noise(const Mat3& cov, RngStream& rng) {
  if (cov.isZero(0.0)) return Vec3::Zero();
  Eigen::LLT<Mat3> chol(cov);
  if (chol.info() != Eigen::Success) {
    throw std::runtime_error("measure: measurement covariance is not positive definite");
  }
  return chol.matrixL() * rng.normal3();
}

}  // namespace

std::optional<Vec6> measure(const Vec3& p_true, const Vec3& b_true, const MeasurementModel& mm,
                            RngStream& rng_p, RngStream& rng_b, RngStream& rng_dropout) {
  if (mm.dropout > 0.0 && rng_dropout.uniform() < mm.dropout) {
    return std::nullopt;
  }
  Vec6 z;
  z.head<3>() = p_true + sample_noise(mm.R_p, rng_p);
  z.tail<3>() = b_true + sample_noise(mm.R_b, rng_b);
  return z;
}

std::pair<Vec3, Vec3> position_estimate(const StackedFilter& filter) {
  return {filter.prediction_p().xi.head<3>(), filter.prediction_b().xi.head<3>()};
}

}  // namespace aggdef
