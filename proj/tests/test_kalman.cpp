#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aggdef/kalman.hpp"
#include "test_util.hpp"

using namespace aggdef;

namespace {

KinematicModel model_with(double dt, const Mat6& S, const Mat3& R) {
  return KinematicModel::make(dt, S, R);
}

FilterState random_state(double cov_scale = 1.0) {
  FilterState st;
  for (int i = 0; i < 6; ++i) st.xi(i) = testutil::uniform(-3.0, 3.0);
  st.P = testutil::random_psd<6>(cov_scale);
  return st;
}

}  // namespace

TEST_CASE("transition model has the constant-velocity structure") {
  const auto m = model_with(0.01, Mat6::Zero(), Mat3::Zero());
  FilterState st;
  st.xi << 1, 0, 0, 1, 0, 0;
  const FilterState out = kf_predict(st, m);
  CHECK(out.xi(0) == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(out.xi(1) == 0.0);
  CHECK(out.xi(3) == 1.0);  // velocity unchanged
  CHECK(out.P.isZero(0.0));  // P = 0, S = 0 stays zero
  CHECK(m.G.topRows<3>().isZero(0.0));
  CHECK(m.H * m.G == Mat3::Zero());
}

TEST_CASE("prediction covariance matches a naive dense oracle") {
  const double sigma2 = 10.0;
  const auto m = model_with(0.01, KinematicModel::process_ggt(0.01, sigma2), Mat3::Zero());
  for (int trial = 0; trial < 20; ++trial) {
    const FilterState st = random_state();
    const FilterState out = kf_predict(st, m);
    const Mat6 fp = testutil::naive_product<6, 6, 6>(m.F, st.P);
    const Mat6 expected = testutil::naive_product<6, 6, 6>(fp, Mat6(m.F.transpose())) + m.S;
    CHECK((out.P - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("predictor gain closed forms") {
  const auto m = model_with(0.01, Mat6::Zero(), Mat3::Identity());
  CHECK(kf_gain(Mat6::Zero(), m).isZero(0.0));

  // P = I: innovation covariance is 2 I, so K = F H^T / 2.
  const Mat63 k = kf_gain(Mat6::Identity(), m);
  const Mat63 expected = m.F * m.H.transpose() * 0.5;
  CHECK((k - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("predictor gain matches a direct-inverse oracle") {
  const auto m = model_with(0.01, Mat6::Zero(), Mat3(1e-4 * Mat3::Identity()));
  for (int trial = 0; trial < 50; ++trial) {
    const Mat6 P = testutil::random_psd<6>();
    const Mat63 k = kf_gain(P, m);
    const Mat3 innov = m.H * P * m.H.transpose() + m.R;
    const Mat63 expected = m.F * P * m.H.transpose() * testutil::adjugate_inverse(innov);
    CHECK((k - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("gain factorization K = F L") {
  const auto m = model_with(0.02, Mat6::Zero(), Mat3(1e-3 * Mat3::Identity()));
  for (int trial = 0; trial < 20; ++trial) {
    const Mat6 P = testutil::random_psd<6>();
    CHECK((kf_gain(P, m) - m.F * kf_filter_gain(P, m)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("correction identities") {
  const auto m = model_with(0.01, Mat6::Zero(), Mat3::Identity());
  const FilterState st = random_state();

  const Vec3 consistent = m.H * st.xi;
  const FilterState same = kf_correct(st, consistent, kf_filter_gain(st.P, m), m);
  CHECK((same.xi - st.xi).cwiseAbs().maxCoeff() <= 1e-12);

  const FilterState frozen = kf_correct(st, Vec3(9, 9, 9), Mat63::Zero(), m);
  CHECK(frozen.xi == st.xi);
  CHECK(frozen.P == st.P);
}

TEST_CASE("joseph correction matches a naive dense oracle") {
  const auto m = model_with(0.01, Mat6::Zero(), Mat3(0.3 * Mat3::Identity()));
  for (int trial = 0; trial < 30; ++trial) {
    const FilterState st = random_state();
    const Vec3 z = testutil::random_vec3();
    const Mat63 gain = kf_filter_gain(st.P, m);
    const FilterState out = kf_correct(st, z, gain, m);

    const Mat6 closed = Mat6::Identity() - testutil::naive_product<6, 3, 6>(gain, m.H);
    const Mat6 cpc = testutil::naive_product<6, 6, 6>(
        testutil::naive_product<6, 6, 6>(closed, st.P), Mat6(closed.transpose()));
    const Mat6 krk = testutil::naive_product<6, 3, 6>(
        testutil::naive_product<6, 3, 3>(gain, m.R),
        Eigen::Matrix<double, 3, 6>(gain.transpose()));
    CHECK((out.P - (cpc + krk)).cwiseAbs().maxCoeff() <= 1e-12);

    Vec6 expected_xi = st.xi;
    const Vec3 innovation = z - testutil::naive_product<3, 6, 1>(m.H, st.xi);
    expected_xi += testutil::naive_product<6, 3, 1>(gain, innovation);
    CHECK((out.xi - expected_xi).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scalar correction reproduces the hand-computed posterior") {
  // Only the first coordinate carries uncertainty; the update then reduces to
  // the textbook scalar filter with k = p/(p + r).
  const double p = 2.5, r = 0.5, z = 1.8, x0 = 1.0;
  const auto m = model_with(0.01, Mat6::Zero(), Mat3(r * Mat3::Identity()));
  FilterState st;
  st.xi.setZero();
  st.xi(0) = x0;
  st.P.setZero();
  st.P(0, 0) = p;
  const FilterState out = kf_correct(st, Vec3(z, 0, 0), kf_filter_gain(st.P, m), m);
  const double k = p / (p + r);
  CHECK(out.xi(0) == doctest::Approx(x0 + k * (z - x0)).epsilon(1e-14));
  const double joseph = (1 - k) * p * (1 - k) + k * r * k;
  CHECK(out.P(0, 0) == doctest::Approx(joseph).epsilon(1e-14));
}

TEST_CASE("compact step equals correct-then-predict with the filtering gain") {
  const auto m = model_with(0.01, KinematicModel::process_iso(10.0),
                            Mat3(1e-4 * Mat3::Identity()));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const FilterState st = random_state(testutil::uniform(0.1, 4.0));
    const Vec3 z = testutil::random_vec3();
    const FilterState compact = kf_step_compact(st, z, m);
    const FilterState sequential = kf_predict(kf_correct(st, z, kf_filter_gain(st.P, m), m), m);
    worst = std::max(worst, (compact.xi - sequential.xi).cwiseAbs().maxCoeff());
    worst = std::max(worst, (compact.P - sequential.P).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("joseph covariance stays symmetric positive semidefinite") {
  const auto m = model_with(0.01, KinematicModel::process_ggt(0.01, 1.0),
                            Mat3(1e-4 * Mat3::Identity()));
  FilterState st = random_state();
  for (int step = 0; step < 10000; ++step) {
    st = kf_step_compact(st, testutil::random_vec3(), m);
  }
  CHECK((st.P - st.P.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
  Eigen::SelfAdjointEigenSolver<Mat6> eig(st.P);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("stacked filter converges on a noise-free stream") {
  const auto m = model_with(0.01, KinematicModel::process_ggt(0.01, 1e-6),
                            Mat3(1e-12 * Mat3::Identity()));
  const Vec3 truth_p(1, 2, 3), truth_b(-1, 0, 2);
  FilterState init_p, init_b;
  init_p.xi.head<3>() = truth_p + Vec3(0.5, -0.5, 0.2);
  init_b.xi.head<3>() = truth_b + Vec3(-0.3, 0.4, 0.1);
  init_p.P = Mat6::Identity();
  init_b.P = Mat6::Identity();
  StackedFilter filter(m, m, init_p, init_b);

  double prev_err = 1e300;
  for (int step = 0; step < 200; ++step) {
    Vec6 z;
    z.head<3>() = truth_p;
    z.tail<3>() = truth_b;
    filter.step(z);
    const auto [p_hat, b_hat] = position_estimate(filter);
    const double err = std::max((p_hat - truth_p).norm(), (b_hat - truth_b).norm());
    CHECK(err <= prev_err + 1e-9);
    prev_err = err;
  }
  CHECK(prev_err <= 1e-6);
}

TEST_CASE("prediction-only stream is the pure model rollout") {
  const auto m = model_with(0.05, Mat6::Zero(), Mat3::Identity());
  FilterState init_p, init_b;
  init_p.xi << 1, 0, 0, 0.5, 0, 0;
  init_b.xi << 0, 2, 0, 0, -0.25, 0;
  StackedFilter filter(m, m, init_p, init_b);
  for (int step = 0; step < 40; ++step) filter.step_predict_only();
  Mat6 f_pow = Mat6::Identity();
  for (int step = 0; step < 40; ++step) f_pow = m.F * f_pow;
  CHECK((filter.prediction_p().xi - f_pow * init_p.xi).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((filter.prediction_b().xi - f_pow * init_b.xi).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("constant-velocity tracking beats the raw measurement noise") {
  const double r = 1e-4;
  const double dt = 0.01;
  const auto m = model_with(dt, Mat6::Zero(), Mat3(r * Mat3::Identity()));
  const Vec3 p0(0, 1, 2), v(0.4, -0.2, 0.1);
  RngStream noise(99, 0, 0);

  FilterState init_p;
  init_p.xi.head<3>() = p0;
  init_p.P = Mat6::Identity();
  StackedFilter filter(m, m, init_p, init_p);

  double sq_sum = 0.0;
  int count = 0;
  for (int t = 0; t <= 1000; ++t) {
    const Vec3 truth = p0 + t * dt * v;
    if (t >= 500) {
      const auto [p_hat, b_hat] = position_estimate(filter);
      sq_sum += (p_hat - truth).squaredNorm() / 3.0;
      ++count;
    }
    Vec6 z;
    z.head<3>() = truth + std::sqrt(r) * noise.normal3();
    z.tail<3>() = truth + std::sqrt(r) * noise.normal3();
    filter.step(z);
  }
  const double rmse = std::sqrt(sq_sum / count);
  CHECK(rmse <= std::sqrt(r));
}

TEST_CASE("measurement sampling") {
  const Vec3 p(1, 2, 3), b(0, 0, 1);

  MeasurementModel exact;  // zero covariances
  RngStream a1(1, 0, 0), a2(1, 0, 1), a3(1, 0, 2);
  const auto z_exact = measure(p, b, exact, a1, a2, a3);
  REQUIRE(z_exact.has_value());
  CHECK(z_exact->head<3>() == p);
  CHECK(z_exact->tail<3>() == b);

  MeasurementModel noisy;
  noisy.R_p = 1e-4 * Mat3::Identity();
  noisy.R_b = 1e-4 * Mat3::Identity();
  RngStream b1(7, 3, 0), b2(7, 3, 1), b3(7, 3, 2);
  RngStream c1(7, 3, 0), c2(7, 3, 1), c3(7, 3, 2);
  const auto za = measure(p, b, noisy, b1, b2, b3);
  const auto zb = measure(p, b, noisy, c1, c2, c3);
  CHECK(*za == *zb);  // identical streams reproduce identical draws

  // Empirical covariance of the intruder noise over 1e5 draws.
  Mat3 cov_target;
  cov_target << 4e-4, 1e-4, 0, 1e-4, 2e-4, 0, 0, 0, 1e-4;
  MeasurementModel shaped;
  shaped.R_p = cov_target;
  RngStream d1(11, 0, 0), d2(11, 0, 1), d3(11, 0, 2);
  Mat3 acc = Mat3::Zero();
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const auto z = measure(Vec3::Zero(), Vec3::Zero(), shaped, d1, d2, d3);
    acc += z->head<3>() * z->head<3>().transpose();
  }
  acc /= draws;
  CHECK((acc - cov_target).norm() / cov_target.norm() <= 0.05);

  MeasurementModel flaky = exact;
  flaky.dropout = 0.4;
  RngStream e1(3, 1, 0), e2(3, 1, 1), e3(3, 1, 2);
  int missing = 0;
  for (int k = 0; k < 20000; ++k) {
    if (!measure(p, b, flaky, e1, e2, e3).has_value()) ++missing;
  }
  CHECK(missing / 20000.0 == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("position extraction discards velocities") {
  const auto m = model_with(0.1, Mat6::Zero(), Mat3::Identity());
  FilterState sp, sb;
  sp.xi << 1, 2, 3, 4, 5, 6;
  sb.xi << 7, 8, 9, 0, 0, 0;
  StackedFilter filter(m, m, sp, sb);
  const auto [p_hat, b_hat] = position_estimate(filter);
  CHECK(p_hat == Vec3(1, 2, 3));
  CHECK(b_hat == Vec3(7, 8, 9));

  filter.step_predict_only();
  const auto [p_next, b_next] = position_estimate(filter);
  CHECK((p_next - Vec3(1.4, 2.5, 3.6)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(b_next == Vec3(7, 8, 9));
}
