#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geodmp/dmp_orientation.hpp"
#include "test_helpers.hpp"

using namespace geodmp;
using namespace geodmp::testing;

namespace {

double roundtrip_max_error(const std::vector<UnitQuaternion>& demo, int n_basis) {
  const OrientationSeries series = estimate_orientation_series(demo);
  const GeoDmpModel model = fit_geo_dmp(series, n_basis);
  const OrientationSeries gen = generate_geo_dmp(model, model.q0, model.qg, 1000);
  double worst = 0.0;
  for (int k = 0; k < gen.size(); ++k) {
    const UnitQuaternion ref = series.at_geodesic(gen.g_cum[k]);
    worst = std::max(worst, quat_distance(gen.q[k], ref));
  }
  return worst;
}

}  // namespace

TEST_CASE("estimate_orientation_series on a single-axis sweep") {
  const Eigen::Vector3d axis(0.0, 0.0, 1.0);
  const auto demo = axis_sweep(60, axis, M_PI / 2);
  const OrientationSeries s = estimate_orientation_series(demo);
  CHECK(s.total_length() == doctest::Approx(M_PI / 2).epsilon(1e-9));
  for (int k = 0; k + 1 < s.size(); ++k) {
    CHECK((s.eta[k] - axis).norm() < 1e-6);
    CHECK(s.eta_d[k].norm() < 1e-6);
  }
  CHECK(s.g_cum[0] == 0.0);
}

TEST_CASE("eta has unit norm at interior samples") {
  const auto demo = compound_rotation(150);
  const OrientationSeries s = estimate_orientation_series(demo);
  for (int k = 1; k + 1 < s.size(); ++k) {
    CHECK(s.eta[k].norm() == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("constant-orientation demo is degenerate") {
  std::mt19937_64 rng(5);
  const UnitQuaternion q = random_unit_quaternion(rng);
  const std::vector<UnitQuaternion> demo(20, q);
  CHECK_THROWS_AS(estimate_orientation_series(demo), DegenerateDemoError);
}

TEST_CASE("stationary segments are merged before differentiation") {
  auto demo = axis_sweep(30, {1.0, 0.0, 0.0}, 1.0);
  demo.insert(demo.begin() + 15, 5, demo[15]);
  const OrientationSeries s = estimate_orientation_series(demo);
  CHECK(s.size() == 30);
  for (const auto& e : s.eta) CHECK(std::isfinite(e.norm()));
}

TEST_CASE("fit_geo_dmp rejects coincident boundaries on a moving demo") {
  // Closed loop: rotate out and back.
  std::vector<UnitQuaternion> loop;
  for (int k = 0; k <= 40; ++k) {
    const double p = k / 40.0;
    loop.push_back(UnitQuaternion::from_axis_angle({1, 0, 0}, 0.8 * std::sin(M_PI * p)));
  }
  const OrientationSeries s = estimate_orientation_series(loop);
  CHECK_THROWS_AS(fit_geo_dmp(s, 20), DegenerateGoalError);
}

TEST_CASE("Geo-DMP reproduces a single-axis 90 degree demo") {
  const auto demo = axis_sweep(30, {0.0, 0.0, 1.0}, M_PI / 2);
  CHECK(roundtrip_max_error(demo, 30) < 0.02);
}

TEST_CASE("Geo-DMP reproduces a compound 3-axis demo") {
  const auto demo = compound_rotation(200);
  CHECK(roundtrip_max_error(demo, 30) < 0.05);
}

TEST_CASE("pure geodesic demo fits better than a compound one") {
  const double geo_err = roundtrip_max_error(axis_sweep(100, {0, 1, 0}, 1.2), 30);
  const double compound_err = roundtrip_max_error(compound_rotation(100), 30);
  CHECK(geo_err < compound_err);
}

TEST_CASE("generate_geo_dmp holds the equilibrium with zero weights") {
  GeoDmpModel model;
  model.L = 1.0;
  model.q0 = UnitQuaternion::identity();
  model.qg = UnitQuaternion::from_axis_angle({0, 0, 1}, 1.0);
  model.scale = quat_log(quat_mul(model.qg, quat_conj(model.q0)));
  model.eta0 = {0.0, 0.0, 1.0};
  model.basis = GaussianBasis::phase_spaced(10, model.gains.alpha_x);
  model.weights = Eigen::MatrixXd::Zero(10, 3);
  std::mt19937_64 rng(9);
  const UnitQuaternion start = random_unit_quaternion(rng);
  const OrientationSeries gen = generate_geo_dmp(model, start, start, 400);
  for (const auto& q : gen.q) CHECK(quat_distance(q, start) < 1e-9);
}

TEST_CASE("generated orientations stay unit norm") {
  const auto demo = compound_rotation(150);
  const OrientationSeries series = estimate_orientation_series(demo);
  const GeoDmpModel model = fit_geo_dmp(series, 25);
  const OrientationSeries gen = generate_geo_dmp(model, model.q0, model.qg, 500);
  for (const auto& q : gen.q) CHECK(std::abs(q.norm() - 1.0) < 1e-9);
}

TEST_CASE("rotated task is generated as the rotated demo") {
  // Single-axis demo; r about the same axis commutes with everything.
  const Eigen::Vector3d axis(0.0, 0.0, 1.0);
  const auto demo = axis_sweep(50, axis, M_PI / 2);
  const OrientationSeries series = estimate_orientation_series(demo);
  const GeoDmpModel model = fit_geo_dmp(series, 25);

  const UnitQuaternion r = UnitQuaternion::from_axis_angle(axis, 0.7);
  const OrientationSeries base = generate_geo_dmp(model, model.q0, model.qg, 400);
  const OrientationSeries rotated = generate_geo_dmp(model, quat_mul(r, model.q0),
                                                     quat_mul(r, model.qg), 400);
  for (int k = 0; k < base.size(); ++k) {
    CHECK(quat_distance(rotated.q[k], quat_mul(r, base.q[k])) < 1e-6);
  }
}

TEST_CASE("phase closed form matches the integrated canonical system") {
  const auto demo = axis_sweep(50, {1, 0, 0}, 1.0);
  const OrientationSeries series = estimate_orientation_series(demo);
  const GeoDmpModel model = fit_geo_dmp(series, 10);
  const OrientationSeries gen = generate_geo_dmp(model, model.q0, model.qg, 1000);
  double x_int = 1.0;
  const double decay = std::exp(-model.gains.alpha_x * (model.L / 1000) / model.L);
  for (int k = 0; k < gen.size(); ++k) {
    CHECK(std::abs(gen.phase[k] - x_int) < 1e-6);
    x_int *= decay;
  }
}

TEST_CASE("generated eta stays near unit speed over the mid 80 percent") {
  const auto demo = compound_rotation(200);
  const OrientationSeries series = estimate_orientation_series(demo);
  const GeoDmpModel model = fit_geo_dmp(series, 30);
  const OrientationSeries gen = generate_geo_dmp(model, model.q0, model.qg, 1000);
  for (int k = 0; k < gen.size(); ++k) {
    const double progress = gen.g_cum[k] / model.L;
    if (progress < 0.1 || progress > 0.9) continue;
    CHECK(gen.eta[k].norm() > 0.9);
    CHECK(gen.eta[k].norm() < 1.1);
  }
}

TEST_CASE("geodesic-domain fit ignores demo reparameterization") {
  const auto uniform = compound_rotation(300);
  const auto warped = compound_rotation(300, quadratic_warp);
  const GeoDmpModel mu = fit_geo_dmp(estimate_orientation_series(uniform), 30);
  const GeoDmpModel mw = fit_geo_dmp(estimate_orientation_series(warped), 30);
  const OrientationSeries gu = generate_geo_dmp(mu, mu.q0, mu.qg, 500);
  const OrientationSeries gw = generate_geo_dmp(mw, mw.q0, mw.qg, 500);
  CHECK(max_geodesic_deviation(gu.q, gw.q) < 1e-3);
}

TEST_CASE("time_playback basics") {
  const auto demo = axis_sweep(100, {0, 1, 0}, 1.3);
  const OrientationSeries series = estimate_orientation_series(demo);
  const double L = series.total_length();

  // Constant rate = L traverses in one second with uniform stamps.
  const auto played = time_playback(series, [L](double) { return L; }, 0.01);
  CHECK(played.back().first == doctest::Approx(1.0).epsilon(0.02));
  for (std::size_t k = 1; k < played.size(); ++k) {
    CHECK(played[k].first - played[k - 1].first == doctest::Approx(0.01));
  }

  // Two profiles trace the same geometric path.
  const auto ramp = time_playback(
      series, [L](double g) { return L * (0.25 + 1.5 * g / L); }, 0.002);
  std::vector<UnitQuaternion> qa, qb;
  for (const auto& [t, q] : played) qa.push_back(q);
  for (const auto& [t, q] : ramp) qb.push_back(q);
  CHECK(max_geodesic_deviation(qa, qb) < 1e-6);

  CHECK_THROWS_AS(time_playback(series, [](double) { return 0.0; }, 0.01),
                  InvalidSpeedError);
}

TEST_CASE("time-based baseline reproduces its training demo") {
  const auto demo = compound_rotation(200);
  std::vector<double> t(demo.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 3.0 * k / (t.size() - 1);
  const TimeQuatDmpModel model = fit_time_quat_dmp(demo, t, 30);
  const double dt = model.tau / (demo.size() - 1);
  const auto gen = generate_time_quat_dmp(model, model.q0, model.qg, dt,
                                          static_cast<int>(demo.size()) - 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < demo.size(); ++k) {
    worst = std::max(worst, quat_distance(gen[k], demo[k]));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("warped demo hurts the time-based baseline more than the Geo-DMP") {
  // Quadratic time warp: identical point set, warped clock. The geodesic
  // fit never reads timestamps; the baseline differentiates against them.
  const int n = 200;
  const auto true_path = compound_rotation(400);
  const auto demo = compound_rotation(n);
  std::vector<double> t_warp(n);
  for (int k = 0; k < n; ++k) {
    const double p = k / (n - 1.0);
    t_warp[k] = 3.0 * p * p;
  }

  const GeoDmpModel geo = fit_geo_dmp(estimate_orientation_series(demo), 30);
  const OrientationSeries geo_gen = generate_geo_dmp(geo, geo.q0, geo.qg, 500);
  const double geo_err = max_geodesic_deviation(geo_gen.q, true_path);

  const TimeQuatDmpModel base = fit_time_quat_dmp(demo, t_warp, 30);
  const auto base_gen = generate_time_quat_dmp(base, base.q0, base.qg,
                                               base.tau / 500, 500);
  const double base_err = max_geodesic_deviation(base_gen, true_path);

  CHECK(geo_err < base_err);
  CHECK(geo_err < 5e-2);
}

TEST_CASE("baseline rejects an identity demo") {
  const std::vector<UnitQuaternion> demo(20, UnitQuaternion::identity());
  std::vector<double> t(20);
  for (int k = 0; k < 20; ++k) t[k] = 0.1 * k;
  CHECK_THROWS_AS(fit_time_quat_dmp(demo, t, 10), DegenerateDemoError);
}

TEST_CASE("terminal error stays bounded for both variants") {
  // The geodesic-domain system still moves at the horizon, so its terminal
  // error may exceed the time-based baseline's; only boundedness is asserted.
  const auto demo = compound_rotation(200);
  std::vector<double> t(demo.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 2.0 * k / (t.size() - 1);

  const GeoDmpModel geo = fit_geo_dmp(estimate_orientation_series(demo), 30);
  const OrientationSeries geo_gen = generate_geo_dmp(geo, geo.q0, geo.qg, 500);
  const double geo_terminal = quat_distance(geo_gen.q.back(), geo.qg);

  const TimeQuatDmpModel base = fit_time_quat_dmp(demo, t, 30);
  const auto base_gen = generate_time_quat_dmp(base, base.q0, base.qg, base.tau / 500, 500);
  const double base_terminal = quat_distance(base_gen.back(), base.qg);

  CHECK(std::isfinite(geo_terminal));
  CHECK(std::isfinite(base_terminal));
  CHECK(geo_terminal < 0.1);
}
