#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geodmp/dmp_position.hpp"
#include "test_helpers.hpp"

using namespace geodmp;
using namespace geodmp::testing;

namespace {

PositionSeries resample_path(const std::vector<Eigen::Vector3d>& path, int n) {
  return arc_length_resample(path, {}, n);
}

double reproduction_rms(const PositionSeries& demo, const PositionSeries& gen) {
  REQUIRE(demo.size() == gen.size());
  double acc = 0.0;
  for (int k = 0; k < demo.size(); ++k) acc += (demo.y[k] - gen.y[k]).squaredNorm();
  return std::sqrt(acc / demo.size());
}

}  // namespace

TEST_CASE("arc_length_resample straight segment") {
  std::vector<Eigen::Vector3d> pts(11);
  for (int k = 0; k < 11; ++k) pts[k] = {k / 10.0, 0.0, 0.0};
  const PositionSeries s = resample_path(pts, 11);
  CHECK(std::abs(s.total_length() - 1.0) < 1e-9);
  CHECK(s.s[0] == 0.0);
}

TEST_CASE("arc_length_resample quarter circle") {
  std::vector<Eigen::Vector3d> pts;
  for (int deg = 0; deg <= 90; ++deg) {
    const double th = deg * M_PI / 180.0;
    pts.push_back({std::cos(th), std::sin(th), 0.0});
  }
  const PositionSeries s = resample_path(pts, 91);
  CHECK(std::abs(s.total_length() - M_PI / 2) < 1e-4);
}

TEST_CASE("arc_length parameterization is unit speed") {
  const auto helix = helix_path(400);
  const PositionSeries s = resample_path(helix, 200);
  for (int k = 1; k + 1 < s.size(); ++k) {
    CHECK(s.y_d[k].norm() == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("arc_length_resample rejects degenerate demos") {
  std::vector<Eigen::Vector3d> constant(10, Eigen::Vector3d(0.3, 0.2, 0.1));
  CHECK_THROWS_AS(resample_path(constant, 10), DegenerateDemoError);
  std::vector<Eigen::Vector3d> one{{0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(resample_path(one, 10), DegenerateDemoError);
}

TEST_CASE("fit_al_dmp rejects coincident start and goal") {
  PositionSeries s;
  s.s.resize(5);
  for (int k = 0; k < 5; ++k) s.s[k] = 0.0;
  s.y.assign(5, Eigen::Vector3d(0.1, 0.1, 0.1));
  s.y_d.assign(5, Eigen::Vector3d::Zero());
  s.y_dd.assign(5, Eigen::Vector3d::Zero());
  CHECK_THROWS_AS(fit_al_dmp(s, 10), DegenerateGoalError);
}

TEST_CASE("AL-DMP reproduces a straight line") {
  std::vector<Eigen::Vector3d> pts(50);
  for (int k = 0; k < 50; ++k) {
    const double p = k / 49.0;
    pts[k] = {0.2 * p, -0.1 * p, 0.05 * p};
  }
  const PositionSeries demo = resample_path(pts, 200);
  const AlDmpModel model = fit_al_dmp(demo, 100);
  const PositionSeries gen = generate_al_dmp(model, model.y0, model.g, 199);
  CHECK(reproduction_rms(demo, gen) < 1e-3 * model.L);
}

TEST_CASE("AL-DMP reproduces a helix with 50 basis functions") {
  const auto helix = helix_path(500);
  const PositionSeries demo = resample_path(helix, 400);
  const AlDmpModel model = fit_al_dmp(demo, 50);
  const PositionSeries gen = generate_al_dmp(model, model.y0, model.g, 399);
  CHECK(reproduction_rms(demo, gen) < 1e-2 * model.L);
}

TEST_CASE("generate_al_dmp holds the equilibrium with zero forcing") {
  AlDmpModel model;
  model.L = 1.0;
  model.y0 = {0.0, 0.0, 0.0};
  model.g = {1.0, 0.0, 0.0};
  model.scale = {1.0, kGoalEps, kGoalEps};
  model.y_d0 = {1.0, 0.0, 0.0};
  model.basis = GaussianBasis::phase_spaced(10, model.gains.alpha_x);
  model.weights = Eigen::MatrixXd::Zero(10, 3);
  const Eigen::Vector3d start(0.4, 0.5, 0.6);
  const PositionSeries gen = generate_al_dmp(model, start, start, 500);
  for (const auto& y : gen.y) CHECK((y - start).norm() < 1e-6);
}

TEST_CASE("generate_al_dmp converges to a translated goal") {
  std::vector<Eigen::Vector3d> line(50);
  for (int k = 0; k < 50; ++k) {
    const double p = k / 49.0;
    line[k] = {0.2 * p, -0.1 * p, 0.05 * p};
  }
  const PositionSeries demo = resample_path(line, 200);
  const AlDmpModel model = fit_al_dmp(demo, 50);
  const Eigen::Vector3d g_new = model.g + Eigen::Vector3d(0.05, -0.03, 0.02);
  AlDmpGenOptions opts;
  opts.s_total = 1.5 * model.L;
  const PositionSeries gen = generate_al_dmp(model, model.y0, g_new, 1500, opts);
  CHECK((gen.y.back() - g_new).norm() < 1e-3 * (g_new - model.y0).norm());

  // A looping demo ends at full transverse speed; the momentum transient
  // needs another half length before the same bound holds.
  const auto helix = helix_path(300);
  const PositionSeries hdemo = resample_path(helix, 200);
  const AlDmpModel hmodel = fit_al_dmp(hdemo, 30);
  const Eigen::Vector3d hg_new = hmodel.g + Eigen::Vector3d(0.05, -0.03, 0.02);
  AlDmpGenOptions hopts;
  hopts.s_total = 2.0 * hmodel.L;
  const PositionSeries hgen = generate_al_dmp(hmodel, hmodel.y0, hg_new, 2000, hopts);
  CHECK((hgen.y.back() - hg_new).norm() < 1e-3 * (hg_new - hmodel.y0).norm());
}

TEST_CASE("phase closed form matches the integrated canonical system") {
  const auto helix = helix_path(100);
  const PositionSeries demo = resample_path(helix, 100);
  const AlDmpModel model = fit_al_dmp(demo, 10);
  const int n = 1000;
  const double ds = model.L / n;
  double x_int = 1.0;
  const double decay = std::exp(-model.gains.alpha_x * ds / model.L);
  for (int k = 0; k <= n; ++k) {
    const double x_closed = std::exp(-model.gains.alpha_x * (ds * k) / model.L);
    CHECK(std::abs(x_closed - x_int) < 1e-6);
    x_int *= decay;  // exact step of L x' = -alpha_x x
  }
}

TEST_CASE("goal convergence is monotone once forcing is cut") {
  const auto helix = helix_path(300);
  const PositionSeries demo = resample_path(helix, 200);
  const AlDmpModel model = fit_al_dmp(demo, 30);
  AlDmpGenOptions opts;
  opts.s_total = 4.0 * model.L;
  opts.forcing_cutoff_s = model.L;
  const PositionSeries gen = generate_al_dmp(model, model.y0, model.g, 4000, opts);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < gen.size(); ++k) {
    if (gen.s[k] < 2.0 * model.L) continue;
    const double err = (gen.y[k] - model.g).norm();
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("re-timing a demo leaves the AL-DMP path unchanged") {
  const auto uniform = helix_path(400);
  const auto warped = helix_path(400, 1.5, 0.1, 0.05, quadratic_warp);
  const PositionSeries demo_u = resample_path(uniform, 200);
  const PositionSeries demo_w = resample_path(warped, 200);
  const AlDmpModel mu = fit_al_dmp(demo_u, 30);
  const AlDmpModel mw = fit_al_dmp(demo_w, 30);
  const PositionSeries gu = generate_al_dmp(mu, mu.y0, mu.g, 400);
  const PositionSeries gw = generate_al_dmp(mw, mw.y0, mw.g, 400);
  CHECK(discrete_frechet(gu.y, gw.y) < 1e-3 * mu.L);
}

TEST_CASE("scale covariance on an axis-aligned demo") {
  // S-shaped profile along x with per-dimension amplitude structure.
  std::vector<Eigen::Vector3d> pts(200);
  for (int k = 0; k < 200; ++k) {
    const double p = k / 199.0;
    pts[k] = {0.3 * p, 0.08 * std::sin(M_PI * p) + 0.1 * p, 0.05 * p * p};
  }
  const PositionSeries demo = resample_path(pts, 200);
  const AlDmpModel model = fit_al_dmp(demo, 40);

  const double c = 1.7;
  const Eigen::Vector3d g_scaled = model.y0 + c * (model.g - model.y0);
  const PositionSeries base = generate_al_dmp(model, model.y0, model.g, 500);
  const PositionSeries scaled = generate_al_dmp(model, model.y0, g_scaled, 500);
  for (int k = 0; k < base.size(); ++k) {
    const Eigen::Vector3d expect = model.y0 + c * (base.y[k] - model.y0);
    CHECK((scaled.y[k] - expect).norm() < 1e-9);
  }
}

TEST_CASE("classical DMP reproduces its training demo") {
  const auto helix = helix_path(300);
  std::vector<double> t(helix.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 2.0 * k / (t.size() - 1);
  const ClassicalDmpModel model = fit_classical_dmp(helix, t, 80);

  double path_len = 0.0;
  for (std::size_t k = 1; k < helix.size(); ++k) path_len += (helix[k] - helix[k - 1]).norm();

  const double dt = model.tau / (helix.size() - 1);
  const auto gen = generate_classical_dmp(model, model.y0, model.g, dt,
                                          static_cast<int>(helix.size()) - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < helix.size(); ++k) acc += (gen[k] - helix[k]).squaredNorm();
  CHECK(std::sqrt(acc / helix.size()) < 1e-2 * path_len);
}

TEST_CASE("time warp distorts the classical path but not the AL path") {
  const int n = 400;
  const auto path_u = helix_path(n);
  const auto path_w = helix_path(n, 1.5, 0.1, 0.05, quadratic_warp);
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = 2.0 * k / (n - 1.0);

  // The same wall-clock grid lands on different geometry after the warp.
  const ClassicalDmpModel cu = fit_classical_dmp(path_u, t, 30);
  const ClassicalDmpModel cw = fit_classical_dmp(path_w, t, 30);
  const double dt = cu.tau / (n - 1);
  const auto gen_cu = generate_classical_dmp(cu, cu.y0, cu.g, dt, n - 1);
  const auto gen_cw = generate_classical_dmp(cw, cw.y0, cw.g, dt, n - 1);

  const AlDmpModel au = fit_al_dmp(resample_path(path_u, 200), 30);
  const AlDmpModel aw = fit_al_dmp(resample_path(path_w, 200), 30);
  const PositionSeries gen_au = generate_al_dmp(au, au.y0, au.g, 400);
  const PositionSeries gen_aw = generate_al_dmp(aw, aw.y0, aw.g, 400);

  const double d_al = discrete_frechet(gen_au.y, gen_aw.y);
  const double d_classical = discrete_frechet(gen_cu, gen_cw);
  CHECK(d_al < 1e-3 * au.L);
  CHECK(d_classical > 10.0 * d_al);
}

TEST_CASE("classical fit rejects a zero-length demo") {
  std::vector<Eigen::Vector3d> constant(10, Eigen::Vector3d(0.1, 0.2, 0.3));
  std::vector<double> t(10);
  for (int k = 0; k < 10; ++k) t[k] = 0.1 * k;
  CHECK_THROWS_AS(fit_classical_dmp(constant, t, 10), DegenerateDemoError);
}
