#include "geodmp/dmp_orientation.hpp"

#include <algorithm>
#include <cmath>

namespace geodmp {

namespace {

Eigen::Vector3d regularize_ori_scale(const Eigen::Vector3d& a) {
  Eigen::Vector3d s = a;
  for (int d = 0; d < 3; ++d) {
    if (std::abs(s[d]) < kOriGoalEps) s[d] = (s[d] < 0.0 ? -kOriGoalEps : kOriGoalEps);
  }
  return s;
}

// Mirrors the position-DMP rule: tangent dimensions with a degenerate
// training span keep the training scale instead of amplifying the clamped
// weights by new_span / eps.
void new_task_scaling(const Eigen::Vector3d& train_diff, const Eigen::Vector3d& train_scale,
                      const Eigen::Vector3d& new_diff, Eigen::Vector3d& scale_new,
                      Eigen::Vector3d& ratio) {
  for (int d = 0; d < 3; ++d) {
    if (std::abs(train_diff[d]) < kOriGoalEps) {
      scale_new[d] = train_scale[d];
      ratio[d] = 1.0;
    } else {
      scale_new[d] = std::abs(new_diff[d]) < kOriGoalEps
                         ? (new_diff[d] < 0.0 ? -kOriGoalEps : kOriGoalEps)
                         : new_diff[d];
      ratio[d] = new_diff[d] / train_scale[d];
    }
  }
}

void differentiate_vec3(const Eigen::VectorXd& t, const std::vector<Eigen::Vector3d>& v,
                        std::vector<Eigen::Vector3d>& dv) {
  const int n = static_cast<int>(v.size());
  dv.assign(n, Eigen::Vector3d::Zero());
  if (n < 2) return;
  dv[0] = (v[1] - v[0]) / (t[1] - t[0]);
  dv[n - 1] = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
  for (int k = 1; k + 1 < n; ++k) {
    dv[k] = (v[k + 1] - v[k - 1]) / (t[k + 1] - t[k - 1]);
  }
}

}  // namespace

UnitQuaternion OrientationSeries::at_geodesic(double g) const {
  if (q.empty()) throw EmptySequenceError("empty orientation series");
  if (g <= g_cum[0]) return q.front();
  if (g >= g_cum[g_cum.size() - 1]) return q.back();
  int lo = 0;
  int hi = static_cast<int>(g_cum.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (g_cum[mid] <= g ? lo : hi) = mid;
  }
  const double dg = g_cum[hi] - g_cum[lo];
  const double a = dg > 0.0 ? (g - g_cum[lo]) / dg : 0.0;
  return slerp(q[lo], q[hi], a);
}

OrientationSeries estimate_orientation_series(std::span<const UnitQuaternion> qs,
                                              double eps_step, double eps_total) {
  std::vector<UnitQuaternion> cont(qs.begin(), qs.end());
  make_sign_continuous(cont);

  // Merge stationary steps; eta = omega / g_dot is unbounded across them.
  std::vector<UnitQuaternion> merged;
  merged.reserve(cont.size());
  for (const auto& qk : cont) {
    if (merged.empty() || quat_distance(merged.back(), qk) >= eps_step) merged.push_back(qk);
  }
  if (merged.size() < 3) throw DegenerateDemoError("fewer than 3 distinct orientations");

  OrientationSeries out;
  const int n = static_cast<int>(merged.size());
  out.q = std::move(merged);
  out.g_cum.resize(n);
  out.g_cum[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    out.g_cum[k] = out.g_cum[k - 1] + quat_distance(out.q[k - 1], out.q[k]);
  }
  if (out.total_length() < eps_total)
    throw DegenerateDemoError("total geodesic length below threshold");

  out.eta.resize(n);
  for (int k = 0; k + 1 < n; ++k) {
    const double dg = out.g_cum[k + 1] - out.g_cum[k];
    out.eta[k] = 2.0 * quat_log(quat_mul(out.q[k + 1], quat_conj(out.q[k]))) / dg;
  }
  out.eta[n - 1] = out.eta[n - 2];
  differentiate_vec3(out.g_cum, out.eta, out.eta_d);
  return out;
}

std::vector<UnitQuaternion> resample_uniform_geodesic(std::span<const UnitQuaternion> qs,
                                                      int n) {
  if (n < 2) throw InvalidParamsError("need at least 2 resampled orientations");
  std::vector<UnitQuaternion> cont(qs.begin(), qs.end());
  make_sign_continuous(cont);
  const GeodesicLength gl = geodesic_length_series(cont);

  std::vector<UnitQuaternion> out(n);
  int seg = 0;
  const int m = static_cast<int>(cont.size());
  for (int k = 0; k < n; ++k) {
    const double g = gl.total * static_cast<double>(k) / (n - 1);
    while (seg + 2 < m && gl.cumulative[seg + 1] < g) ++seg;
    const double dg = gl.cumulative[seg + 1] - gl.cumulative[seg];
    const double a = dg > 0.0 ? std::clamp((g - gl.cumulative[seg]) / dg, 0.0, 1.0) : 0.0;
    out[k] = slerp(cont[seg], cont[seg + 1], a);
  }
  return out;
}

GeoDmpModel fit_geo_dmp(const OrientationSeries& series, int n_basis, const DmpGains& gains,
                        const GeoFitOptions& opts) {
  gains.validate();
  const OrientationSeries* src = &series;
  OrientationSeries resampled;
  if (opts.n_fit > 2 && series.size() > opts.n_fit) {
    resampled = estimate_orientation_series(resample_uniform_geodesic(series.q, opts.n_fit));
    src = &resampled;
  }
  if (src->size() < 3) throw DegenerateDemoError("series too short to fit");
  const double L = src->total_length();
  if (L <= 0.0) throw DegenerateDemoError("series has zero geodesic length");

  GeoDmpModel m;
  m.gains = gains;
  m.L = L;
  m.q0 = src->q.front();
  m.qg = src->q.back();
  m.eta0 = src->eta.front();

  const Eigen::Vector3d a0 = quat_log(quat_mul(m.qg, quat_conj(m.q0)));
  if (a0.cwiseAbs().maxCoeff() < kOriGoalEps)
    throw DegenerateGoalError("start and goal orientations coincide while the demo moves");
  m.scale = regularize_ori_scale(a0);

  const int n = src->size();
  Eigen::VectorXd phases(n);
  Eigen::MatrixXd targets(n, 3);
  for (int k = 0; k < n; ++k) {
    phases[k] = std::exp(-gains.alpha_x * src->g_cum[k] / L);
    const Eigen::Vector3d coupling =
        2.0 * quat_log(quat_mul(m.qg, quat_conj(src->q[k])));
    const Eigen::Vector3d f =
        L * L * src->eta_d[k] -
        gains.alpha_z * (gains.beta_z * coupling - L * src->eta[k]);
    targets.row(k) = (f.array() / m.scale.array()).matrix().transpose();
  }
  m.basis = GaussianBasis::phase_spaced(n_basis, gains.alpha_x);
  m.weights = fit_forcing_weights(phases, targets, m.basis);
  return m;
}

OrientationSeries generate_geo_dmp(const GeoDmpModel& model, const UnitQuaternion& q_start,
                                   const UnitQuaternion& q_goal, int n_steps,
                                   const GeoGenOptions& opts) {
  if (n_steps < 2) throw InvalidParamsError("need at least 2 integration steps");
  const double L = model.L;
  const double g_total = opts.g_total > 0.0 ? opts.g_total : L;
  const double dg = g_total / n_steps;
  const double cutoff = opts.forcing_cutoff_g >= 0.0 ? opts.forcing_cutoff_g : L;

  const Eigen::Vector3d a_new = quat_log(quat_mul(q_goal, quat_conj(q_start)));
  const Eigen::Vector3d a_train = quat_log(quat_mul(model.qg, quat_conj(model.q0)));
  Eigen::Vector3d scale_new, ratio;
  new_task_scaling(a_train, model.scale, a_new, scale_new, ratio);
  // State is L*eta; initial value rescaled per tangent dimension like the
  // position DMP so identical boundaries reproduce the demo exactly.
  Eigen::Vector3d eta_L = L * (model.eta0.array() * ratio.array()).matrix();

  OrientationSeries out;
  out.g_cum.resize(n_steps + 1);
  out.q.resize(n_steps + 1);
  out.eta.resize(n_steps + 1);
  out.eta_d.resize(n_steps + 1);
  out.phase.resize(n_steps + 1);

  UnitQuaternion q = q_start;
  for (int k = 0; k <= n_steps; ++k) {
    const double g = dg * k;
    out.g_cum[k] = g;
    out.q[k] = q;
    out.eta[k] = eta_L / L;
    out.phase[k] = std::exp(-model.gains.alpha_x * g / L);
    if (k == n_steps) {
      out.eta_d[k] = out.eta_d[k > 0 ? k - 1 : 0];
      break;
    }
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    if (g < cutoff) {
      f = (scale_new.array() * model.basis.forcing(out.phase[k], model.weights).array())
              .matrix();
    }
    const Eigen::Vector3d coupling = 2.0 * quat_log(quat_mul(q_goal, quat_conj(q)));
    const Eigen::Vector3d eta_L_d =
        (model.gains.alpha_z * (model.gains.beta_z * coupling - eta_L) + f) / L;
    out.eta_d[k] = eta_L_d / L;
    eta_L += dg * eta_L_d;
    q = quat_mul(quat_exp((0.5 * dg / L) * eta_L), q).normalized();
  }
  return out;
}

std::vector<std::pair<double, UnitQuaternion>> time_playback(
    const OrientationSeries& series, const std::function<double(double)>& speed, double dt) {
  if (dt <= 0.0) throw InvalidParamsError("need dt > 0");
  const double L = series.total_length();
  std::vector<std::pair<double, UnitQuaternion>> out;
  double g = 0.0;
  double t = 0.0;
  out.emplace_back(t, series.at_geodesic(0.0));
  constexpr long kMaxSteps = 100000000;
  for (long step = 0; g < L; ++step) {
    if (step >= kMaxSteps) throw InvalidSpeedError("playback stalled before reaching the end");
    const double gd = speed(g);
    if (gd <= 0.0) throw InvalidSpeedError("speed profile must be positive");
    g = std::min(g + gd * dt, L);
    t += dt;
    out.emplace_back(t, series.at_geodesic(g));
  }
  return out;
}

TimeQuatDmpModel fit_time_quat_dmp(std::span<const UnitQuaternion> qs,
                                   std::span<const double> timestamps, int n_basis,
                                   const DmpGains& gains) {
  gains.validate();
  if (qs.size() < 3 || timestamps.size() != qs.size())
    throw DegenerateDemoError("need at least 3 timestamped orientations");
  const int n = static_cast<int>(qs.size());

  std::vector<UnitQuaternion> cont(qs.begin(), qs.end());
  make_sign_continuous(cont);
  if (geodesic_length_series(cont).total < 1e-6)
    throw DegenerateDemoError("demo does not rotate");

  Eigen::VectorXd t(n);
  for (int k = 0; k < n; ++k) t[k] = timestamps[k];
  for (int k = 1; k < n; ++k) {
    if (t[k] <= t[k - 1]) throw NonMonotoneTimeError("timestamps must strictly increase");
  }

  TimeQuatDmpModel m;
  m.gains = gains;
  m.tau = t[n - 1] - t[0];
  m.q0 = cont.front();
  m.qg = cont.back();

  const Eigen::Vector3d a0 = quat_log(quat_mul(m.qg, quat_conj(m.q0)));
  if (a0.cwiseAbs().maxCoeff() < kOriGoalEps)
    throw DegenerateGoalError("start and goal orientations coincide while the demo moves");
  m.scale = regularize_ori_scale(a0);

  // eta = tau * omega, with omega from forward tangent steps.
  std::vector<Eigen::Vector3d> eta(n);
  for (int k = 0; k + 1 < n; ++k) {
    eta[k] = m.tau * 2.0 * quat_log(quat_mul(cont[k + 1], quat_conj(cont[k]))) /
             (t[k + 1] - t[k]);
  }
  eta[n - 1] = eta[n - 2];
  std::vector<Eigen::Vector3d> eta_dot;
  differentiate_vec3(t, eta, eta_dot);
  m.eta0 = eta.front();

  Eigen::VectorXd phases(n);
  Eigen::MatrixXd targets(n, 3);
  for (int k = 0; k < n; ++k) {
    phases[k] = std::exp(-gains.alpha_x * (t[k] - t[0]) / m.tau);
    const Eigen::Vector3d coupling = 2.0 * quat_log(quat_mul(m.qg, quat_conj(cont[k])));
    const Eigen::Vector3d f =
        m.tau * eta_dot[k] - gains.alpha_z * (gains.beta_z * coupling - eta[k]);
    targets.row(k) = (f.array() / m.scale.array()).matrix().transpose();
  }
  m.basis = GaussianBasis::phase_spaced(n_basis, gains.alpha_x);
  m.weights = fit_forcing_weights(phases, targets, m.basis);
  return m;
}

std::vector<UnitQuaternion> generate_time_quat_dmp(const TimeQuatDmpModel& model,
                                                   const UnitQuaternion& q_start,
                                                   const UnitQuaternion& q_goal, double dt,
                                                   int n_steps) {
  if (n_steps < 2 || dt <= 0.0) throw InvalidParamsError("need dt > 0 and n_steps >= 2");
  const double tau = model.tau;
  const Eigen::Vector3d a_new = quat_log(quat_mul(q_goal, quat_conj(q_start)));
  const Eigen::Vector3d a_train = quat_log(quat_mul(model.qg, quat_conj(model.q0)));
  Eigen::Vector3d scale_new, ratio;
  new_task_scaling(a_train, model.scale, a_new, scale_new, ratio);
  Eigen::Vector3d eta = (model.eta0.array() * ratio.array()).matrix();

  std::vector<UnitQuaternion> out(n_steps + 1);
  UnitQuaternion q = q_start;
  for (int k = 0; k <= n_steps; ++k) {
    out[k] = q;
    if (k == n_steps) break;
    const double x = std::exp(-model.gains.alpha_x * (dt * k) / tau);
    const Eigen::Vector3d f =
        (scale_new.array() * model.basis.forcing(x, model.weights).array()).matrix();
    const Eigen::Vector3d coupling = 2.0 * quat_log(quat_mul(q_goal, quat_conj(q)));
    const Eigen::Vector3d eta_dot =
        (model.gains.alpha_z * (model.gains.beta_z * coupling - eta) + f) / tau;
    eta += dt * eta_dot;
    q = quat_mul(quat_exp((0.5 * dt / tau) * eta), q).normalized();
  }
  return out;
}

}  // namespace geodmp
