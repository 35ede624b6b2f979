#include "geodmp/dmp_position.hpp"

#include <algorithm>
#include <cmath>

namespace geodmp {

namespace {

Eigen::Vector3d regularize_scale(const Eigen::Vector3d& diff) {
  Eigen::Vector3d s = diff;
  for (int d = 0; d < 3; ++d) {
    if (std::abs(s[d]) < kGoalEps) s[d] = (s[d] < 0.0 ? -kGoalEps : kGoalEps);
  }
  return s;
}

// Per-dimension forcing scale and initial-velocity ratio for a new
// start/goal pair. A dimension whose training span was below kGoalEps keeps
// its training scale (ratio 1): the clamped weights would otherwise be
// amplified by new_span / kGoalEps.
void new_task_scaling(const Eigen::Vector3d& train_diff, const Eigen::Vector3d& train_scale,
                      const Eigen::Vector3d& new_diff, double eps, Eigen::Vector3d& scale_new,
                      Eigen::Vector3d& ratio) {
  for (int d = 0; d < 3; ++d) {
    if (std::abs(train_diff[d]) < eps) {
      scale_new[d] = train_scale[d];
      ratio[d] = 1.0;
    } else {
      scale_new[d] = std::abs(new_diff[d]) < eps ? (new_diff[d] < 0.0 ? -eps : eps)
                                                 : new_diff[d];
      ratio[d] = new_diff[d] / train_scale[d];
    }
  }
}

// Central differences of a sampled curve against a (possibly nonuniform)
// abscissa; one-sided at the ends.
void differentiate(const Eigen::VectorXd& t, const std::vector<Eigen::Vector3d>& y,
                   std::vector<Eigen::Vector3d>& dy) {
  const int n = static_cast<int>(y.size());
  dy.assign(n, Eigen::Vector3d::Zero());
  if (n < 2) return;
  dy[0] = (y[1] - y[0]) / (t[1] - t[0]);
  dy[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (int k = 1; k + 1 < n; ++k) {
    dy[k] = (y[k + 1] - y[k - 1]) / (t[k + 1] - t[k - 1]);
  }
}

}  // namespace

PositionSeries arc_length_resample(std::span<const Eigen::Vector3d> positions,
                                   std::span<const double> timestamps, int n_samples,
                                   double eps_length) {
  if (positions.size() < 2) throw DegenerateDemoError("need at least 2 position samples");
  if (!timestamps.empty() && timestamps.size() != positions.size())
    throw InvalidParamsError("timestamp count does not match position count");
  if (n_samples < 3) throw InvalidParamsError("need at least 3 resampled points");

  const int n = static_cast<int>(positions.size());
  Eigen::VectorXd s_raw(n);
  s_raw[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    s_raw[k] = s_raw[k - 1] + (positions[k] - positions[k - 1]).norm();
  }
  const double L = s_raw[n - 1];
  if (L < eps_length) throw DegenerateDemoError("total path length below threshold");

  PositionSeries out;
  out.s.resize(n_samples);
  out.y.resize(n_samples);
  int seg = 0;
  for (int k = 0; k < n_samples; ++k) {
    const double sk = L * static_cast<double>(k) / (n_samples - 1);
    out.s[k] = sk;
    while (seg + 2 < n && s_raw[seg + 1] < sk) ++seg;
    const double ds = s_raw[seg + 1] - s_raw[seg];
    const double a = ds > 0.0 ? std::clamp((sk - s_raw[seg]) / ds, 0.0, 1.0) : 0.0;
    out.y[k] = (1.0 - a) * positions[seg] + a * positions[seg + 1];
  }
  differentiate(out.s, out.y, out.y_d);
  differentiate(out.s, out.y_d, out.y_dd);
  return out;
}

AlDmpModel fit_al_dmp(const PositionSeries& series, int n_basis, const DmpGains& gains) {
  gains.validate();
  if (series.size() < 3) throw DegenerateDemoError("series too short to fit");

  AlDmpModel m;
  m.gains = gains;
  m.y0 = series.y.front();
  m.g = series.y.back();
  m.y_d0 = series.y_d.front();

  const Eigen::Vector3d diff = m.g - m.y0;
  if (diff.cwiseAbs().maxCoeff() < kGoalEps)
    throw DegenerateGoalError("start and goal coincide in every dimension");
  m.scale = regularize_scale(diff);

  const double L = series.total_length();
  if (L <= 0.0) throw DegenerateDemoError("series has zero arc length");
  m.L = L;

  const int n = series.size();
  Eigen::VectorXd phases(n);
  Eigen::MatrixXd targets(n, 3);
  for (int k = 0; k < n; ++k) {
    phases[k] = std::exp(-gains.alpha_x * series.s[k] / L);
    const Eigen::Vector3d f = L * L * series.y_dd[k] -
                              gains.alpha_z * (gains.beta_z * (m.g - series.y[k]) -
                                               L * series.y_d[k]);
    targets.row(k) = (f.array() / m.scale.array()).matrix().transpose();
  }
  m.basis = GaussianBasis::phase_spaced(n_basis, gains.alpha_x);
  m.weights = fit_forcing_weights(phases, targets, m.basis);
  return m;
}

PositionSeries generate_al_dmp(const AlDmpModel& model, const Eigen::Vector3d& y_start,
                               const Eigen::Vector3d& g_new, int n_steps,
                               const AlDmpGenOptions& opts) {
  if (n_steps < 2) throw InvalidParamsError("need at least 2 integration steps");
  const double L = model.L;
  const double s_total = opts.s_total > 0.0 ? opts.s_total : L;
  const double ds = s_total / n_steps;
  // Forcing stops at the trained horizon; past it the learned weights of
  // clamped dimensions would keep pushing against the goal attractor.
  const double cutoff = opts.forcing_cutoff_s >= 0.0 ? opts.forcing_cutoff_s : L;

  Eigen::Vector3d scale_new, ratio;
  new_task_scaling(model.g - model.y0, model.scale, g_new - y_start, kGoalEps, scale_new,
                   ratio);
  // Initial scaled velocity: demo tangent rescaled with the new span so the
  // generated path stays covariant under per-dimension goal scaling.
  Eigen::Vector3d z = L * (model.y_d0.array() * ratio.array()).matrix();

  PositionSeries out;
  out.s.resize(n_steps + 1);
  out.y.resize(n_steps + 1);
  out.y_d.resize(n_steps + 1);
  out.y_dd.resize(n_steps + 1);

  Eigen::Vector3d y = y_start;
  for (int k = 0; k <= n_steps; ++k) {
    const double s = ds * k;
    out.s[k] = s;
    out.y[k] = y;
    out.y_d[k] = z / L;
    if (k == n_steps) {
      out.y_dd[k] = out.y_dd[k > 0 ? k - 1 : 0];
      break;
    }
    const double x = std::exp(-model.gains.alpha_x * s / L);
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    if (s < cutoff) {
      f = (scale_new.array() * model.basis.forcing(x, model.weights).array()).matrix();
    }
    const Eigen::Vector3d z_d =
        (model.gains.alpha_z * (model.gains.beta_z * (g_new - y) - z) + f) / L;
    out.y_dd[k] = z_d / L;
    z += ds * z_d;
    y += ds * (z / L);
  }
  return out;
}

ClassicalDmpModel fit_classical_dmp(std::span<const Eigen::Vector3d> positions,
                                    std::span<const double> timestamps, int n_basis,
                                    const DmpGains& gains) {
  gains.validate();
  if (positions.size() < 3 || timestamps.size() != positions.size())
    throw DegenerateDemoError("need at least 3 timestamped samples");
  const int n = static_cast<int>(positions.size());

  double path = 0.0;
  for (int k = 1; k < n; ++k) path += (positions[k] - positions[k - 1]).norm();
  if (path < 1e-6) throw DegenerateDemoError("total path length below threshold");

  Eigen::VectorXd t(n);
  for (int k = 0; k < n; ++k) t[k] = timestamps[k];
  for (int k = 1; k < n; ++k) {
    if (t[k] <= t[k - 1]) throw NonMonotoneTimeError("timestamps must strictly increase");
  }

  ClassicalDmpModel m;
  m.gains = gains;
  m.tau = t[n - 1] - t[0];
  m.y0 = positions.front();
  m.g = positions.back();

  const Eigen::Vector3d diff = m.g - m.y0;
  if (diff.cwiseAbs().maxCoeff() < kGoalEps)
    throw DegenerateGoalError("start and goal coincide in every dimension");
  m.scale = regularize_scale(diff);

  std::vector<Eigen::Vector3d> ys(positions.begin(), positions.end());
  std::vector<Eigen::Vector3d> dy, ddy;
  differentiate(t, ys, dy);
  differentiate(t, dy, ddy);
  m.v0 = dy.front();

  Eigen::VectorXd phases(n);
  Eigen::MatrixXd targets(n, 3);
  for (int k = 0; k < n; ++k) {
    phases[k] = std::exp(-gains.alpha_x * (t[k] - t[0]) / m.tau);
    const Eigen::Vector3d f =
        m.tau * m.tau * ddy[k] -
        gains.alpha_z * (gains.beta_z * (m.g - ys[k]) - m.tau * dy[k]);
    targets.row(k) = (f.array() / m.scale.array()).matrix().transpose();
  }
  m.basis = GaussianBasis::phase_spaced(n_basis, gains.alpha_x);
  m.weights = fit_forcing_weights(phases, targets, m.basis);
  return m;
}

std::vector<Eigen::Vector3d> generate_classical_dmp(const ClassicalDmpModel& model,
                                                    const Eigen::Vector3d& y_start,
                                                    const Eigen::Vector3d& g_new, double dt,
                                                    int n_steps) {
  if (n_steps < 2 || dt <= 0.0) throw InvalidParamsError("need dt > 0 and n_steps >= 2");
  const double tau = model.tau;
  Eigen::Vector3d scale_new, ratio;
  new_task_scaling(model.g - model.y0, model.scale, g_new - y_start, kGoalEps, scale_new,
                   ratio);
  Eigen::Vector3d z = tau * (model.v0.array() * ratio.array()).matrix();

  std::vector<Eigen::Vector3d> out(n_steps + 1);
  Eigen::Vector3d y = y_start;
  for (int k = 0; k <= n_steps; ++k) {
    out[k] = y;
    if (k == n_steps) break;
    const double x = std::exp(-model.gains.alpha_x * (dt * k) / tau);
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    if (dt * k < tau) {
      f = (scale_new.array() * model.basis.forcing(x, model.weights).array()).matrix();
    }
    const Eigen::Vector3d z_d =
        (model.gains.alpha_z * (model.gains.beta_z * (g_new - y) - z) + f) / tau;
    z += dt * z_d;
    y += dt * (z / tau);
  }
  return out;
}

}  // namespace geodmp
