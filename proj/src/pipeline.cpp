#include "geodmp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace geodmp {

namespace {

void fill_lengths(SyncTrajectory& tr) {
  const int n = tr.size();
  tr.s_cum.assign(n, 0.0);
  tr.g_cum.assign(n, 0.0);
  for (int k = 1; k < n; ++k) {
    tr.s_cum[k] = tr.s_cum[k - 1] + (tr.y[k] - tr.y[k - 1]).norm();
    tr.g_cum[k] = tr.g_cum[k - 1] + quat_distance(tr.q[k - 1], tr.q[k]);
  }
}

}  // namespace

SyncTrajectory generate_reference(const SurfaceModel& surface,
                                  const Eigen::Vector2d& start_uv,
                                  const Eigen::Vector2d& end_uv, int n_u) {
  if (n_u < 2) throw InvalidParamsError("need at least 2 interpolation intervals");

  SyncTrajectory tr;
  const int n = n_u + 1;
  tr.lambda.resize(n);
  tr.y.resize(n);
  tr.q.resize(n);
  tr.f.resize(n);
  tr.start_uv = start_uv;
  tr.end_uv = end_uv;

  for (int i = 0; i < n; ++i) {
    const double t_u = static_cast<double>(i) / n_u;
    tr.lambda[i] = t_u;
    const Eigen::Vector2d uv = (1.0 - t_u) * start_uv + t_u * end_uv;

    const SurfaceQuery zq = query_height(surface, uv.x(), uv.y());
    if (!zq.supported)
      throw UnsupportedRegionError("height unsupported at interpolated point " +
                                   std::to_string(i));
    const Eigen::Vector2d xy = surface.chart.uv_to_xy(uv);
    tr.y[i] = {xy.x(), xy.y(), zq.value};

    const SurfaceQuery fq = query_force(surface, uv.x(), uv.y());
    if (!fq.supported)
      throw UnsupportedRegionError("force unsupported at interpolated point " +
                                   std::to_string(i));
    tr.f[i] = fq.value;

    double radius = surface.d_query;
    bool found = false;
    for (int attempt = 0; attempt <= 3 && !found; ++attempt) {
      try {
        tr.q[i] = query_orientation(surface, tr.y[i], radius);
        found = true;
      } catch (const NoNeighborsError&) {
        radius *= 2.0;
      }
    }
    if (!found)
      throw UnsupportedRegionError("no orientation neighbors at interpolated point " +
                                   std::to_string(i));
  }
  make_sign_continuous(tr.q);
  fill_lengths(tr);
  return tr;
}

ForceKernelModel fit_force_kernels(std::span<const double> f, std::span<const double> phase,
                                   int n_basis, double alpha_x) {
  if (f.size() != phase.size()) throw InvalidParamsError("force/phase length mismatch");
  if (static_cast<int>(f.size()) < n_basis)
    throw InsufficientDataError("fewer force samples than kernels");

  ForceKernelModel m;
  m.basis = GaussianBasis::phase_spaced(n_basis, alpha_x);
  m.weights = Eigen::VectorXd::Zero(n_basis);
  m.support.assign(n_basis, false);
  constexpr double eps_support = 1e-6;

  for (int i = 0; i < n_basis; ++i) {
    const double c = m.basis.centers[i];
    const double h = m.basis.widths[i];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double d = phase[k] - c;
      const double psi = std::exp(-h * d * d);
      num += psi * f[k];
      den += psi;
    }
    if (den >= eps_support) {
      m.weights[i] = num / den;
      m.support[i] = true;
    }
  }
  if (std::none_of(m.support.begin(), m.support.end(), [](bool s) { return s; }))
    throw InsufficientDataError("every force kernel is unsupported");
  return m;
}

double query_force_kernels(const ForceKernelModel& model, double x) {
  double num = 0.0;
  double den = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  int ni = 0;
  for (int i = 0; i < model.basis.size(); ++i) {
    if (!model.support[i]) continue;
    const double d = x - model.basis.centers[i];
    const double psi = std::exp(-model.basis.widths[i] * d * d);
    num += psi * model.weights[i];
    den += psi;
    if (std::abs(d) < nearest) {
      nearest = std::abs(d);
      ni = i;
    }
  }
  return den > 1e-300 ? num / den : model.weights[ni];
}

SkillBundle encode_skill(const SyncTrajectory& ref, int n_basis_pos, int n_basis_ori,
                         int n_basis_force, const DmpGains& gains,
                         const EncodeOptions& opts) {
  if (ref.size() < 3) throw DegenerateDemoError("reference too short to encode");

  SkillBundle bundle;
  bundle.start_uv = ref.start_uv;
  bundle.end_uv = ref.end_uv;

  const PositionSeries series =
      arc_length_resample(ref.y, {}, std::max(opts.n_resample_pos, 3));
  bundle.al = fit_al_dmp(series, n_basis_pos, gains);

  const GeodesicLength gl = geodesic_length_series(ref.q);
  bool on_geo_phase = gl.total >= 1e-6;
  if (on_geo_phase) {
    const OrientationSeries ori = estimate_orientation_series(ref.q);
    bundle.geo = fit_geo_dmp(ori, n_basis_ori, gains, {.n_fit = opts.n_fit_ori});
  } else {
    bundle.q_const = ref.q.front();
  }

  // Force is regressed over the same phase that drives the orientation;
  // with no orientation motion it falls back to the arc-length phase.
  std::vector<double> phases(ref.size());
  for (int k = 0; k < ref.size(); ++k) {
    const double progress = on_geo_phase ? gl.cumulative[k] / gl.total
                                         : ref.s_cum[k] / ref.arc_length();
    phases[k] = std::exp(-gains.alpha_x * progress);
  }
  bundle.force = fit_force_kernels(ref.f, phases, n_basis_force, gains.alpha_x);
  return bundle;
}

SyncTrajectory execute_skill(const SkillBundle& bundle, int n_steps,
                             const std::function<double(double)>& speed) {
  if (n_steps < 2) throw InvalidParamsError("need at least 2 samples");
  const int intervals = n_steps - 1;
  const int substeps = std::max(1, (999 + intervals) / intervals);
  const int m = intervals * substeps;  // fine integration grid

  const PositionSeries pos =
      generate_al_dmp(bundle.al, bundle.al.y0, bundle.al.g, m);
  OrientationSeries ori;
  if (bundle.geo) {
    ori = generate_geo_dmp(*bundle.geo, bundle.geo->q0, bundle.geo->qg, m);
  }

  SyncTrajectory tr;
  tr.lambda.resize(n_steps);
  tr.y.resize(n_steps);
  tr.q.resize(n_steps);
  tr.f.resize(n_steps);
  tr.s_cum.resize(n_steps);
  tr.g_cum.resize(n_steps);
  tr.phase.resize(n_steps);
  tr.start_uv = bundle.start_uv;
  tr.end_uv = bundle.end_uv;

  for (int k = 0; k < n_steps; ++k) {
    const int j = k * substeps;
    tr.lambda[k] = static_cast<double>(k) / intervals;
    tr.y[k] = pos.y[j];
    tr.s_cum[k] = pos.s[j];
    if (bundle.geo) {
      tr.q[k] = ori.q[j];
      tr.g_cum[k] = ori.g_cum[j];
      tr.phase[k] = ori.phase[j];
    } else {
      tr.q[k] = bundle.q_const;
      tr.g_cum[k] = 0.0;
      tr.phase[k] = std::exp(-bundle.al.gains.alpha_x * tr.lambda[k]);
    }
    tr.f[k] = query_force_kernels(bundle.force, tr.phase[k]);
  }

  if (speed) {
    tr.t.resize(n_steps);
    tr.t[0] = 0.0;
    const double dl = 1.0 / intervals;
    for (int k = 1; k < n_steps; ++k) {
      const double rate = speed(tr.lambda[k - 1]);
      if (rate <= 0.0) throw InvalidSpeedError("progress rate must be positive");
      tr.t[k] = tr.t[k - 1] + dl / rate;
    }
  }
  return tr;
}

namespace {

SyncTrajectory resample_by_lambda(const SyncTrajectory& src,
                                  const std::vector<double>& lambdas) {
  SyncTrajectory out;
  out.lambda = lambdas;
  const int n = static_cast<int>(lambdas.size());
  out.y.resize(n);
  out.q.resize(n);
  out.f.resize(n);
  int seg = 0;
  const int m = src.size();
  for (int k = 0; k < n; ++k) {
    const double l = lambdas[k];
    while (seg + 2 < m && src.lambda[seg + 1] < l) ++seg;
    const double dl = src.lambda[seg + 1] - src.lambda[seg];
    const double a = dl > 0.0 ? std::clamp((l - src.lambda[seg]) / dl, 0.0, 1.0) : 0.0;
    out.y[k] = (1.0 - a) * src.y[seg] + a * src.y[seg + 1];
    out.q[k] = slerp(src.q[seg], src.q[seg + 1], a);
    out.f[k] = (1.0 - a) * src.f[seg] + a * src.f[seg + 1];
  }
  fill_lengths(out);
  return out;
}

}  // namespace

ErrorReport evaluate(const SyncTrajectory& generated, const SyncTrajectory& truth,
                     bool allow_resample) {
  if (generated.size() == 0 || truth.size() == 0)
    throw EmptySequenceError("cannot evaluate empty trajectories");
  const SyncTrajectory* ref = &truth;
  SyncTrajectory resampled;
  if (generated.size() != truth.size()) {
    if (!allow_resample) throw LengthMismatchError("trajectory lengths differ");
    resampled = resample_by_lambda(truth, generated.lambda);
    ref = &resampled;
  }

  ErrorReport r;
  double pos_sq = 0.0, ori_sq = 0.0, f_sq = 0.0;
  const int n = generated.size();
  for (int k = 0; k < n; ++k) {
    const double pe = (generated.y[k] - ref->y[k]).norm();
    const double oe = quat_distance(generated.q[k], ref->q[k]);
    const double fe = generated.f[k] - ref->f[k];
    pos_sq += pe * pe;
    ori_sq += oe * oe;
    f_sq += fe * fe;
    r.pos_max = std::max(r.pos_max, pe);
    r.ori_max = std::max(r.ori_max, oe);
  }
  r.pos_rms = std::sqrt(pos_sq / n);
  r.ori_rms = std::sqrt(ori_sq / n);
  r.force_rms = std::sqrt(f_sq / n);
  return r;
}

UnitQuaternion quat_from_normal(const Eigen::Vector3d& normal) {
  const Eigen::Vector3d n = normal.normalized();
  const Eigen::Vector3d z(0.0, 0.0, 1.0);
  const double c = z.dot(n);
  if (c <= -1.0 + 1e-12) {
    return UnitQuaternion::from_axis_angle({1.0, 0.0, 0.0}, M_PI);
  }
  const Eigen::Vector3d axis = z.cross(n);
  const double s = axis.norm();
  if (s < 1e-15) return UnitQuaternion::identity();
  return UnitQuaternion::from_axis_angle(axis, std::atan2(s, c));
}

namespace {

double warp_progress(TimeWarp warp, double p) {
  switch (warp) {
    case TimeWarp::none:
      return p;
    case TimeWarp::quadratic:
      return p * p;
    case TimeWarp::piecewise:
      return p <= 0.5 ? 0.6 * p : 0.3 + 1.4 * (p - 0.5);
  }
  return p;
}

AnalyticTruth make_truth(ScenarioKind kind, const ScenarioParams& p) {
  AnalyticTruth truth;
  truth.params = p;
  const double wx = p.x_max - p.x_min;
  const double wy = p.y_max - p.y_min;
  truth.force = [p, wx](double x, double) {
    return p.force_base + p.force_span * (x - p.x_min) / wx;
  };
  switch (kind) {
    case ScenarioKind::plane:
      truth.height = [p](double x, double y) {
        return p.z0 + p.slope_x * (x - p.x_min) + p.slope_y * (y - p.y_min);
      };
      truth.normal = [p](double, double) {
        return Eigen::Vector3d(-p.slope_x, -p.slope_y, 1.0).normalized();
      };
      break;
    case ScenarioKind::sine_surface:
      truth.height = [p, wx, wy](double x, double y) {
        const double xh = (x - p.x_min) / wx;
        const double yh = (y - p.y_min) / wy;
        return p.z0 + p.amplitude * std::sin(2.0 * M_PI * p.cycles_x * xh) *
                          std::cos(2.0 * M_PI * p.cycles_y * yh);
      };
      truth.normal = [p, wx, wy](double x, double y) {
        const double xh = (x - p.x_min) / wx;
        const double yh = (y - p.y_min) / wy;
        const double kx = 2.0 * M_PI * p.cycles_x;
        const double ky = 2.0 * M_PI * p.cycles_y;
        const double dzdx = p.amplitude * (kx / wx) * std::cos(kx * xh) * std::cos(ky * yh);
        const double dzdy = -p.amplitude * (ky / wy) * std::sin(kx * xh) * std::sin(ky * yh);
        return Eigen::Vector3d(-dzdx, -dzdy, 1.0).normalized();
      };
      break;
    case ScenarioKind::c_chamfer: {
      const double cx = 0.5 * (p.x_min + p.x_max);
      const double cy = 0.5 * (p.y_min + p.y_max);
      truth.height = [p](double, double) { return p.z0; };
      truth.normal = [p, cx, cy](double x, double y) {
        Eigen::Vector3d radial(x - cx, y - cy, 0.0);
        const double r = radial.norm();
        if (r < 1e-12) return Eigen::Vector3d(0.0, 0.0, 1.0);
        radial /= r;
        return (std::cos(p.chamfer_angle) * Eigen::Vector3d(0.0, 0.0, 1.0) +
                std::sin(p.chamfer_angle) * radial)
            .normalized();
      };
      truth.force = [p](double, double) { return p.force_base; };
      break;
    }
  }
  return truth;
}

}  // namespace

Scenario synth_scenario(ScenarioKind kind, const ScenarioParams& params, double noise,
                        TimeWarp warp, std::uint64_t seed) {
  if (params.n_points < 2 || params.n_sweeps < 1)
    throw InvalidParamsError("scenario needs n_points >= 2 and n_sweeps >= 1");
  if (params.x_max <= params.x_min || params.y_max <= params.y_min)
    throw InvalidParamsError("scenario box must have positive extent");
  if (noise < 0.0) throw InvalidParamsError("noise must be nonnegative");

  Scenario sc;
  sc.truth = make_truth(kind, params);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n_demos = kind == ScenarioKind::c_chamfer ? 1 : params.n_sweeps;
  for (int d = 0; d < n_demos; ++d) {
    DemoTrajectory demo(params.n_points);
    for (int k = 0; k < params.n_points; ++k) {
      const double prog = static_cast<double>(k) / (params.n_points - 1);
      double x, y;
      if (kind == ScenarioKind::c_chamfer) {
        const double theta = -0.75 * M_PI + 1.5 * M_PI * prog;  // 270 degree C arc
        x = 0.5 * (params.x_min + params.x_max) + params.radius * std::cos(theta);
        y = 0.5 * (params.y_min + params.y_max) + params.radius * std::sin(theta);
      } else {
        x = params.x_min + prog * (params.x_max - params.x_min);
        y = n_demos > 1
                ? params.y_min + (params.y_max - params.y_min) * d / (n_demos - 1)
                : 0.5 * (params.y_min + params.y_max);
      }
      DemoPoint& pt = demo[k];
      pt.y = {x, y, sc.truth.height(x, y)};
      if (noise > 0.0) {
        pt.y += noise * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      }
      pt.q = quat_from_normal(sc.truth.normal(x, y));
      pt.f = sc.truth.force(x, y);
      pt.t = params.duration * warp_progress(warp, prog);
    }
    sc.demos.push_back(std::move(demo));
  }
  return sc;
}

SyncTrajectory truth_line(const AnalyticTruth& truth, const Eigen::Vector2d& xy_start,
                          const Eigen::Vector2d& xy_end, int n_u) {
  if (n_u < 2) throw InvalidParamsError("need at least 2 interpolation intervals");
  SyncTrajectory tr;
  const int n = n_u + 1;
  tr.lambda.resize(n);
  tr.y.resize(n);
  tr.q.resize(n);
  tr.f.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t_u = static_cast<double>(i) / n_u;
    tr.lambda[i] = t_u;
    const Eigen::Vector2d xy = (1.0 - t_u) * xy_start + t_u * xy_end;
    tr.y[i] = {xy.x(), xy.y(), truth.height(xy.x(), xy.y())};
    tr.q[i] = quat_from_normal(truth.normal(xy.x(), xy.y()));
    tr.f[i] = truth.force(xy.x(), xy.y());
  }
  make_sign_continuous(tr.q);
  fill_lengths(tr);
  return tr;
}

SyncTrajectory sync_from_demo(const DemoTrajectory& demo) {
  SyncTrajectory tr;
  const int n = static_cast<int>(demo.size());
  if (n == 0) throw EmptySequenceError("empty demo");
  tr.lambda.resize(n);
  tr.y.resize(n);
  tr.q.resize(n);
  tr.f.resize(n);
  const double t0 = demo.front().t;
  const double tspan = demo.back().t - t0;
  for (int k = 0; k < n; ++k) {
    tr.lambda[k] = tspan > 0.0 ? (demo[k].t - t0) / tspan
                               : (n > 1 ? static_cast<double>(k) / (n - 1) : 0.0);
    tr.y[k] = demo[k].y;
    tr.q[k] = demo[k].q;
    tr.f[k] = demo[k].f;
  }
  make_sign_continuous(tr.q);
  fill_lengths(tr);
  return tr;
}

}  // namespace geodmp
