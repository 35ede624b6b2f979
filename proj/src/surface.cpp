#include "geodmp/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geodmp {

std::pair<std::vector<std::pair<int, int>>, double> dtw_path(
    std::span<const Eigen::Vector3d> a, std::span<const Eigen::Vector3d> b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n == 0 || m == 0) throw EmptySequenceError("DTW of an empty sequence");

  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd acc(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = (a[i] - b[j]).norm();
      double prev = inf;
      if (i == 0 && j == 0) prev = 0.0;
      if (i > 0) prev = std::min(prev, acc(i - 1, j));
      if (j > 0) prev = std::min(prev, acc(i, j - 1));
      if (i > 0 && j > 0) prev = std::min(prev, acc(i - 1, j - 1));
      acc(i, j) = c + prev;
    }
  }

  std::vector<std::pair<int, int>> path;
  int i = n - 1;
  int j = m - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    double best = inf;
    int bi = i;
    int bj = j;
    if (i > 0 && j > 0 && acc(i - 1, j - 1) < best) {
      best = acc(i - 1, j - 1);
      bi = i - 1;
      bj = j - 1;
    }
    if (i > 0 && acc(i - 1, j) < best) {
      best = acc(i - 1, j);
      bi = i - 1;
      bj = j;
    }
    if (j > 0 && acc(i, j - 1) < best) {
      best = acc(i, j - 1);
      bi = i;
      bj = j - 1;
    }
    i = bi;
    j = bj;
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return {std::move(path), acc(n - 1, m - 1)};
}

std::vector<DemoTrajectory> dtw_align(std::span<const DemoTrajectory> demos) {
  if (demos.empty()) throw EmptySequenceError("no demos to align");
  for (const auto& d : demos) {
    if (d.size() < 2) throw EmptySequenceError("demo with fewer than 2 points");
  }
  std::size_t ref_idx = 0;
  for (std::size_t i = 1; i < demos.size(); ++i) {
    if (demos[i].size() > demos[ref_idx].size()) ref_idx = i;
  }
  const DemoTrajectory& ref = demos[ref_idx];
  std::vector<Eigen::Vector3d> ref_pos(ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) ref_pos[k] = ref[k].y;

  std::vector<DemoTrajectory> out;
  out.reserve(demos.size());
  for (std::size_t i = 0; i < demos.size(); ++i) {
    if (i == ref_idx) {
      out.push_back(demos[i]);
      continue;
    }
    std::vector<Eigen::Vector3d> pos(demos[i].size());
    for (std::size_t k = 0; k < demos[i].size(); ++k) pos[k] = demos[i][k].y;
    const auto [path, cost] = dtw_path(ref_pos, pos);
    (void)cost;

    DemoTrajectory warped(ref.size());
    for (const auto& [ri, di] : path) warped[ri] = demos[i][di];  // last match wins
    out.push_back(std::move(warped));
  }
  return out;
}

ChartParams build_chart(std::span<const DemoPoint> points) {
  if (points.size() < 3) throw DegenerateProjectionError("need at least 3 points");
  double x_min = points[0].y.x(), x_max = x_min;
  double y_min = points[0].y.y(), y_max = y_min;
  for (const auto& p : points) {
    x_min = std::min(x_min, p.y.x());
    x_max = std::max(x_max, p.y.x());
    y_min = std::min(y_min, p.y.y());
    y_max = std::max(y_max, p.y.y());
  }
  const double wx = x_max - x_min;
  const double wy = y_max - y_min;
  if (wx <= 0.0 || wy <= 0.0)
    throw DegenerateProjectionError("projected bounding box has zero area");

  ChartParams chart;
  chart.x_c = 0.5 * (x_min + x_max);
  chart.y_c = 0.5 * (y_min + y_max);
  chart.s_x = 1.0 / wx;
  chart.s_y = 1.0 / wy;
  return chart;
}

SurfaceModel fit_surface(std::span<const DemoPoint> points, const ChartParams& chart,
                         int grid_n, int grid_m, double overlap,
                         const SurfaceFitOptions& opts) {
  if (grid_n < 2 || grid_m < 2) throw InvalidParamsError("kernel grid must be at least 2x2");
  if (overlap <= 0.0) throw InvalidParamsError("overlap must be positive");
  if (points.empty()) throw InsufficientDataError("no demo points");

  SurfaceModel model;
  model.chart = chart;
  model.demo_points.assign(points.begin(), points.end());
  model.k_max = opts.k_max;

  KernelGrid2D& grid = model.grid;
  grid.n = grid_n;
  grid.m = grid_m;
  grid.centers_u.resize(grid_n);
  grid.centers_v.resize(grid_m);
  for (int i = 0; i < grid_n; ++i) grid.centers_u[i] = -0.5 + static_cast<double>(i) / (grid_n - 1);
  for (int j = 0; j < grid_m; ++j) grid.centers_v[j] = -0.5 + static_cast<double>(j) / (grid_m - 1);
  // Kernels touch at one sigma when overlap = 1; wider sigma buys smoothing
  // at the cost of bias proportional to sigma^2 times surface curvature.
  const double spacing = std::max(1.0 / (grid_n - 1), 1.0 / (grid_m - 1));
  grid.sigma = 0.5 * overlap * spacing;
  grid.width = 1.0 / (2.0 * grid.sigma * grid.sigma);

  Eigen::MatrixXd num_z = Eigen::MatrixXd::Zero(grid_n, grid_m);
  Eigen::MatrixXd num_f = Eigen::MatrixXd::Zero(grid_n, grid_m);
  Eigen::MatrixXd den = Eigen::MatrixXd::Zero(grid_n, grid_m);
  for (const auto& p : points) {
    const Eigen::Vector2d uv = chart.to_uv(p.y);
    for (int i = 0; i < grid_n; ++i) {
      const double du = uv.x() - grid.centers_u[i];
      for (int j = 0; j < grid_m; ++j) {
        const double dv = uv.y() - grid.centers_v[j];
        const double psi = std::exp(-grid.width * (du * du + dv * dv));
        num_z(i, j) += psi * p.y.z();
        num_f(i, j) += psi * p.f;
        den(i, j) += psi;
      }
    }
  }

  grid.weights_z = Eigen::MatrixXd::Zero(grid_n, grid_m);
  grid.weights_f = Eigen::MatrixXd::Zero(grid_n, grid_m);
  grid.support.setConstant(grid_n, grid_m, false);
  int supported = 0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_m; ++j) {
      if (den(i, j) >= opts.eps_support) {
        grid.weights_z(i, j) = num_z(i, j) / den(i, j);
        grid.weights_f(i, j) = num_f(i, j) / den(i, j);
        grid.support(i, j) = true;
        ++supported;
      }
    }
  }
  if (supported == 0) throw InsufficientDataError("every kernel is unsupported");

  if (opts.d_query > 0.0) {
    model.d_query = opts.d_query;
  } else {
    // 3x the median nearest-neighbor spacing of the demo points.
    const int n = static_cast<int>(points.size());
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        nn[a] = std::min(nn[a], (points[a].y - points[b].y).norm());
      }
    }
    std::nth_element(nn.begin(), nn.begin() + n / 2, nn.end());
    const double median = n > 1 ? nn[n / 2] : 0.0;
    model.d_query = median > 0.0 ? 3.0 * median : 1.0;
  }
  return model;
}

namespace {

SurfaceQuery query_field(const SurfaceModel& model, const Eigen::MatrixXd& weights, double u,
                         double v) {
  const KernelGrid2D& grid = model.grid;
  double num = 0.0;
  double den = 0.0;
  double nearest2 = std::numeric_limits<double>::infinity();
  int ni = 0, nj = 0;
  for (int i = 0; i < grid.n; ++i) {
    const double du = u - grid.centers_u[i];
    for (int j = 0; j < grid.m; ++j) {
      if (!grid.support(i, j)) continue;
      const double dv = v - grid.centers_v[j];
      const double r2 = du * du + dv * dv;
      const double psi = std::exp(-grid.width * r2);
      num += psi * weights(i, j);
      den += psi;
      if (r2 < nearest2) {
        nearest2 = r2;
        ni = i;
        nj = j;
      }
    }
  }
  SurfaceQuery out;
  out.supported = nearest2 <= (2.0 * grid.sigma) * (2.0 * grid.sigma);
  out.value = den > 1e-300 ? num / den : weights(ni, nj);
  return out;
}

}  // namespace

SurfaceQuery query_height(const SurfaceModel& model, double u, double v) {
  return query_field(model, model.grid.weights_z, u, v);
}

SurfaceQuery query_force(const SurfaceModel& model, double u, double v) {
  return query_field(model, model.grid.weights_f, u, v);
}

UnitQuaternion query_orientation(const SurfaceModel& model, const Eigen::Vector3d& y,
                                 double radius) {
  const double d = radius > 0.0 ? radius : model.d_query;
  std::vector<std::pair<double, int>> hits;  // (distance, index)
  for (int i = 0; i < static_cast<int>(model.demo_points.size()); ++i) {
    const double dist = (model.demo_points[i].y - y).norm();
    if (dist < d) hits.emplace_back(dist, i);
  }
  if (hits.empty()) throw NoNeighborsError("no demo point within the query radius");
  const int k = std::min<int>(model.k_max, static_cast<int>(hits.size()));
  std::partial_sort(hits.begin(), hits.begin() + k, hits.end());

  std::vector<WeightedSample> samples;
  samples.reserve(k);
  for (int i = 0; i < k; ++i) {
    samples.push_back({model.demo_points[hits[i].second].q, (d - hits[i].first) / d});
  }
  return intrinsic_mean(samples);
}

}  // namespace geodmp
