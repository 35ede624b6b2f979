#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "geodmp/errors.hpp"
#include "geodmp/quat.hpp"

namespace geodmp {

/// One recorded sample of a grinding demonstration: position, tool
/// orientation, scalar normal force, timestamp.
struct DemoPoint {
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  UnitQuaternion q;
  double f = 0.0;
  double t = 0.0;
};

using DemoTrajectory = std::vector<DemoPoint>;

/// Planar chart of the heightfield: u = s_x (x - x_c), v = s_y (y - y_c).
/// One shared chart for the whole demo set keeps (u,v) comparable across
/// points.
struct ChartParams {
  double x_c = 0.0;
  double y_c = 0.0;
  double s_x = 1.0;
  double s_y = 1.0;

  Eigen::Vector2d to_uv(const Eigen::Vector3d& y) const {
    return {s_x * (y.x() - x_c), s_y * (y.y() - y_c)};
  }
  Eigen::Vector2d uv_to_xy(const Eigen::Vector2d& uv) const {
    return {x_c + uv.x() / s_x, y_c + uv.y() / s_y};
  }
};

/// Uniform grid of isotropic 2D Gaussian kernels over the chart square,
/// with height and force weights from order-0 locally weighted regression.
/// Kernels that never see data are flagged unsupported and excluded from
/// the normalized sums.
struct KernelGrid2D {
  int n = 0;
  int m = 0;
  Eigen::VectorXd centers_u;  // length n
  Eigen::VectorXd centers_v;  // length m
  double sigma = 0.0;
  double width = 0.0;  // h = 1 / (2 sigma^2), shared by all kernels
  Eigen::MatrixXd weights_z;  // n x m
  Eigen::MatrixXd weights_f;  // n x m
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support;  // n x m
};

struct SurfaceModel {
  ChartParams chart;
  KernelGrid2D grid;
  std::vector<DemoPoint> demo_points;  // retained for orientation queries
  double d_query = 0.0;  // orientation neighbor radius (m)
  int k_max = 12;
};

/// Dynamic-time-warping path between two position sequences with Euclidean
/// cost; returned pairs are monotone index matches, plus the total cost.
std::pair<std::vector<std::pair<int, int>>, double> dtw_path(
    std::span<const Eigen::Vector3d> a, std::span<const Eigen::Vector3d> b);

/// Warps every demo onto the index timeline of the longest demo so all
/// outputs share its length. Orientations and forces ride along the warp.
std::vector<DemoTrajectory> dtw_align(std::span<const DemoTrajectory> demos);

/// Chart from the XOY bounding box of the projected demo points: origin at
/// the box center, scales mapping the box onto [-0.5, 0.5]^2.
ChartParams build_chart(std::span<const DemoPoint> points);

struct SurfaceFitOptions {
  double eps_support = 1e-6;  // minimum total kernel activation
  double d_query = -1.0;      // <=0: 3x median nearest-neighbor spacing
  int k_max = 12;
};

SurfaceModel fit_surface(std::span<const DemoPoint> points, const ChartParams& chart,
                         int grid_n, int grid_m, double overlap,
                         const SurfaceFitOptions& opts = {});

struct SurfaceQuery {
  double value = 0.0;
  bool supported = false;  // false when the nearest supported kernel is > 2 sigma away
};

SurfaceQuery query_height(const SurfaceModel& model, double u, double v);
SurfaceQuery query_force(const SurfaceModel& model, double u, double v);

/// Weighted intrinsic mean of the orientations of the <= k_max nearest demo
/// points within `radius` of y (default: model.d_query), with linearly
/// vanishing weights (d - dist)/d. Throws NoNeighbors when the ball is
/// empty; callers may retry with a larger radius.
UnitQuaternion query_orientation(const SurfaceModel& model, const Eigen::Vector3d& y,
                                 double radius = -1.0);

}  // namespace geodmp
