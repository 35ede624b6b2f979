#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "geodmp/dmp_common.hpp"
#include "geodmp/quat.hpp"

namespace geodmp {

/// Orientation trajectory parameterized by cumulative geodesic length.
/// eta_k = 2 log(q_{k+1} * conj(q_k)) / dg_k is the tangent step per unit
/// geodesic length (unit norm wherever the demo moves); eta_d is its
/// derivative with respect to g.
struct OrientationSeries {
  Eigen::VectorXd g_cum;
  std::vector<UnitQuaternion> q;
  std::vector<Eigen::Vector3d> eta;
  std::vector<Eigen::Vector3d> eta_d;
  Eigen::VectorXd phase;  // filled by generate_geo_dmp; empty otherwise

  int size() const { return static_cast<int>(q.size()); }
  double total_length() const { return g_cum.size() ? g_cum[g_cum.size() - 1] : 0.0; }

  /// Orientation at geodesic progress g by slerp between stored samples.
  UnitQuaternion at_geodesic(double g) const;
};

/// Builds the geodesic-domain series from a raw quaternion demo: applies
/// sign continuity, merges steps shorter than eps_step (stationary segments
/// would blow up eta), then differentiates in g. Throws DegenerateDemo when
/// fewer than 3 samples survive or the total length is below eps_total.
OrientationSeries estimate_orientation_series(std::span<const UnitQuaternion> qs,
                                              double eps_step = 1e-8,
                                              double eps_total = 1e-6);

/// Slerp-resamples a demo at n uniform geodesic-length stations.
std::vector<UnitQuaternion> resample_uniform_geodesic(std::span<const UnitQuaternion> qs,
                                                      int n);

/// Geodesic-length DMP on S3. The transformation-system state is L*eta, so
/// the attractor runs at unit geodesic speed when converged.
struct GeoDmpModel {
  DmpGains gains;
  double L = 0.0;  // total geodesic length of the training demo (rad)
  UnitQuaternion q0;
  UnitQuaternion qg;
  Eigen::Vector3d eta0 = Eigen::Vector3d::Zero();  // initial unit tangent
  Eigen::Vector3d scale = Eigen::Vector3d::Zero();  // regularized log(qg * conj(q0))
  Eigen::MatrixXd weights;  // n_basis x 3
  GaussianBasis basis;
};

inline constexpr double kOriGoalEps = 1e-4;  // rad, per tangent component

struct GeoFitOptions {
  int n_fit = 200;  // uniform-in-g downsample before fitting; 0 disables
};

GeoDmpModel fit_geo_dmp(const OrientationSeries& series, int n_basis,
                        const DmpGains& gains = {}, const GeoFitOptions& opts = {});

struct GeoGenOptions {
  double g_total = -1.0;          // integration horizon; default model.L
  double forcing_cutoff_g = -1.0; // forcing active on [0, cutoff); default model.L
};

/// Integrates the geodesic-domain system from q_start toward q_goal over
/// [0, g_total] with n_steps Euler steps, renormalizing every step. The
/// returned series carries the closed-form phase used for the forcing term.
OrientationSeries generate_geo_dmp(const GeoDmpModel& model, const UnitQuaternion& q_start,
                                   const UnitQuaternion& q_goal, int n_steps,
                                   const GeoGenOptions& opts = {});

/// Replays a geodesic-domain series against the clock: integrates
/// dg = speed(g) * dt and samples orientations by slerp. The traversed
/// geometric path does not depend on the speed profile.
std::vector<std::pair<double, UnitQuaternion>> time_playback(
    const OrientationSeries& series, const std::function<double(double)>& speed, double dt);

/// Time-based quaternion DMP, kept as an evaluation baseline. State eta is
/// the scaled angular velocity tau * omega.
struct TimeQuatDmpModel {
  DmpGains gains;
  double tau = 0.0;
  UnitQuaternion q0;
  UnitQuaternion qg;
  Eigen::Vector3d eta0 = Eigen::Vector3d::Zero();  // tau * omega(0)
  Eigen::Vector3d scale = Eigen::Vector3d::Zero();
  Eigen::MatrixXd weights;
  GaussianBasis basis;
};

TimeQuatDmpModel fit_time_quat_dmp(std::span<const UnitQuaternion> qs,
                                   std::span<const double> timestamps, int n_basis,
                                   const DmpGains& gains = {});

std::vector<UnitQuaternion> generate_time_quat_dmp(const TimeQuatDmpModel& model,
                                                   const UnitQuaternion& q_start,
                                                   const UnitQuaternion& q_goal, double dt,
                                                   int n_steps);

}  // namespace geodmp
