#pragma once

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <vector>

#include "geodmp/dmp_common.hpp"
#include "geodmp/errors.hpp"

namespace geodmp {

/// Position trajectory parameterized by cumulative arc length. y_d and y_dd
/// are first/second derivatives with respect to s, so |y_d| is ~1 wherever
/// the path moves.
struct PositionSeries {
  Eigen::VectorXd s;
  std::vector<Eigen::Vector3d> y;
  std::vector<Eigen::Vector3d> y_d;
  std::vector<Eigen::Vector3d> y_dd;

  int size() const { return static_cast<int>(y.size()); }
  double total_length() const { return s.size() ? s[s.size() - 1] : 0.0; }
};

/// Chord-length arc parameterization: resamples the polyline at uniform
/// arc-length spacing and differentiates with central differences in s.
/// Timestamps are accepted for interface symmetry with the time-domain fit
/// but do not affect the geometry. Throws DegenerateDemo when the total
/// path length is below eps_length.
PositionSeries arc_length_resample(std::span<const Eigen::Vector3d> positions,
                                   std::span<const double> timestamps, int n_samples,
                                   double eps_length = 1e-6);

/// Arc-length DMP: spring-damper in the arc-length domain plus a learned
/// forcing term, making the generated shape independent of demo speed.
struct AlDmpModel {
  DmpGains gains;
  double L = 0.0;  // total arc length of the training demo (m)
  Eigen::Vector3d y0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Eigen::Vector3d y_d0 = Eigen::Vector3d::Zero();  // initial unit tangent
  Eigen::Vector3d scale = Eigen::Vector3d::Zero();  // regularized g - y0
  Eigen::MatrixXd weights;  // n_basis x 3
  GaussianBasis basis;
};

/// Minimum per-dimension |g - y0| before the forcing scale is clamped.
inline constexpr double kGoalEps = 1e-4;

AlDmpModel fit_al_dmp(const PositionSeries& series, int n_basis, const DmpGains& gains = {});

struct AlDmpGenOptions {
  double s_total = -1.0;          // integration horizon; default model.L
  double forcing_cutoff_s = -1.0; // forcing active on [0, cutoff); default model.L
};

/// Integrates the arc-length system from y_start toward g_new over
/// [0, s_total] with n_steps Euler steps (n_steps + 1 samples).
PositionSeries generate_al_dmp(const AlDmpModel& model, const Eigen::Vector3d& y_start,
                               const Eigen::Vector3d& g_new, int n_steps,
                               const AlDmpGenOptions& opts = {});

/// Classical time-based DMP, kept for comparison and for callers that want
/// explicit durations.
struct ClassicalDmpModel {
  DmpGains gains;
  double tau = 0.0;  // demo duration (s)
  Eigen::Vector3d y0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Eigen::Vector3d v0 = Eigen::Vector3d::Zero();  // initial velocity (m/s)
  Eigen::Vector3d scale = Eigen::Vector3d::Zero();
  Eigen::MatrixXd weights;
  GaussianBasis basis;
};

ClassicalDmpModel fit_classical_dmp(std::span<const Eigen::Vector3d> positions,
                                    std::span<const double> timestamps, int n_basis,
                                    const DmpGains& gains = {});

std::vector<Eigen::Vector3d> generate_classical_dmp(const ClassicalDmpModel& model,
                                                    const Eigen::Vector3d& y_start,
                                                    const Eigen::Vector3d& g_new, double dt,
                                                    int n_steps);

}  // namespace geodmp
