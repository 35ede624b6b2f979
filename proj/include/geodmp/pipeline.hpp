#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "geodmp/dmp_orientation.hpp"
#include "geodmp/dmp_position.hpp"
#include "geodmp/surface.hpp"

namespace geodmp {

/// Jointly sampled position/orientation/force reference indexed by a shared
/// progress variable lambda in [0, 1].
struct SyncTrajectory {
  std::vector<double> lambda;
  std::vector<Eigen::Vector3d> y;
  std::vector<UnitQuaternion> q;
  std::vector<double> f;
  std::vector<double> s_cum;  // cumulative arc length
  std::vector<double> g_cum;  // cumulative geodesic length
  std::vector<double> t;      // timestamps; empty unless a speed profile ran
  std::vector<double> phase;  // shared orientation/force phase; empty for references
  Eigen::Vector2d start_uv = Eigen::Vector2d::Zero();
  Eigen::Vector2d end_uv = Eigen::Vector2d::Zero();

  int size() const { return static_cast<int>(lambda.size()); }
  double arc_length() const { return s_cum.empty() ? 0.0 : s_cum.back(); }
  double geodesic_length() const { return g_cum.empty() ? 0.0 : g_cum.back(); }
};

/// Reference trajectory between two chart points: linear (u,v) interpolation
/// with heights, orientations, and forces queried from the surface model.
/// Orientation queries retry with a doubled radius up to 3 times; any sample
/// that stays unsupported raises UnsupportedRegion.
SyncTrajectory generate_reference(const SurfaceModel& surface,
                                  const Eigen::Vector2d& start_uv,
                                  const Eigen::Vector2d& end_uv, int n_u);

/// Normalized Gaussian-kernel regression of force over the phase variable.
/// No goal attractor: grinding force has nothing to converge to.
struct ForceKernelModel {
  GaussianBasis basis;
  Eigen::VectorXd weights;
  std::vector<bool> support;
};

ForceKernelModel fit_force_kernels(std::span<const double> f, std::span<const double> phase,
                                   int n_basis, double alpha_x = 4.0);

double query_force_kernels(const ForceKernelModel& model, double x);

/// Everything needed to execute one skill between two surface points. A
/// constant-orientation reference yields no Geo-DMP; execution then holds
/// q_const and the force phase falls back to arc length.
struct SkillBundle {
  AlDmpModel al;
  std::optional<GeoDmpModel> geo;
  UnitQuaternion q_const;
  ForceKernelModel force;
  Eigen::Vector2d start_uv = Eigen::Vector2d::Zero();
  Eigen::Vector2d end_uv = Eigen::Vector2d::Zero();
};

struct EncodeOptions {
  int n_resample_pos = 200;
  int n_fit_ori = 200;
};

SkillBundle encode_skill(const SyncTrajectory& ref, int n_basis_pos, int n_basis_ori,
                         int n_basis_force, const DmpGains& gains = {},
                         const EncodeOptions& opts = {});

/// Integrates the bundle over master progress lambda_k = k / (n_steps - 1):
/// position at s = lambda * L_s, orientation at g = lambda * L_g, force at
/// the orientation phase. The optional speed profile (d lambda / dt) only
/// fills timestamps; geometry is untouched.
SyncTrajectory execute_skill(const SkillBundle& bundle, int n_steps,
                             const std::function<double(double)>& speed = {});

struct ErrorReport {
  double pos_rms = 0.0;
  double pos_max = 0.0;
  double ori_rms = 0.0;
  double ori_max = 0.0;
  double force_rms = 0.0;
};

/// Per-sample Euclidean and geodesic errors between two trajectories.
/// Unequal lengths are resampled onto the first argument's lambda grid
/// unless allow_resample is false (then LengthMismatch).
ErrorReport evaluate(const SyncTrajectory& generated, const SyncTrajectory& truth,
                     bool allow_resample = true);

enum class ScenarioKind { plane, sine_surface, c_chamfer };
enum class TimeWarp { none, quadratic, piecewise };

struct ScenarioParams {
  double x_min = 0.0, x_max = 0.4;   // m
  double y_min = 0.0, y_max = 0.3;   // m
  double z0 = 0.1;                   // base height (m)
  double slope_x = 0.1, slope_y = 0.05;  // plane gradients
  double amplitude = 0.015;          // sine amplitude (m)
  double cycles_x = 1.0, cycles_y = 1.0;
  double radius = 0.12;              // chamfer arc radius (m)
  double chamfer_angle = M_PI / 4.0;
  int n_sweeps = 8;
  int n_points = 200;
  double duration = 5.0;             // s
  double force_base = 10.0, force_span = 5.0;  // N
};

/// Analytic ground truth kept alongside synthetic demos.
struct AnalyticTruth {
  std::function<double(double, double)> height;          // (x, y) -> z
  std::function<Eigen::Vector3d(double, double)> normal;  // (x, y) -> unit normal
  std::function<double(double, double)> force;           // (x, y) -> N
  ScenarioParams params;
};

struct Scenario {
  std::vector<DemoTrajectory> demos;
  AnalyticTruth truth;
};

/// Synthetic demo sweeps over an analytic surface, orientation = surface
/// normal, plus optional Gaussian position noise and timestamp warps.
Scenario synth_scenario(ScenarioKind kind, const ScenarioParams& params, double noise,
                        TimeWarp warp, std::uint64_t seed = 0);

/// Quaternion rotating the tool z-axis onto `normal` by the minimal
/// rotation; the antipodal case flips about the x-axis.
UnitQuaternion quat_from_normal(const Eigen::Vector3d& normal);

/// Analytic reference between two surface points, for evaluation.
SyncTrajectory truth_line(const AnalyticTruth& truth, const Eigen::Vector2d& xy_start,
                          const Eigen::Vector2d& xy_end, int n_u);

/// Wraps a recorded demo as a SyncTrajectory (lambda from timestamps when
/// they increase, sample index otherwise).
SyncTrajectory sync_from_demo(const DemoTrajectory& demo);

}  // namespace geodmp
