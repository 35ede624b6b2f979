#pragma once

#include <string>

#include "geodmp/pipeline.hpp"
#include "geodmp/surface.hpp"

namespace geodmp {

/// Tunables exposed through the CLI config file. Every field has the
/// module default; `dump_config` prints them all.
struct Config {
  DmpGains gains;
  int n_basis_pos = 50;
  int n_basis_ori = 30;
  int n_basis_force = 20;
  int grid_n = 20;
  int grid_m = 20;
  double overlap = 1.0;
  double d_query = 0.0;  // 0 = auto (3x median nearest-neighbor spacing)
  int k_max = 12;
  int n_fit_ori = 200;
  int n_resample_pos = 200;
  int steps = 1000;
};

/// Parses a key=value config file ('#' starts a comment). Unknown keys are
/// rejected so typos fail loudly.
Config load_config(const std::string& path);
void apply_config_line(Config& cfg, const std::string& line, int line_no);
std::string dump_config(const Config& cfg);

/// Demo recording format: comma-separated text with the mandatory header
/// t,x,y,z,qw,qx,qy,qz,f (seconds, meters, scalar-first quaternion,
/// newtons). Quaternions are normalized on load; deviations beyond 1e-3
/// raise BadQuaternionNorm.
DemoTrajectory load_trajectory(const std::string& path);
void save_trajectory(const DemoTrajectory& traj, const std::string& path);

void save_sync_trajectory(const SyncTrajectory& tr, const std::string& path);

/// Versioned JSON model files. Doubles are written with shortest
/// round-trip decimals, so load(save(m)) reproduces every parameter
/// bit for bit.
void save_surface_model(const SurfaceModel& model, const std::string& path);
SurfaceModel load_surface_model(const std::string& path);

void save_skill_bundle(const SkillBundle& bundle, const std::string& path);
SkillBundle load_skill_bundle(const std::string& path);

/// Formats a double with enough digits (%.17g) to survive a parse round
/// trip exactly.
std::string format_double(double v);

}  // namespace geodmp
