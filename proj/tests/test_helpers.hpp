#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is built from the low-level quaternion primitives only, so the
// higher-level code under test is never used to produce its own expected
// values.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "geodmp/quat.hpp"

namespace geodmp::testing {

inline UnitQuaternion random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector4d v(g(rng), g(rng), g(rng), g(rng));
  while (v.norm() < 1e-6) v = {g(rng), g(rng), g(rng), g(rng)};
  v.normalize();
  return {v[0], Eigen::Vector3d(v[1], v[2], v[3])};
}

inline Eigen::Vector3d random_tangent(std::mt19937_64& rng, double max_norm) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d a(g(rng), g(rng), g(rng));
  if (a.norm() < 1e-9) a = {1.0, 0.0, 0.0};
  std::uniform_real_distribution<double> u(0.0, max_norm);
  return a.normalized() * u(rng);
}

/// Grid-search minimizer of the weighted squared-geodesic-distance
/// objective: exhaustive over a tangent-space box around the chordal mean
/// at `step_rad` resolution (measured in the 2|log| metric).
inline UnitQuaternion karcher_grid_oracle(std::span<const WeightedSample> samples,
                                          double step_rad) {
  // Chordal (normalized Euclidean) mean as the grid center; independent of
  // the fixed-point iteration under test.
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  const UnitQuaternion& anchor = samples[0].q;
  for (const auto& s : samples) {
    UnitQuaternion q = s.q;
    if (quat_dot(anchor, q) < 0.0) q = -q;
    acc += s.w * q.wxyz();
  }
  acc.normalize();
  const UnitQuaternion center{acc[0], Eigen::Vector3d(acc[1], acc[2], acc[3])};

  double max_d = 0.0;
  for (const auto& s : samples) max_d = std::max(max_d, quat_distance(center, s.q));
  const double h = 0.5 * step_rad;        // tangent step -> step_rad in distance
  const double radius = 0.5 * max_d + 2.0 * h;
  const int n = static_cast<int>(std::ceil(radius / h));

  auto objective = [&](const UnitQuaternion& q) {
    double obj = 0.0;
    for (const auto& s : samples) {
      const Eigen::Vector3d a = quat_log(quat_mul(s.q, quat_conj(q)));
      obj += s.w * 4.0 * a.squaredNorm();
    }
    return obj;
  };

  UnitQuaternion best = center;
  double best_obj = objective(center);
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      for (int k = -n; k <= n; ++k) {
        const Eigen::Vector3d a(i * h, j * h, k * h);
        const UnitQuaternion cand = quat_mul(quat_exp(a), center);
        const double obj = objective(cand);
        if (obj < best_obj) {
          best_obj = obj;
          best = cand;
        }
      }
    }
  }
  return best;
}

/// Discrete Frechet distance between two position paths (O(n*m) dynamic
/// program).
inline double discrete_frechet(std::span<const Eigen::Vector3d> a,
                               std::span<const Eigen::Vector3d> b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::vector<std::vector<double>> ca(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double d = (a[i] - b[j]).norm();
      if (i == 0 && j == 0) {
        ca[i][j] = d;
      } else if (i == 0) {
        ca[i][j] = std::max(ca[i][j - 1], d);
      } else if (j == 0) {
        ca[i][j] = std::max(ca[i - 1][j], d);
      } else {
        ca[i][j] =
            std::max(std::min({ca[i - 1][j], ca[i][j - 1], ca[i - 1][j - 1]}), d);
      }
    }
  }
  return ca[n - 1][m - 1];
}

/// Max geodesic deviation between two orientation paths after registering
/// both on a uniform normalized-geodesic-length grid (pure geometry; the
/// parameterizations of the inputs do not matter).
inline double max_geodesic_deviation(std::span<const UnitQuaternion> a,
                                     std::span<const UnitQuaternion> b, int n_probe = 200);

namespace detail {
inline UnitQuaternion sample_at(const std::vector<UnitQuaternion>& qs,
                                const std::vector<double>& cum, double g) {
  if (g <= cum.front()) return qs.front();
  if (g >= cum.back()) return qs.back();
  std::size_t lo = 0, hi = cum.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (cum[mid] <= g ? lo : hi) = mid;
  }
  const double dg = cum[hi] - cum[lo];
  return slerp(qs[lo], qs[hi], dg > 0.0 ? (g - cum[lo]) / dg : 0.0);
}
}  // namespace detail

inline double max_geodesic_deviation(std::span<const UnitQuaternion> a,
                                     std::span<const UnitQuaternion> b, int n_probe) {
  std::vector<UnitQuaternion> qa(a.begin(), a.end());
  std::vector<UnitQuaternion> qb(b.begin(), b.end());
  make_sign_continuous(qa);
  make_sign_continuous(qb);
  const GeodesicLength la = geodesic_length_series(qa);
  const GeodesicLength lb = geodesic_length_series(qb);
  double worst = 0.0;
  for (int k = 0; k < n_probe; ++k) {
    const double s = static_cast<double>(k) / (n_probe - 1);
    const UnitQuaternion pa = detail::sample_at(qa, la.cumulative, s * la.total);
    const UnitQuaternion pb = detail::sample_at(qb, lb.cumulative, s * lb.total);
    worst = std::max(worst, quat_distance(pa, pb));
  }
  return worst;
}

// Analytic demo generators -------------------------------------------------

/// Helix positions sampled at `warp(progress)`; warp = identity gives
/// uniform sampling.
inline std::vector<Eigen::Vector3d> helix_path(int n, double turns = 1.5,
                                               double radius = 0.1, double pitch = 0.05,
                                               double (*warp)(double) = nullptr) {
  std::vector<Eigen::Vector3d> out(n);
  for (int k = 0; k < n; ++k) {
    double p = static_cast<double>(k) / (n - 1);
    if (warp) p = warp(p);
    const double th = 2.0 * M_PI * turns * p;
    out[k] = {radius * std::cos(th), radius * std::sin(th), pitch * p};
  }
  return out;
}

/// Single-axis rotation sweep from 0 to `angle` about `axis`.
inline std::vector<UnitQuaternion> axis_sweep(int n, const Eigen::Vector3d& axis,
                                              double angle, double (*warp)(double) = nullptr) {
  std::vector<UnitQuaternion> out(n);
  for (int k = 0; k < n; ++k) {
    double p = static_cast<double>(k) / (n - 1);
    if (warp) p = warp(p);
    out[k] = UnitQuaternion::from_axis_angle(axis, angle * p);
  }
  return out;
}

/// Smooth three-axis compound rotation, nontrivial but moderate curvature.
inline std::vector<UnitQuaternion> compound_rotation(int n, double (*warp)(double) = nullptr) {
  std::vector<UnitQuaternion> out(n);
  for (int k = 0; k < n; ++k) {
    double p = static_cast<double>(k) / (n - 1);
    if (warp) p = warp(p);
    const UnitQuaternion qx = UnitQuaternion::from_axis_angle({1, 0, 0}, 0.9 * p);
    const UnitQuaternion qy = UnitQuaternion::from_axis_angle({0, 1, 0}, 0.6 * std::sin(M_PI * p));
    const UnitQuaternion qz = UnitQuaternion::from_axis_angle({0, 0, 1}, 0.4 * p * p);
    out[k] = quat_mul(qx, quat_mul(qy, qz));
  }
  return out;
}

inline double quadratic_warp(double p) { return p * p; }

}  // namespace geodmp::testing
