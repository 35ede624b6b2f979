#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "geodmp/errors.hpp"

namespace geodmp {

/// Unit quaternion on the S3 sphere, scalar part w and imaginary part u.
/// All constructors and operations keep |norm - 1| below 1e-9.
struct UnitQuaternion {
  double w = 1.0;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();

  UnitQuaternion() = default;
  UnitQuaternion(double w_, const Eigen::Vector3d& u_) : w(w_), u(u_) {}

  static UnitQuaternion identity() { return {}; }

  /// Builds from raw components, normalizing.
  static UnitQuaternion from_wxyz(double w, double x, double y, double z);

  /// Rotation of `angle` radians about `axis` (need not be unit length).
  static UnitQuaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);

  double norm() const { return std::sqrt(w * w + u.squaredNorm()); }
  UnitQuaternion normalized() const;
  UnitQuaternion operator-() const { return {-w, -u}; }

  Eigen::Vector4d wxyz() const { return {w, u.x(), u.y(), u.z()}; }
};

/// Tangent-space image of the log map: 3-vector of half-angle radians.
using TangentVector = Eigen::Vector3d;

/// Hamilton product; result renormalized.
UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2);

UnitQuaternion quat_conj(const UnitQuaternion& q);

/// 4D inner product of the components.
double quat_dot(const UnitQuaternion& q1, const UnitQuaternion& q2);

/// Log map at the identity: arccos(w) * u / |u|, zero vector when |u| < 1e-12.
/// Output norm lies in [0, pi].
TangentVector quat_log(const UnitQuaternion& q);

/// Exp map at the identity: cos(|a|) + sin(|a|) * a / |a|, identity for a = 0.
UnitQuaternion quat_exp(const TangentVector& a);

/// S3 distance: 2|log(q1 * conj(q2))|, with the antipodal case mapping to 2*pi.
/// Range [0, 2*pi].
double quat_distance(const UnitQuaternion& q1, const UnitQuaternion& q2);

/// Geodesic interpolation between q1 (t=0) and q2 (t=1); shortest arc after
/// sign alignment.
UnitQuaternion slerp(const UnitQuaternion& q1, const UnitQuaternion& q2, double t);

/// Rotates v by q (conjugation q * (0,v) * conj(q)).
Eigen::Vector3d quat_rotate(const UnitQuaternion& q, const Eigen::Vector3d& v);

/// Flips signs in place so consecutive quaternions satisfy dot >= 0.
/// q and -q encode the same rotation; this removes spurious 2*pi jumps.
void make_sign_continuous(std::vector<UnitQuaternion>& qs);

struct GeodesicLength {
  std::vector<double> cumulative;  // cumulative[0] = 0
  double total = 0.0;
};

/// Cumulative and total geodesic length along a quaternion sequence.
/// Applies sign-continuity to a working copy before measuring.
GeodesicLength geodesic_length_series(std::span<const UnitQuaternion> qs);

struct WeightedSample {
  UnitQuaternion q;
  double w = 1.0;
};

/// Thrown by intrinsic_mean when the fixed-point iteration exhausts max_iter;
/// carries the last iterate.
class NotConvergedError : public Error {
 public:
  NotConvergedError(int iters, const UnitQuaternion& last)
      : Error("NotConverged", "no convergence after " + std::to_string(iters) + " iterations"),
        last_iterate(last) {}
  UnitQuaternion last_iterate;
};

/// Weighted intrinsic (Karcher) mean on S3: the minimizer of
/// sum_i w_i * |2 log(q_i * conj(q))|^2 for a single-hemisphere cluster.
/// Fixed point iteration q <- exp(mean_i log(q_i * conj(q))) * q, started from
/// the largest-weight sample, stopping when the mean tangent step drops
/// below tol.
UnitQuaternion intrinsic_mean(std::span<const WeightedSample> samples, double tol = 1e-10,
                              int max_iter = 100);

/// Weighted objective of intrinsic_mean, in the 2|log| metric.
double intrinsic_mean_objective(std::span<const WeightedSample> samples,
                                const UnitQuaternion& q);

}  // namespace geodmp
