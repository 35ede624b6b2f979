#include "geodmp/quat.hpp"

#include <algorithm>
#include <cmath>

namespace geodmp {

namespace {
constexpr double kImagEps = 1e-12;  // |u| threshold for the log zero branch
}

UnitQuaternion UnitQuaternion::from_wxyz(double w, double x, double y, double z) {
  UnitQuaternion q{w, Eigen::Vector3d(x, y, z)};
  return q.normalized();
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (n < kImagEps) return identity();
  return {std::cos(0.5 * angle), std::sin(0.5 * angle) * axis / n};
}

UnitQuaternion UnitQuaternion::normalized() const {
  const double n = norm();
  if (n < kImagEps) return identity();
  return {w / n, u / n};
}

UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  UnitQuaternion r{q1.w * q2.w - q1.u.dot(q2.u),
                   q1.w * q2.u + q2.w * q1.u + q1.u.cross(q2.u)};
  return r.normalized();
}

UnitQuaternion quat_conj(const UnitQuaternion& q) { return {q.w, -q.u}; }

double quat_dot(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  return q1.w * q2.w + q1.u.dot(q2.u);
}

TangentVector quat_log(const UnitQuaternion& q) {
  const double un = q.u.norm();
  if (un < kImagEps) return TangentVector::Zero();
  const double w = std::clamp(q.w, -1.0, 1.0);
  return std::acos(w) * q.u / un;
}

UnitQuaternion quat_exp(const TangentVector& a) {
  const double n = a.norm();
  if (n < kImagEps) return UnitQuaternion::identity();
  return {std::cos(n), std::sin(n) * a / n};
}

double quat_distance(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  const UnitQuaternion r = quat_mul(q1, quat_conj(q2));
  if (r.w <= -1.0 + kImagEps && r.u.norm() < kImagEps) return 2.0 * M_PI;
  return 2.0 * quat_log(r).norm();
}

UnitQuaternion slerp(const UnitQuaternion& q1, const UnitQuaternion& q2, double t) {
  UnitQuaternion b = q2;
  if (quat_dot(q1, b) < 0.0) b = -b;
  const TangentVector a = quat_log(quat_mul(b, quat_conj(q1)));
  return quat_mul(quat_exp(t * a), q1);
}

Eigen::Vector3d quat_rotate(const UnitQuaternion& q, const Eigen::Vector3d& v) {
  // q * (0, v) * conj(q), expanded.
  const Eigen::Vector3d t = 2.0 * q.u.cross(v);
  return v + q.w * t + q.u.cross(t);
}

void make_sign_continuous(std::vector<UnitQuaternion>& qs) {
  for (std::size_t k = 1; k < qs.size(); ++k) {
    if (quat_dot(qs[k - 1], qs[k]) < 0.0) qs[k] = -qs[k];
  }
}

GeodesicLength geodesic_length_series(std::span<const UnitQuaternion> qs) {
  if (qs.empty()) throw EmptySequenceError("geodesic length of an empty sequence");
  std::vector<UnitQuaternion> cont(qs.begin(), qs.end());
  make_sign_continuous(cont);
  GeodesicLength out;
  out.cumulative.resize(cont.size());
  out.cumulative[0] = 0.0;
  for (std::size_t k = 1; k < cont.size(); ++k) {
    out.cumulative[k] = out.cumulative[k - 1] + quat_distance(cont[k - 1], cont[k]);
  }
  out.total = out.cumulative.back();
  return out;
}

UnitQuaternion intrinsic_mean(std::span<const WeightedSample> samples, double tol,
                              int max_iter) {
  double w_sum = 0.0;
  const WeightedSample* best = nullptr;
  for (const auto& s : samples) {
    if (s.w < 0.0) throw InvalidParamsError("negative sample weight");
    w_sum += s.w;
    if (!best || s.w > best->w) best = &s;
  }
  if (!best || w_sum <= 0.0) throw NoSamplesError("intrinsic mean needs a positive-weight sample");

  // Align all samples to the initial iterate's hemisphere.
  std::vector<WeightedSample> aligned(samples.begin(), samples.end());
  for (auto& s : aligned) {
    if (quat_dot(best->q, s.q) < 0.0) s.q = -s.q;
  }

  UnitQuaternion mean = best->q;
  for (int iter = 0; iter < max_iter; ++iter) {
    TangentVector delta = TangentVector::Zero();
    for (const auto& s : aligned) {
      if (s.w == 0.0) continue;
      delta += s.w * quat_log(quat_mul(s.q, quat_conj(mean)));
    }
    delta /= w_sum;
    mean = quat_mul(quat_exp(delta), mean);
    if (delta.norm() < tol) return mean;
  }
  throw NotConvergedError(max_iter, mean);
}

double intrinsic_mean_objective(std::span<const WeightedSample> samples,
                                const UnitQuaternion& q) {
  double obj = 0.0;
  for (const auto& s : samples) {
    const double d = 2.0 * quat_log(quat_mul(s.q, quat_conj(q))).norm();
    obj += s.w * d * d;
  }
  return obj;
}

}  // namespace geodmp
