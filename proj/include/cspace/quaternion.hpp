#pragma once

#include <cmath>

#include "cspace/vec.hpp"

namespace cspace {

struct Quat {
  double w = 1, x = 0, y = 0, z = 0;

  Quat conj() const { return {w, -x, -y, -z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quat operator*(const Quat& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }

  Vec3 rotate(const Vec3& v) const {
    // q v q*, expanded
    const Vec3 u = make_vec(x, y, z);
    const Vec3 c = make_vec(u[1] * v[2] - u[2] * v[1],
                            u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0]);
    return v + (c * w + make_vec(u[1] * c[2] - u[2] * c[1],
                                 u[2] * c[0] - u[0] * c[2],
                                 u[0] * c[1] - u[1] * c[0])) * 2.0;
  }

  double imag_norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double quat_dot(const Quat& p, const Quat& q) {
  return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

// Angular distance between rotations, arccos(|<p,q>|); antipode-invariant,
// values in [0, pi/2].
inline double angular_distance(const Quat& p, const Quat& q) {
  double d = std::abs(quat_dot(p, q));
  if (d > 1.0) d = 1.0;
  return std::acos(d);
}

// Maximum displacement of any object point under the rotation between p and q.
inline double displacement(const Quat& p, const Quat& q, double rad) {
  return 2.0 * std::sin(angular_distance(p, q)) * rad;
}

// 2D overload: rotation by the angle difference.
inline double displacement(double a, double b, double rad) {
  return 2.0 * std::abs(std::sin((a - b) * 0.5)) * rad;
}

// Canonical hemisphere representative: w >= 0, ties broken by the first
// nonzero coordinate.
inline Quat canonical(const Quat& q) {
  if (q.w > 0) return q;
  if (q.w < 0) return {-q.w, -q.x, -q.y, -q.z};
  if (q.x != 0) return q.x > 0 ? q : Quat{-q.w, -q.x, -q.y, -q.z};
  if (q.y != 0) return q.y > 0 ? q : Quat{-q.w, -q.x, -q.y, -q.z};
  return q.z >= 0 ? q : Quat{-q.w, -q.x, -q.y, -q.z};
}

}  // namespace cspace
