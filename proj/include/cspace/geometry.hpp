#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cspace/quaternion.hpp"
#include "cspace/vec.hpp"

namespace cspace {

struct EmptyCoreError : std::runtime_error {
  EmptyCoreError() : std::runtime_error("epsilon core is empty: epsilon exceeds every ball radius") {}
};

template <int N>
struct Ball {
  Vec<N> center;
  double radius = 0;  // > 0 for scene balls
};

template <int N>
struct BallUnion {
  std::vector<Ball<N>> balls;

  bool empty() const { return balls.empty(); }
  std::size_t size() const { return balls.size(); }
};

// Orientation representation: angle for the plane, unit quaternion in 3D.
template <int N>
struct OrientTraits;

template <>
struct OrientTraits<2> {
  using type = double;
};

template <>
struct OrientTraits<3> {
  using type = Quat;
};

template <int N>
using Orientation = typename OrientTraits<N>::type;

inline Vec2 rotate(double angle, const Vec2& v) {
  const double c = std::cos(angle), s = std::sin(angle);
  return make_vec(c * v[0] - s * v[1], s * v[0] + c * v[1]);
}

inline Vec3 rotate(const Quat& q, const Vec3& v) { return q.rotate(v); }

template <int N>
struct Configuration {
  Vec<N> position;  // position of the object's reference point
  Orientation<N> orientation{};
};

template <int N>
double power_distance(const Vec<N>& x, const Ball<N>& b) {
  return norm2(x - b.center) - b.radius * b.radius;
}

// Per-ball radius shrink; a conservative subset of the true eps-core.
template <int N>
BallUnion<N> epsilon_core(const BallUnion<N>& object, double eps) {
  BallUnion<N> core;
  for (const auto& b : object.balls) {
    if (b.radius > eps) core.balls.push_back(Ball<N>{b.center, b.radius - eps});
  }
  if (core.empty()) throw EmptyCoreError{};
  return core;
}

template <int N>
BallUnion<N> offset(const BallUnion<N>& object, double delta) {
  BallUnion<N> out = object;
  for (auto& b : out.balls) b.radius += delta;
  return out;
}

// Center of the minimal enclosing sphere of the union, found by repeated
// exact line search toward the set of farthest balls.
template <int N>
std::pair<Vec<N>, double> reference_and_radius(const BallUnion<N>& object);

template <int N>
struct RigidObjectModel {
  BallUnion<N> shape;
  Vec<N> reference;
  double radius = 0;  // max over balls of |reference - center| + radius

  static RigidObjectModel make(BallUnion<N> shape) {
    RigidObjectModel m;
    auto [g, rad] = reference_and_radius(shape);
    m.shape = std::move(shape);
    m.reference = g;
    m.radius = rad;
    return m;
  }
};

template <int N>
double min_radius(const BallUnion<N>& u) {
  double r = u.balls.front().radius;
  for (const auto& b : u.balls) r = std::min(r, b.radius);
  return r;
}

extern template std::pair<Vec2, double> reference_and_radius<2>(const BallUnion<2>&);
extern template std::pair<Vec3, double> reference_and_radius<3>(const BallUnion<3>&);

}  // namespace cspace
