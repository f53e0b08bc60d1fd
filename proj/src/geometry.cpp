#include "cspace/geometry.hpp"

#include <algorithm>

namespace cspace {

namespace {

// Farthest-ball objective: f(c) = max_i |c - z_i| + r_i.
template <int N>
double enclosing_cost(const Vec<N>& c, const BallUnion<N>& u) {
  double f = 0;
  for (const auto& b : u.balls) f = std::max(f, dist(c, b.center) + b.radius);
  return f;
}

template <int N>
double line_search(Vec<N>& c, const Vec<N>& dir, const BallUnion<N>& u) {
  // Golden-section over step in [0, 1]; f along a line is convex.
  const double phi = 0.6180339887498949;
  double lo = 0, hi = 1;
  double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
  double f1 = enclosing_cost<N>(c + dir * m1, u);
  double f2 = enclosing_cost<N>(c + dir * m2, u);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - phi * (hi - lo);
      f1 = enclosing_cost<N>(c + dir * m1, u);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + phi * (hi - lo);
      f2 = enclosing_cost<N>(c + dir * m2, u);
    }
  }
  const double t = 0.5 * (lo + hi);
  c += dir * t;
  return enclosing_cost<N>(c, u);
}

}  // namespace

template <int N>
std::pair<Vec<N>, double> reference_and_radius(const BallUnion<N>& object) {
  Vec<N> c{};
  for (const auto& b : object.balls) c += b.center;
  c = c / static_cast<double>(object.size());

  double f = enclosing_cost<N>(c, object);
  double span = 0;
  for (const auto& b : object.balls) span = std::max(span, dist(c, b.center) + b.radius);
  if (span == 0) return {c, object.balls.front().radius};

  const double tol = 1e-12 * std::max(span, 1.0);
  for (int it = 0; it < 20000; ++it) {
    // Subgradient direction: mean of unit vectors toward the active centers.
    Vec<N> dir{};
    int active = 0;
    for (const auto& b : object.balls) {
      const double fi = dist(c, b.center) + b.radius;
      if (fi >= f - 1e-9 * span) {
        const double d = dist(c, b.center);
        if (d > 0) {
          dir += (b.center - c) / d;
          ++active;
        }
      }
    }
    if (active == 0) break;
    dir = dir / static_cast<double>(active);
    const double step = norm(dir) * f;
    if (step < tol) break;
    const double f_new = line_search<N>(c, dir * f, object);
    if (f - f_new < tol) break;
    f = f_new;
  }
  return {c, enclosing_cost<N>(c, object)};
}

template std::pair<Vec2, double> reference_and_radius<2>(const BallUnion<2>&);
template std::pair<Vec3, double> reference_and_radius<3>(const BallUnion<3>&);

}  // namespace cspace
