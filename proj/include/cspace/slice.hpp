#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cspace/geometry.hpp"
#include "cspace/regular_triangulation.hpp"

namespace cspace {

struct BoundsTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <int N>
struct AABox {
  Vec<N> lo, hi;

  bool contains(const Vec<N>& p) const {
    for (int i = 0; i < N; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  double diagonal() const { return dist(lo, hi); }
};

template <int N>
struct CollisionBallSet {
  int orientation_id = -1;
  std::vector<Ball<N>> balls;  // centers X_j - R_phi(Y_i - G), radii R_j + r_i' (+delta folded into r_i')
};

// One shape of the dual diagram: a finite orthogonal ball, or the half-space
// contributed by an infinite Voronoi edge (origin on its boundary plane,
// direction pointing into the half-space).
template <int N>
struct DualShape {
  enum class Kind { FiniteBall, Halfspace };
  Kind kind = Kind::FiniteBall;
  Vec<N> center{};      // ball center, or a point on the half-space boundary
  double radius = 0;    // >= 0, balls only
  Vec<N> direction{};   // half-spaces only, unit outward
  bool unbounded = false;

  bool contains(const Vec<N>& p, double tol = 0) const {
    if (kind == Kind::Halfspace) return dot(direction, p - center) >= -tol;
    return dist(p, center) <= radius + tol;
  }
};

template <int N>
struct PowerDiagram {
  struct Vertex {
    Vec<N> pos;
    double power = 0;               // common power distance to the generators
    std::array<int, N + 1> gens{};  // collision-ball indices, -1 for padding sites
    bool scaffold = false;          // touches a padding site
  };
  struct Edge {
    std::array<int, N> gens{};  // the N generating collision balls
    int ends[2] = {-1, -1};     // vertex indices; -1 marks an infinite end
  };

  std::vector<Vertex> vertices;        // all Voronoi vertices, incl. scaffold
  std::vector<Edge> edges;             // edges dual to all-real facets
  std::vector<int> hidden;             // balls with empty power cell
  std::vector<DualShape<N>> hull_halfspaces;
  AABox<N> bounds{};
  double scale = 0;
};

template <int N>
struct SliceFreeSpace {
  struct Component {
    std::vector<DualShape<N>> shapes;
    bool is_infinite = false;
  };
  int orientation_id = -1;
  std::vector<Component> components;  // exactly one has is_infinite
};

template <int N>
CollisionBallSet<N> collision_balls(const BallUnion<N>& obstacles,
                                    const BallUnion<N>& core, const Vec<N>& reference,
                                    const Orientation<N>& orientation,
                                    int orientation_id = -1);

template <int N>
PowerDiagram<N> weighted_voronoi(const CollisionBallSet<N>& balls,
                                 const AABox<N>& bounds, std::uint64_t seed);

template <int N>
std::vector<DualShape<N>> dual_diagram(const PowerDiagram<N>& diagram,
                                       const AABox<N>& bounds);

template <int N>
SliceFreeSpace<N> slice_components(std::vector<DualShape<N>> shapes,
                                   const AABox<N>& bounds, int orientation_id);

template <int N>
SliceFreeSpace<N> compute_slice(const BallUnion<N>& obstacles, const BallUnion<N>& core,
                                const Vec<N>& reference, const Orientation<N>& orientation,
                                int orientation_id, const AABox<N>& bounds,
                                std::uint64_t seed);

// Ball-overlap tolerance shared by component and edge computations.
inline double overlap_tol(double scale) { return 1e-9 * scale; }

extern template CollisionBallSet<2> collision_balls<2>(const BallUnion<2>&, const BallUnion<2>&, const Vec2&, const Orientation<2>&, int);
extern template CollisionBallSet<3> collision_balls<3>(const BallUnion<3>&, const BallUnion<3>&, const Vec3&, const Orientation<3>&, int);
extern template PowerDiagram<2> weighted_voronoi<2>(const CollisionBallSet<2>&, const AABox<2>&, std::uint64_t);
extern template PowerDiagram<3> weighted_voronoi<3>(const CollisionBallSet<3>&, const AABox<3>&, std::uint64_t);
extern template std::vector<DualShape<2>> dual_diagram<2>(const PowerDiagram<2>&, const AABox<2>&);
extern template std::vector<DualShape<3>> dual_diagram<3>(const PowerDiagram<3>&, const AABox<3>&);
extern template SliceFreeSpace<2> slice_components<2>(std::vector<DualShape<2>>, const AABox<2>&, int);
extern template SliceFreeSpace<3> slice_components<3>(std::vector<DualShape<3>>, const AABox<3>&, int);
extern template SliceFreeSpace<2> compute_slice<2>(const BallUnion<2>&, const BallUnion<2>&, const Vec2&, const Orientation<2>&, int, const AABox<2>&, std::uint64_t);
extern template SliceFreeSpace<3> compute_slice<3>(const BallUnion<3>&, const BallUnion<3>&, const Vec3&, const Orientation<3>&, int, const AABox<3>&, std::uint64_t);

}  // namespace cspace
