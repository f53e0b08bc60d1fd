#include "cspace/slice.hpp"

#include <algorithm>
#include <map>

#include "cspace/graph.hpp"

namespace cspace {

namespace {

// Padding sites: a large regular-ish simplex of tiny balls strictly outside
// the bounds box but enclosing it, so the triangulation always has a
// full-dimensional, well-conditioned scaffold.  The dual shapes they induce
// live far outside the bounds and are marked unbounded.
template <int N>
std::vector<Vec<N>> padding_centers(const AABox<N>& bounds) {
  Vec<N> mid;
  for (int i = 0; i < N; ++i) mid[i] = 0.5 * (bounds.lo[i] + bounds.hi[i]);
  const double h = 0.5 * bounds.diagonal();
  const double d = 4.0 * (N + 1) * std::max(h, 1e-6);
  std::vector<Vec<N>> out;
  if constexpr (N == 2) {
    for (int k = 0; k < 3; ++k) {
      const double a = 2.0 * 3.14159265358979323846 * k / 3.0 + 0.25;
      out.push_back(mid + make_vec(std::cos(a), std::sin(a)) * d);
    }
  } else {
    out.push_back(mid + make_vec(1.0, 1.0, 1.0) * (d / std::sqrt(3.0)));
    out.push_back(mid + make_vec(1.0, -1.0, -1.0) * (d / std::sqrt(3.0)));
    out.push_back(mid + make_vec(-1.0, 1.0, -1.0) * (d / std::sqrt(3.0)));
    out.push_back(mid + make_vec(-1.0, -1.0, 1.0) * (d / std::sqrt(3.0)));
  }
  return out;
}

}  // namespace

template <int N>
CollisionBallSet<N> collision_balls(const BallUnion<N>& obstacles,
                                    const BallUnion<N>& core, const Vec<N>& reference,
                                    const Orientation<N>& orientation,
                                    int orientation_id) {
  CollisionBallSet<N> out;
  out.orientation_id = orientation_id;
  out.balls.reserve(obstacles.size() * core.size());
  for (const auto& cb : core.balls) {
    const Vec<N> off = rotate(orientation, cb.center - reference);
    for (const auto& ob : obstacles.balls)
      out.balls.push_back(Ball<N>{ob.center - off, ob.radius + cb.radius});
  }
  return out;
}

template <int N>
PowerDiagram<N> weighted_voronoi(const CollisionBallSet<N>& balls,
                                 const AABox<N>& bounds, std::uint64_t seed) {
  PowerDiagram<N> pd;
  pd.bounds = bounds;
  pd.scale = bounds.diagonal();

  using RT = RegularTriangulation<N>;
  std::vector<typename RT::Site> sites;
  const auto pads = padding_centers<N>(bounds);
  const double pad_r = 1e-3 * pd.scale;
  for (const auto& p : pads) sites.push_back({p, pad_r * pad_r, true});

  // Deterministic center perturbation keyed on input index breaks
  // cospherical and coplanar degeneracies identically across runs and
  // thread counts.
  const double jit = 1e-9 * pd.scale;
  const std::uint64_t ukey = hash_u64(seed ^ static_cast<std::uint64_t>(balls.orientation_id + 1));
  std::vector<int> site_to_ball;  // site index -> collision ball index
  for (std::size_t i = 0; i < balls.balls.size(); ++i) {
    Vec<N> c = balls.balls[i].center;
    for (int k = 0; k < N; ++k)
      c[k] += jit * hash_unit(ukey ^ (i * 8 + static_cast<std::uint64_t>(k)));
    const double r = balls.balls[i].radius;
    sites.push_back({c, r * r, false});
    site_to_ball.push_back(static_cast<int>(i));
  }

  RT rt(std::move(sites));

  auto ball_of_site = [&](int s) {
    return s <= N ? -1 : site_to_ball[static_cast<std::size_t>(s) - (N + 1)];
  };

  std::vector<int> vertex_of_simplex(rt.simplices().size(), -1);
  for (int si = 0; si < static_cast<int>(rt.simplices().size()); ++si) {
    const auto& s = rt.simplices()[si];
    if (!s.alive) continue;
    typename PowerDiagram<N>::Vertex v;
    v.pos = s.ortho_center;
    v.power = s.ortho_power;
    for (int i = 0; i <= N; ++i) v.gens[i] = ball_of_site(s.v[i]);
    v.scaffold = s.scaffold;
    vertex_of_simplex[si] = static_cast<int>(pd.vertices.size());
    pd.vertices.push_back(v);
  }

  // Edges dual to facets whose N generators are all real balls.
  std::map<std::array<int, N>, std::array<int, 2>> facets;
  for (int si = 0; si < static_cast<int>(rt.simplices().size()); ++si) {
    const auto& s = rt.simplices()[si];
    if (!s.alive) continue;
    for (int d = 0; d <= N; ++d) {
      std::array<int, N> f;
      bool real = true;
      int k = 0;
      for (int i = 0; i <= N; ++i) {
        if (i == d) continue;
        f[k] = s.v[i];
        if (f[k] <= N) real = false;
        ++k;
      }
      if (!real) continue;
      auto it = facets.find(f);
      if (it == facets.end())
        facets[f] = {si, -1};
      else
        it->second[1] = si;
    }
  }
  for (const auto& [f, pair] : facets) {
    typename PowerDiagram<N>::Edge e;
    for (int i = 0; i < N; ++i) e.gens[i] = ball_of_site(f[i]);
    for (int i = 0; i < 2; ++i) {
      if (pair[i] < 0) continue;
      // An end incident to a scaffold simplex stands in for the infinite end
      // of the corresponding edge in the diagram of the real balls alone.
      e.ends[i] = rt.simplices()[pair[i]].scaffold ? -1 : vertex_of_simplex[pair[i]];
    }
    pd.edges.push_back(e);
  }

  // A ball is hidden iff its site survives in no simplex (it may have been
  // buried by insertions after its own).
  std::vector<char> seen(rt.sites().size(), 0);
  for (const auto& s : rt.simplices())
    if (s.alive)
      for (int i = 0; i <= N; ++i) seen[s.v[i]] = 1;
  for (std::size_t si = N + 1; si < rt.sites().size(); ++si)
    if (!seen[si]) pd.hidden.push_back(ball_of_site(static_cast<int>(si)));

  // Hull facets of the padding simplex carry the diagram's true half-spaces.
  // The limit of orthogonal balls along an infinite edge is the half-space
  // beyond the hyperplane through the facet's site centers.
  const auto& all = rt.sites();
  Vec<N> mid;
  for (int i = 0; i < N; ++i) mid[i] = 0.5 * (bounds.lo[i] + bounds.hi[i]);
  for (int drop = 0; drop <= N; ++drop) {
    DualShape<N> hs;
    hs.kind = DualShape<N>::Kind::Halfspace;
    hs.unbounded = true;
    // Normal of the hyperplane through the remaining N padding centers,
    // oriented away from the box middle.
    std::array<Vec<N>, N> pts;
    int k = 0;
    for (int i = 0; i <= N; ++i)
      if (i != drop) pts[k++] = all[i].pos;
    hs.center = pts[0];
    if constexpr (N == 2) {
      const Vec2 t = pts[1] - pts[0];
      hs.direction = normalized(make_vec(-t[1], t[0]));
    } else {
      const Vec3 a = pts[1] - pts[0], b = pts[2] - pts[0];
      hs.direction = normalized(make_vec(a[1] * b[2] - a[2] * b[1],
                                         a[2] * b[0] - a[0] * b[2],
                                         a[0] * b[1] - a[1] * b[0]));
    }
    if (dot(hs.direction, mid - hs.center) > 0) hs.direction = -hs.direction;
    pd.hull_halfspaces.push_back(hs);
  }
  return pd;
}

template <int N>
std::vector<DualShape<N>> dual_diagram(const PowerDiagram<N>& diagram,
                                       const AABox<N>& bounds) {
  std::vector<DualShape<N>> shapes;
  for (const auto& v : diagram.vertices) {
    if (v.power < 0) continue;  // vertex covered by the collision space
    DualShape<N> s;
    s.kind = DualShape<N>::Kind::FiniteBall;
    s.center = v.pos;
    s.radius = std::sqrt(v.power);
    // A ball reaching outside the bounds box touches territory with no
    // collision balls; it belongs to the outside world.
    s.unbounded = false;
    for (int i = 0; i < N && !s.unbounded; ++i) {
      if (v.pos[i] - s.radius < bounds.lo[i] || v.pos[i] + s.radius > bounds.hi[i])
        s.unbounded = true;
    }
    shapes.push_back(s);
  }
  for (const auto& hs : diagram.hull_halfspaces) shapes.push_back(hs);
  return shapes;
}

template <int N>
SliceFreeSpace<N> slice_components(std::vector<DualShape<N>> shapes,
                                   const AABox<N>& bounds, int orientation_id) {
  const double tol = overlap_tol(bounds.diagonal());
  const int n = static_cast<int>(shapes.size());

  // Interval sweep on the first axis, exact ball test on candidates.
  std::vector<int> order;
  std::vector<double> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    if (shapes[i].kind == DualShape<N>::Kind::Halfspace) continue;  // unbounded anyway
    lo[i] = shapes[i].center[0] - shapes[i].radius - tol;
    hi[i] = shapes[i].center[0] + shapes[i].radius + tol;
    order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lo[a] < lo[b]; });

  DisjointSet uf(n + 1);  // extra node n = the outside world
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const int i = order[oi];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const int j = order[oj];
      if (lo[j] > hi[i]) break;
      if (dist(shapes[i].center, shapes[j].center) <=
          shapes[i].radius + shapes[j].radius + tol)
        uf.unite(i, j);
    }
  }
  for (int i = 0; i < n; ++i)
    if (shapes[i].unbounded) uf.unite(i, n);

  SliceFreeSpace<N> out;
  out.orientation_id = orientation_id;
  std::map<int, int> comp_of_root;
  // The infinite component exists even when no shape is unbounded-marked
  // (it always is in practice: the hull half-spaces are).
  comp_of_root[uf.find(n)] = 0;
  out.components.push_back({});
  out.components[0].is_infinite = true;
  for (int i = 0; i < n; ++i) {
    const int root = uf.find(i);
    auto it = comp_of_root.find(root);
    if (it == comp_of_root.end()) {
      it = comp_of_root.emplace(root, static_cast<int>(out.components.size())).first;
      out.components.push_back({});
    }
    out.components[it->second].shapes.push_back(shapes[i]);
  }
  return out;
}

template <int N>
SliceFreeSpace<N> compute_slice(const BallUnion<N>& obstacles, const BallUnion<N>& core,
                                const Vec<N>& reference, const Orientation<N>& orientation,
                                int orientation_id, const AABox<N>& bounds,
                                std::uint64_t seed) {
  CollisionBallSet<N> col =
      collision_balls(obstacles, core, reference, orientation, orientation_id);
  for (const auto& b : col.balls) {
    for (int i = 0; i < N; ++i) {
      if (b.center[i] - b.radius < bounds.lo[i] || b.center[i] + b.radius > bounds.hi[i])
        throw BoundsTooSmall("collision ball escapes bounds; enlarge --bounds-inflate");
    }
  }
  PowerDiagram<N> pd = weighted_voronoi(col, bounds, seed);
  std::vector<DualShape<N>> shapes = dual_diagram(pd, bounds);
  return slice_components(std::move(shapes), bounds, orientation_id);
}

template CollisionBallSet<2> collision_balls<2>(const BallUnion<2>&, const BallUnion<2>&, const Vec2&, const Orientation<2>&, int);
template CollisionBallSet<3> collision_balls<3>(const BallUnion<3>&, const BallUnion<3>&, const Vec3&, const Orientation<3>&, int);
template PowerDiagram<2> weighted_voronoi<2>(const CollisionBallSet<2>&, const AABox<2>&, std::uint64_t);
template PowerDiagram<3> weighted_voronoi<3>(const CollisionBallSet<3>&, const AABox<3>&, std::uint64_t);
template std::vector<DualShape<2>> dual_diagram<2>(const PowerDiagram<2>&, const AABox<2>&);
template std::vector<DualShape<3>> dual_diagram<3>(const PowerDiagram<3>&, const AABox<3>&);
template SliceFreeSpace<2> slice_components<2>(std::vector<DualShape<2>>, const AABox<2>&, int);
template SliceFreeSpace<3> slice_components<3>(std::vector<DualShape<3>>, const AABox<3>&, int);
template SliceFreeSpace<2> compute_slice<2>(const BallUnion<2>&, const BallUnion<2>&, const Vec2&, const Orientation<2>&, int, const AABox<2>&, std::uint64_t);
template SliceFreeSpace<3> compute_slice<3>(const BallUnion<3>&, const BallUnion<3>&, const Vec3&, const Orientation<3>&, int, const AABox<3>&, std::uint64_t);

}  // namespace cspace
