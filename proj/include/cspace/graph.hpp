#pragma once

#include <cstdint>
#include <vector>

#include "cspace/rotation_grid.hpp"
#include "cspace/slice.hpp"

namespace cspace {

struct GraphVertex {
  int slice = -1;      // orientation index
  int component = -1;  // component index within the slice
  bool is_infinite = false;
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n = 0) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
  }
  int find(int a) const {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[b] = a;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  mutable std::vector<int> parent_;
};

struct ConnectivityGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // vertex index pairs, u < v
  std::vector<int> slice_vertex_offset;    // vertex id of (slice, 0); size = #slices + 1
  DisjointSet partition;

  int vertex_id(int slice, int component) const {
    return slice_vertex_offset[slice] + component;
  }
  int components_in_slice(int slice) const {
    return slice_vertex_offset[slice + 1] - slice_vertex_offset[slice];
  }
};

struct PartitionClass {
  std::vector<int> vertices;
  bool unbounded = false;
};

struct BuildStats {
  double wall_seconds = 0;
  double slice_seconds = 0;  // cumulative across workers
  double edge_seconds = 0;
  int peak_resident_slices = 0;
  int slices = 0;
  int total_components = 0;
  int bounded_classes = 0;
  int unbounded_classes = 0;
};

template <int N>
struct BuildInputs {
  const BallUnion<N>* obstacles = nullptr;
  const RigidObjectModel<N>* object = nullptr;
  const OrientationGrid<N>* grid = nullptr;
  EpsilonPlan plan;
  AABox<N> bounds{};
  std::uint64_t seed = 0;
  bool strict_edges = false;
};

// Edges between component indices of two adjacent slices: the two infinite
// components are linked unconditionally; finite pairs link iff their shape
// sets intersect (interval-sweep broad phase, exact ball test narrow phase).
template <int N>
std::vector<std::pair<int, int>> add_edges(const SliceFreeSpace<N>& a,
                                           const SliceFreeSpace<N>& b, double scale);

// Sampling verification: probe a cover of each overlap lens; keep the
// edge unless every sample point is inside colA union colB.
template <int N>
bool strict_edge_check(const typename SliceFreeSpace<N>::Component& a,
                       const typename SliceFreeSpace<N>::Component& b,
                       const CollisionBallSet<N>& col_a, const CollisionBallSet<N>& col_b,
                       double scale, std::uint64_t seed);

template <int N>
ConnectivityGraph build_sequential(const BuildInputs<N>& in, BuildStats* stats = nullptr);

template <int N>
ConnectivityGraph build_parallel(const BuildInputs<N>& in, int workers,
                                 BuildStats* stats = nullptr);

std::vector<PartitionClass> components(const ConnectivityGraph& graph);

extern template std::vector<std::pair<int, int>> add_edges<2>(const SliceFreeSpace<2>&, const SliceFreeSpace<2>&, double);
extern template std::vector<std::pair<int, int>> add_edges<3>(const SliceFreeSpace<3>&, const SliceFreeSpace<3>&, double);
extern template bool strict_edge_check<2>(const SliceFreeSpace<2>::Component&, const SliceFreeSpace<2>::Component&, const CollisionBallSet<2>&, const CollisionBallSet<2>&, double, std::uint64_t);
extern template bool strict_edge_check<3>(const SliceFreeSpace<3>::Component&, const SliceFreeSpace<3>::Component&, const CollisionBallSet<3>&, const CollisionBallSet<3>&, double, std::uint64_t);
extern template ConnectivityGraph build_sequential<2>(const BuildInputs<2>&, BuildStats*);
extern template ConnectivityGraph build_sequential<3>(const BuildInputs<3>&, BuildStats*);
extern template ConnectivityGraph build_parallel<2>(const BuildInputs<2>&, int, BuildStats*);
extern template ConnectivityGraph build_parallel<3>(const BuildInputs<3>&, int, BuildStats*);

}  // namespace cspace
