#pragma once

#include <optional>
#include <stdexcept>

#include "cspace/graph.hpp"

namespace cspace {

struct OutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VerdictKind {
  Disconnected,
  PossiblyConnected,
  InCollisionApprox,
  PassageAtMostDelta,
  Open,
};

struct Verdict {
  VerdictKind kind = VerdictKind::PossiblyConnected;
  std::optional<double> clearance_bound;  // set for PassageAtMostDelta
};

const char* to_string(VerdictKind k);

// A built approximation plus everything needed to recompute single slices
// on demand (slices are evicted during the build).
template <int N>
class FreeSpaceApprox {
 public:
  FreeSpaceApprox(BuildInputs<N> in, ConnectivityGraph graph)
      : in_(std::move(in)), graph_(std::move(graph)) {
    classes_ = components(graph_);
    class_of_.assign(graph_.vertices.size(), -1);
    for (int ci = 0; ci < static_cast<int>(classes_.size()); ++ci)
      for (int v : classes_[ci].vertices) class_of_[v] = ci;
  }

  const ConnectivityGraph& graph() const { return graph_; }
  const std::vector<PartitionClass>& classes() const { return classes_; }
  const BuildInputs<N>& inputs() const { return in_; }

  // Nearest-orientation slice, then the component whose shapes contain the
  // position.  nullopt = InCollisionApprox.
  std::optional<GraphVertex> locate(const Configuration<N>& c) const;

  Verdict path_nonexistence(const Configuration<N>& c1, const Configuration<N>& c2) const;
  bool is_caged(const Configuration<N>& c) const;

  int class_of_vertex(int vertex_id) const { return class_of_[vertex_id]; }

 private:
  int nearest_slice(const Orientation<N>& o) const;

  BuildInputs<N> in_;
  ConnectivityGraph graph_;
  std::vector<PartitionClass> classes_;
  std::vector<int> class_of_;
};

// Two full builds at offsets delta and 0.
template <int N>
Verdict narrow_passage(const BuildInputs<N>& base, const Configuration<N>& c1,
                       const Configuration<N>& c2, double delta);

extern template class FreeSpaceApprox<2>;
extern template class FreeSpaceApprox<3>;
extern template Verdict narrow_passage<2>(const BuildInputs<2>&, const Configuration<2>&, const Configuration<2>&, double);
extern template Verdict narrow_passage<3>(const BuildInputs<3>&, const Configuration<3>&, const Configuration<3>&, double);

}  // namespace cspace
