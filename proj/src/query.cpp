#include "cspace/query.hpp"

#include <cmath>

namespace cspace {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Disconnected: return "disconnected";
    case VerdictKind::PossiblyConnected: return "possibly-connected";
    case VerdictKind::InCollisionApprox: return "in-collision-approx";
    case VerdictKind::PassageAtMostDelta: return "passage-at-most-delta";
    case VerdictKind::Open: return "open";
  }
  return "unknown";
}

namespace {

double orient_dist(double a, double b) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

double orient_dist(const Quat& a, const Quat& b) { return angular_distance(a, b); }

}  // namespace

template <int N>
int FreeSpaceApprox<N>::nearest_slice(const Orientation<N>& o) const {
  int best = 0;
  double best_d = orient_dist(in_.grid->samples[0], o);
  for (int s = 1; s < in_.grid->size(); ++s) {
    const double d = orient_dist(in_.grid->samples[s], o);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

template <int N>
std::optional<GraphVertex> FreeSpaceApprox<N>::locate(const Configuration<N>& c) const {
  if (!in_.bounds.contains(c.position))
    throw OutOfBounds("configuration position outside the computed bounds");
  const int s = nearest_slice(c.orientation);
  const BallUnion<N> core = epsilon_core(offset(in_.object->shape, in_.plan.delta),
                                         in_.plan.epsilon);
  const SliceFreeSpace<N> fs = compute_slice(*in_.obstacles, core, in_.object->reference,
                                             in_.grid->samples[s], s, in_.bounds, in_.seed);
  for (int ci = 0; ci < static_cast<int>(fs.components.size()); ++ci)
    for (const auto& shape : fs.components[ci].shapes)
      if (shape.contains(c.position)) return graph_.vertices[graph_.vertex_id(s, ci)];
  return std::nullopt;
}

template <int N>
Verdict FreeSpaceApprox<N>::path_nonexistence(const Configuration<N>& c1,
                                              const Configuration<N>& c2) const {
  const auto v1 = locate(c1);
  const auto v2 = locate(c2);
  if (!v1 || !v2) return {VerdictKind::InCollisionApprox, std::nullopt};
  const int id1 = graph_.vertex_id(v1->slice, v1->component);
  const int id2 = graph_.vertex_id(v2->slice, v2->component);
  if (class_of_[id1] != class_of_[id2]) return {VerdictKind::Disconnected, std::nullopt};
  return {VerdictKind::PossiblyConnected, std::nullopt};
}

template <int N>
bool FreeSpaceApprox<N>::is_caged(const Configuration<N>& c) const {
  const auto v = locate(c);
  if (!v) return false;  // covered by the approximation; nothing to certify
  return !classes_[class_of_[graph_.vertex_id(v->slice, v->component)]].unbounded;
}

template <int N>
Verdict narrow_passage(const BuildInputs<N>& base, const Configuration<N>& c1,
                       const Configuration<N>& c2, double delta) {
  BuildInputs<N> thin = base;
  thin.plan.delta = 0;
  FreeSpaceApprox<N> f0(thin, build_sequential(thin));
  const Verdict v0 = f0.path_nonexistence(c1, c2);
  if (v0.kind != VerdictKind::PossiblyConnected) return v0;

  BuildInputs<N> fat = base;
  fat.plan.delta = delta;
  FreeSpaceApprox<N> fd(fat, build_sequential(fat));
  const Verdict vd = fd.path_nonexistence(c1, c2);
  if (vd.kind == VerdictKind::PossiblyConnected) return {VerdictKind::Open, std::nullopt};
  // Connected without the offset, blocked with it: any corridor is narrower
  // than the offset.
  return {VerdictKind::PassageAtMostDelta, delta};
}

template class FreeSpaceApprox<2>;
template class FreeSpaceApprox<3>;
template Verdict narrow_passage<2>(const BuildInputs<2>&, const Configuration<2>&, const Configuration<2>&, double);
template Verdict narrow_passage<3>(const BuildInputs<3>&, const Configuration<3>&, const Configuration<3>&, double);

}  // namespace cspace
