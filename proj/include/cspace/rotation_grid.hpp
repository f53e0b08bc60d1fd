#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspace/geometry.hpp"
#include "cspace/quaternion.hpp"

namespace cspace {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TargetUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpsilonExceedsObject : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <int N>
struct OrientationGrid {
  std::vector<Orientation<N>> samples;
  std::vector<std::vector<int>> adjacency;  // symmetric, no self loops
  double dispersion = 0;                    // radians, angular-distance metric

  int size() const { return static_cast<int>(samples.size()); }
};

struct EpsilonPlan {
  double epsilon = 0;
  double delta = 0;
  double dispersion = 0;
  double rad = 0;
};

// s equally spaced angles over [0, 2pi) with circular adjacency.
OrientationGrid<2> so2_grid(int s);

// Whitespace-separated rows "w x y z", '#' starts a comment line.
std::vector<Quat> load_grid_file(const std::string& path);

// Randomized dispersion estimate: random restarts, local ascent of the
// distance-to-set function on the unit 3-sphere, nearest-neighbor chord
// converted by 2*asin(|w-v|/2). Lower bound that improves with restarts.
double estimate_dispersion(const std::vector<Quat>& samples, int restarts,
                           std::uint64_t seed);

// Stratified random candidates over S^3 with antipode folding, greedy
// farthest-point insertion until the estimated dispersion meets the target.
std::vector<Quat> generate_grid(double target_dispersion, std::uint64_t seed,
                                std::size_t sample_budget = 1000000);

// Edge (p, q) iff rho(p, q) < 2*Delta; chord-radius index queries on both p
// and -p, then exact filtering.
OrientationGrid<3> build_adjacency(std::vector<Quat> samples, double dispersion);

// Conservative bound epsilon = (1 + margin) * 2 sin(Delta) * rad.  The
// half-angle variant (2 sin(Delta/2) * rad) is available for comparisons.
EpsilonPlan choose_epsilon(double dispersion, double rad, double delta,
                           double min_object_radius, double margin = 0.05,
                           bool half_angle_variant = false);

}  // namespace cspace
