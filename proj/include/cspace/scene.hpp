#pragma once

#include <string>
#include <variant>

#include "cspace/geometry.hpp"
#include "cspace/graph.hpp"

namespace cspace {

template <int N>
struct Scene {
  BallUnion<N> obstacles;  // may be empty
  BallUnion<N> object;     // nonempty
};

using AnyScene = std::variant<Scene<2>, Scene<3>>;

// {"dimension": 2|3, "obstacles": [{"c": [...], "r": ...}], "object": [...]}
AnyScene load_scene(const std::string& path);

// Default bounds: scene bounding box inflated by 4*rad(object) + max obstacle
// radius, optionally scaled by an extra factor.
template <int N>
AABox<N> default_bounds(const Scene<N>& scene, double object_rad, double inflate = 1.0);

std::string graph_to_json(const ConnectivityGraph& graph);
std::string graph_to_dot(const ConnectivityGraph& graph);
ConnectivityGraph graph_from_json(const std::string& text);

std::string stats_to_json(const BuildStats& stats);

extern template AABox<2> default_bounds<2>(const Scene<2>&, double, double);
extern template AABox<3> default_bounds<3>(const Scene<3>&, double, double);

}  // namespace cspace
