#include "cspace/scene.hpp"

#include <fstream>
#include <sstream>

#include "cspace/rotation_grid.hpp"
#include "json.hpp"

namespace cspace {

namespace {

using nlohmann::json;

template <int N>
BallUnion<N> parse_balls(const json& arr, const char* what) {
  BallUnion<N> u;
  if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array");
  for (const auto& e : arr) {
    if (!e.is_object() || !e.contains("c") || !e.contains("r"))
      throw ParseError(std::string(what) + " entries need \"c\" and \"r\"");
    const auto& c = e.at("c");
    if (!c.is_array() || c.size() != N)
      throw ParseError(std::string(what) + ": \"c\" must have " + std::to_string(N) +
                       " coordinates");
    Ball<N> b;
    for (int i = 0; i < N; ++i) b.center[i] = c.at(i).get<double>();
    b.radius = e.at("r").get<double>();
    if (!(b.radius > 0)) throw ParseError(std::string(what) + ": radii must be positive");
    u.balls.push_back(b);
  }
  return u;
}

template <int N>
Scene<N> parse_scene(const json& j) {
  Scene<N> s;
  s.obstacles = parse_balls<N>(j.value("obstacles", json::array()), "obstacles");
  if (!j.contains("object")) throw ParseError("scene needs an \"object\" array");
  s.object = parse_balls<N>(j.at("object"), "object");
  if (s.object.empty()) throw ParseError("object must contain at least one ball");
  return s;
}

}  // namespace

AnyScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  const int dim = j.value("dimension", 0);
  if (dim == 2) return parse_scene<2>(j);
  if (dim == 3) return parse_scene<3>(j);
  throw ParseError("\"dimension\" must be 2 or 3");
}

template <int N>
AABox<N> default_bounds(const Scene<N>& scene, double object_rad, double inflate) {
  AABox<N> box;
  bool first = true;
  double max_obs_r = 0;
  for (const auto& b : scene.obstacles.balls) {
    max_obs_r = std::max(max_obs_r, b.radius);
    for (int i = 0; i < N; ++i) {
      const double lo = b.center[i] - b.radius, hi = b.center[i] + b.radius;
      box.lo[i] = first ? lo : std::min(box.lo[i], lo);
      box.hi[i] = first ? hi : std::max(box.hi[i], hi);
    }
    first = false;
  }
  if (first) {  // no obstacles: a box around the object's start region
    for (int i = 0; i < N; ++i) {
      box.lo[i] = -1;
      box.hi[i] = 1;
    }
  }
  const double pad = (4.0 * object_rad + max_obs_r) * inflate;
  for (int i = 0; i < N; ++i) {
    box.lo[i] -= pad;
    box.hi[i] += pad;
  }
  return box;
}

std::string graph_to_json(const ConnectivityGraph& graph) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : graph.vertices)
    j["vertices"].push_back({{"slice", v.slice},
                             {"component", v.component},
                             {"infinite", v.is_infinite}});
  j["edges"] = json::array();
  for (const auto& [u, v] : graph.edges) j["edges"].push_back({u, v});
  j["slice_vertex_offset"] = graph.slice_vertex_offset;
  json classes = json::array();
  for (const auto& c : components(graph))
    classes.push_back({{"vertices", c.vertices}, {"unbounded", c.unbounded}});
  j["classes"] = classes;
  return j.dump(2) + "\n";
}

ConnectivityGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid graph JSON: ") + e.what());
  }
  ConnectivityGraph g;
  for (const auto& v : j.at("vertices"))
    g.vertices.push_back(GraphVertex{v.at("slice").get<int>(),
                                     v.at("component").get<int>(),
                                     v.at("infinite").get<bool>()});
  for (const auto& e : j.at("edges"))
    g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  g.slice_vertex_offset = j.at("slice_vertex_offset").get<std::vector<int>>();
  g.partition = DisjointSet(g.vertices.size());
  for (const auto& [u, v] : g.edges) g.partition.unite(u, v);
  return g;
}

std::string graph_to_dot(const ConnectivityGraph& graph) {
  std::ostringstream os;
  os << "graph cspace {\n";
  for (int v = 0; v < static_cast<int>(graph.vertices.size()); ++v) {
    const auto& gv = graph.vertices[v];
    os << "  v" << v << " [label=\"s" << gv.slice << "c" << gv.component << "\""
       << (gv.is_infinite ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const auto& [u, v] : graph.edges) os << "  v" << u << " -- v" << v << ";\n";
  os << "}\n";
  return os.str();
}

std::string stats_to_json(const BuildStats& stats) {
  json j;
  j["wall_seconds"] = stats.wall_seconds;
  j["slice_seconds"] = stats.slice_seconds;
  j["edge_seconds"] = stats.edge_seconds;
  j["peak_resident_slices"] = stats.peak_resident_slices;
  j["slices"] = stats.slices;
  j["total_components"] = stats.total_components;
  j["bounded_classes"] = stats.bounded_classes;
  j["unbounded_classes"] = stats.unbounded_classes;
  return j.dump(2) + "\n";
}

template AABox<2> default_bounds<2>(const Scene<2>&, double, double);
template AABox<3> default_bounds<3>(const Scene<3>&, double, double);

}  // namespace cspace
