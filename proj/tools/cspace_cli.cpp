#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cspace/query.hpp"
#include "cspace/rotation_grid.hpp"
#include "cspace/scene.hpp"
#include "json.hpp"

namespace {

using namespace cspace;

struct RunConfig {
  std::string scene_path;
  std::string grid_file;
  double grid_gen_dispersion = 0;
  int so2 = 0;
  std::string epsilon = "";  // number or "auto"
  double delta = -1;
  int workers = 1;
  bool strict_edges = false;
  double bounds_inflate = 1.0;
  std::string out_graph, out_stats;
  std::string format = "json";
};

std::uint64_t env_seed() {
  if (const char* s = std::getenv("CSPACE_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      throw ParseError("CSPACE_SEED must be an unsigned integer");
    }
  }
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scene", cfg.scene_path, "scene JSON file")->required();
  cmd->add_option("--grid-file", cfg.grid_file, "orientation grid file (w x y z rows)");
  cmd->add_option("--grid-gen-dispersion", cfg.grid_gen_dispersion,
                  "generate a 3D grid with this target dispersion (radians)");
  cmd->add_option("--so2", cfg.so2, "number of equally spaced planar orientations");
  cmd->add_option("--epsilon", cfg.epsilon, "core shrink (number) or 'auto'")->required();
  cmd->add_option("--delta", cfg.delta, "clearance offset, >= 0")->required();
  cmd->add_option("--workers", cfg.workers, "worker threads, >= 1");
  cmd->add_flag("--strict-edges", cfg.strict_edges, "sample-verify component overlaps");
  cmd->add_option("--bounds-inflate", cfg.bounds_inflate, "extra bounds padding factor");
}

// Everything a build needs, owning the data the graph refers to.
template <int N>
struct Problem {
  Scene<N> scene;
  RigidObjectModel<N> object;
  OrientationGrid<N> grid;
  BuildInputs<N> in;
};

template <int N>
Problem<N> setup(const RunConfig& cfg, Scene<N> scene) {
  Problem<N> p;
  p.scene = std::move(scene);
  p.object = RigidObjectModel<N>::make(p.scene.object);

  if (cfg.delta < 0) throw ParseError("--delta must be >= 0");
  if (cfg.workers < 1) throw ParseError("--workers must be >= 1");

  const int sources = (cfg.so2 > 0) + (!cfg.grid_file.empty()) + (cfg.grid_gen_dispersion > 0);
  if (sources != 1)
    throw ParseError("exactly one grid source required: --so2, --grid-file, or --grid-gen-dispersion");
  if constexpr (N == 2) {
    if (cfg.so2 <= 0) throw ParseError("2D scenes need --so2 <count>");
    p.grid = so2_grid(cfg.so2);
  } else {
    if (cfg.so2 > 0) throw ParseError("--so2 applies to 2D scenes only");
    if (!cfg.grid_file.empty()) {
      auto samples = load_grid_file(cfg.grid_file);
      const double disp = estimate_dispersion(samples, 1000, env_seed());
      p.grid = build_adjacency(std::move(samples), disp);
    } else {
      auto samples = generate_grid(cfg.grid_gen_dispersion, env_seed());
      p.grid = build_adjacency(std::move(samples), cfg.grid_gen_dispersion);
    }
  }

  double eps;
  if (cfg.epsilon == "auto") {
    eps = choose_epsilon(p.grid.dispersion, p.object.radius, cfg.delta,
                         min_radius(p.object.shape))
              .epsilon;
  } else {
    try {
      std::size_t used = 0;
      eps = std::stod(cfg.epsilon, &used);
      if (used != cfg.epsilon.size()) throw std::invalid_argument("");
    } catch (...) {
      throw ParseError("--epsilon must be a number or 'auto'");
    }
    if (eps <= 0) throw ParseError("--epsilon must be > 0");
  }

  p.in.obstacles = &p.scene.obstacles;
  p.in.object = &p.object;
  p.in.grid = &p.grid;
  p.in.plan = EpsilonPlan{eps, cfg.delta, p.grid.dispersion, p.object.radius};
  p.in.bounds = default_bounds(p.scene, p.object.radius, cfg.bounds_inflate);
  p.in.seed = env_seed();
  p.in.strict_edges = cfg.strict_edges;
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

template <int N>
int run_build(const RunConfig& cfg, Scene<N> scene) {
  Problem<N> p = setup(cfg, std::move(scene));
  BuildStats stats;
  ConnectivityGraph g = cfg.workers == 1 ? build_sequential(p.in, &stats)
                                         : build_parallel(p.in, cfg.workers, &stats);
  const std::string graph_text =
      cfg.format == "dot" ? graph_to_dot(g) : graph_to_json(g);
  if (!cfg.out_graph.empty())
    write_file(cfg.out_graph, graph_text);
  else
    std::cout << graph_text;
  const std::string stats_text = stats_to_json(stats);
  if (!cfg.out_stats.empty())
    write_file(cfg.out_stats, stats_text);
  else
    std::cerr << stats_text;
  return 0;
}

template <int N>
Configuration<N> parse_config(const std::string& text) {
  std::istringstream is(text);
  Configuration<N> c;
  std::vector<double> v;
  double x;
  while (is >> x) v.push_back(x);
  if (!is.eof()) throw ParseError("configuration: non-numeric token in '" + text + "'");
  if constexpr (N == 2) {
    if (v.size() != 3) throw ParseError("2D configuration needs 'x y angle'");
    c.position = make_vec(v[0], v[1]);
    c.orientation = v[2];
  } else {
    if (v.size() != 7) throw ParseError("3D configuration needs 'x y z qw qx qy qz'");
    c.position = make_vec(v[0], v[1], v[2]);
    const Quat q{v[3], v[4], v[5], v[6]};
    if (q.norm() < 1e-12) throw ParseError("quaternion must be nonzero");
    c.orientation = q.normalized();
  }
  return c;
}

const char* verdict_word(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Disconnected: return "DISCONNECTED";
    case VerdictKind::PossiblyConnected: return "POSSIBLY_CONNECTED";
    case VerdictKind::InCollisionApprox: return "IN_COLLISION_APPROX";
    case VerdictKind::PassageAtMostDelta: return "PASSAGE<=DELTA";
    case VerdictKind::Open: return "OPEN";
  }
  return "UNKNOWN";
}

template <int N>
int run_query(const RunConfig& cfg, Scene<N> scene, const std::string& from,
              const std::string& to, double passage_delta) {
  const Configuration<N> c1 = parse_config<N>(from);
  const Configuration<N> c2 = parse_config<N>(to);
  Problem<N> p = setup(cfg, std::move(scene));
  if (passage_delta > 0) {
    const Verdict v = narrow_passage(p.in, c1, c2, passage_delta);
    std::cout << verdict_word(v) << "\n";
    return 0;
  }
  ConnectivityGraph g = cfg.workers == 1 ? build_sequential<N>(p.in)
                                         : build_parallel(p.in, cfg.workers);
  FreeSpaceApprox<N> fs(p.in, std::move(g));
  std::cout << verdict_word(fs.path_nonexistence(c1, c2)) << "\n";
  return 0;
}

template <int N>
int run_bench(const RunConfig& cfg, Scene<N> scene, const std::vector<int>& threads) {
  Problem<N> p = setup(cfg, std::move(scene));
  nlohmann::json rows = nlohmann::json::array();
  double base = 0;
  for (int t : threads) {
    BuildStats stats;
    (void)build_parallel(p.in, t, &stats);
    if (rows.empty()) base = stats.wall_seconds;
    rows.push_back({{"workers", t},
                    {"wall_seconds", stats.wall_seconds},
                    {"speedup", stats.wall_seconds > 0 ? base / stats.wall_seconds : 0.0}});
  }
  std::cout << rows.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conservative free-space approximation for rigid objects among ball obstacles"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string from, to, threads_csv = "1,2,4,8";
  double passage_delta = 0;

  CLI::App* build = app.add_subcommand("build", "build the connectivity graph");
  add_common(build, cfg);
  build->add_option("--out-graph", cfg.out_graph, "graph output path (default stdout)");
  build->add_option("--out-stats", cfg.out_stats, "stats output path (default stderr)");
  build->add_option("--format", cfg.format, "graph format")
      ->check(CLI::IsMember({"json", "dot"}));

  CLI::App* query = app.add_subcommand("query", "path non-existence / narrow passage");
  add_common(query, cfg);
  query->add_option("--from", from, "start configuration")->required();
  query->add_option("--to", to, "goal configuration")->required();
  query->add_option("--passage-delta", passage_delta,
                    "also test clearance: report PASSAGE<=DELTA when the offset blocks the path");

  CLI::App* bench = app.add_subcommand("bench", "timing across worker counts");
  add_common(bench, cfg);
  bench->add_option("--threads", threads_csv, "comma-separated worker counts");

  CLI11_PARSE(app, argc, argv);

  try {
    AnyScene scene = load_scene(cfg.scene_path);
    if (build->parsed()) {
      return std::visit([&](auto s) { return run_build(cfg, std::move(s)); }, std::move(scene));
    }
    if (query->parsed()) {
      return std::visit(
          [&](auto s) { return run_query(cfg, std::move(s), from, to, passage_delta); },
          std::move(scene));
    }
    std::vector<int> threads;
    std::istringstream is(threads_csv);
    for (std::string tok; std::getline(is, tok, ',');) threads.push_back(std::stoi(tok));
    if (threads.empty()) throw ParseError("--threads: empty list");
    return std::visit([&](auto s) { return run_bench(cfg, std::move(s), threads); },
                      std::move(scene));
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
