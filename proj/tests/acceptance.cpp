// Acceptance gate: one PASS/FAIL line per criterion, exit code = #failures.
//
// Each criterion exercises an end-to-end guarantee of the library against an
// independent oracle or a bundled scene with known structure. Heavy 3D builds
// share generated orientation grids; wall-clock budgets are enforced where a
// criterion carries one.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cspace/query.hpp"
#include "cspace/scene.hpp"
#include "oracles.hpp"

using namespace cspace;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s: criterion %d (%s) %s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Quat{n(rng), n(rng), n(rng), n(rng)}.normalized();
}

struct Fixture2 {
  Scene<2> scene;
  RigidObjectModel<2> object;
  OrientationGrid<2> grid;
  BuildInputs<2> in;

  explicit Fixture2(Scene<2> s, int slices = 36, double delta = 0.0)
      : scene(std::move(s)) {
    object = RigidObjectModel<2>::make(scene.object);
    grid = so2_grid(slices);
    in.obstacles = &scene.obstacles;
    in.object = &object;
    in.grid = &grid;
    in.plan = choose_epsilon(grid.dispersion, object.radius, delta,
                             min_radius(scene.object));
    in.plan.delta = delta;
    in.bounds = default_bounds(scene, object.radius);
  }
};

Scene<2> load2(const std::string& name) {
  return std::get<Scene<2>>(load_scene(oracle::scene_path(name)));
}
Scene<3> load3(const std::string& name) {
  return std::get<Scene<3>>(load_scene(oracle::scene_path(name)));
}

// ---------------------------------------------------------------------------
// 1. The displacement of any object point under two rotations is bounded by
//    (and for the worst point equal to) 2 sin(rho): checked as the exact
//    identity 2|Im(p q*)| = 2 sin(rho(p, q)) over random pairs.
void criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    const Quat p = random_quat(rng), q = random_quat(rng);
    const double via_imag = 2.0 * (p * q.conj()).imag_norm();
    const double via_rho = 2.0 * std::sin(angular_distance(p, q));
    worst = std::max(worst, std::abs(via_imag - via_rho));
  }
  const double dt = secs(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "- worst deviation %.2e over 1e5 pairs in %.2fs",
                worst, dt);
  report(1, worst <= 1e-9 && dt < 1.0, "rotation displacement identity", buf);
}

// ---------------------------------------------------------------------------
// 2. Disconnection verdicts are safe: on seeded random planar scenes (half of
//    them containing a caging ring), any pair the approximation declares
//    disconnected must lie in different components of a conservative
//    brute-force (x, y, theta) flood fill.
void criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0, false_disconnections = 0, scenes = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const oracle::RingScene scene = oracle::random_scene2d(seed * 131);
    Fixture2 f(scene);
    FreeSpaceApprox<2> fs(f.in, build_sequential(f.in));
    const auto flood = oracle::se2_flood(scene.obstacles, scene.object,
                                         f.object.reference, f.object.radius,
                                         f.in.bounds, 200, 200, 72);
    ++scenes;

    std::vector<Configuration<2>> candidates;
    if (scene.has_ring) candidates.push_back({scene.ring_center, 0.0});
    for (int k = 0; k < 60; ++k)
      candidates.push_back(
          {make_vec(f.in.bounds.lo[0] + u01(rng) * (f.in.bounds.hi[0] - f.in.bounds.lo[0]),
                    f.in.bounds.lo[1] + u01(rng) * (f.in.bounds.hi[1] - f.in.bounds.lo[1])),
           2 * kPi * u01(rng)});

    std::vector<std::pair<Configuration<2>, int>> probes;
    for (const auto& c : candidates) {
      if (probes.size() >= 12) break;
      if (!fs.locate(c)) continue;
      const int oc = flood.component_at(c.position, c.orientation);
      if (oc < 0) continue;
      probes.emplace_back(c, oc);
    }
    for (std::size_t i = 0; i < probes.size(); ++i)
      for (std::size_t j = i + 1; j < probes.size(); ++j)
        if (fs.path_nonexistence(probes[i].first, probes[j].first).kind ==
            VerdictKind::Disconnected) {
          ++checked;
          if (probes[i].second == probes[j].second) ++false_disconnections;
        }
  }
  const double dt = secs(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "- %d scenes, %d disconnected pairs checked, %d false, %.0fs",
                scenes, checked, false_disconnections, dt);
  report(2, false_disconnections == 0 && checked > 0 && dt < 300.0,
         "no false disconnections vs SE(2) flood oracle", buf);
}

// ---------------------------------------------------------------------------
// 3. Resolution study: three nested ring scenes approximated with coarser to
//    finer obstacle balls; the number of detected bounded classes must be
//    nondecreasing with resolution and match the flood-fill count of the
//    finest scene (the object is a disc, so one slice decides).
void criterion3() {
  std::vector<int> counts;
  int oracle_count = -1;
  for (const char* name : {"three_rings_coarse", "three_rings_medium", "three_rings_fine"}) {
    Scene<2> scene = load2(name);
    Fixture2 f(scene);
    FreeSpaceApprox<2> fs(f.in, build_sequential(f.in));
    int bounded = 0;
    for (const auto& c : fs.classes())
      if (!c.unbounded) ++bounded;
    counts.push_back(bounded);

    if (std::string(name) == "three_rings_fine") {
      // Exact-union flood fill of one slice (orientation-invariant object).
      std::vector<Ball<2>> collision;
      for (const auto& ob : scene.obstacles.balls)
        for (const auto& ib : scene.object.balls)
          collision.push_back({ob.center - (ib.center - f.object.reference),
                               ob.radius + ib.radius});
      const auto flood = oracle::slice_flood(collision, f.in.bounds, 1600, 1600);
      oracle_count = flood.bounded_count(8);
    }
  }
  const bool mono = counts[0] <= counts[1] && counts[1] <= counts[2];
  char buf[160];
  std::snprintf(buf, sizeof buf, "- bounded classes %d/%d/%d, finest oracle %d",
                counts[0], counts[1], counts[2], oracle_count);
  report(3, mono && counts[2] == oracle_count,
         "bounded-class count grows with resolution and matches oracle", buf);
}

// ---------------------------------------------------------------------------
// 4. Dual-diagram conservativeness per slice: points outside every dual shape
//    lie inside the collision-ball union, and points outside every collision
//    ball lie inside some dual shape.
void criterion4() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Points outside every dual shape must be in collision, and points outside
  // every collision ball must be covered by a dual shape; both reduce to: no
  // point escapes shapes and balls simultaneously.
  long violations = 0, outside_shapes = 0, outside_balls = 0;
  for (int s = 0; s < 20; ++s) {
    const oracle::RingScene scene = oracle::random_scene2d(900 + 37 * s);
    Fixture2 f(scene);
    const auto core = epsilon_core(offset(scene.object, 0.0), f.in.plan.epsilon);
    const double theta = 2 * kPi * u01(rng);
    const auto balls =
        collision_balls(scene.obstacles, core, f.object.reference, theta, s);
    const auto diagram = weighted_voronoi(balls, f.in.bounds, 11 + s);
    const auto shapes = dual_diagram(diagram, f.in.bounds);

    for (int k = 0; k < 100000; ++k) {
      Vec2 p = make_vec(f.in.bounds.lo[0] + u01(rng) * (f.in.bounds.hi[0] - f.in.bounds.lo[0]),
                        f.in.bounds.lo[1] + u01(rng) * (f.in.bounds.hi[1] - f.in.bounds.lo[1]));
      bool in_shape = false;
      for (const auto& sh : shapes)
        if (sh.contains(p)) {
          in_shape = true;
          break;
        }
      bool in_ball = false;
      for (const auto& b : balls.balls)
        if (dist(p, b.center) <= b.radius) {
          in_ball = true;
          break;
        }
      if (!in_shape) ++outside_shapes;
      if (!in_ball) ++outside_balls;
      if (!in_shape && !in_ball) ++violations;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "- %ld violations (%ld samples outside shapes, %ld outside balls, "
                "20 slices x 1e5 samples)",
                violations, outside_shapes, outside_balls);
  report(4, violations == 0, "dual diagram covers all free space", buf);
}

// ---------------------------------------------------------------------------
// 5. 3D caging with strict edge verification: ring-link and narrow-part cage
//    at the fine grid, the surround shell at the coarser one, and the
//    narrow-part scene may legitimately miss at the coarsest grid.
struct CageResult {
  bool caged = false;
  bool miss = false;  // honest coarse-grid miss (core emptied by epsilon)
  double seconds = 0;
  std::string note;
};

CageResult run_cage(const Scene<3>& scene, const OrientationGrid<3>& grid,
                    double dispersion, const Vec3& pos) {
  CageResult r;
  const auto t0 = Clock::now();
  RigidObjectModel<3> object = RigidObjectModel<3>::make(scene.object);
  BuildInputs<3> in;
  in.obstacles = &scene.obstacles;
  in.object = &object;
  in.grid = &grid;
  in.bounds = default_bounds(scene, object.radius);
  in.strict_edges = true;
  try {
    in.plan = choose_epsilon(dispersion, object.radius, 0.0, min_radius(scene.object));
    FreeSpaceApprox<3> fs(in, build_sequential(in));
    const Configuration<3> c{pos, Quat{1, 0, 0, 0}};
    r.caged = fs.locate(c).has_value() && fs.is_caged(c);
  } catch (const EpsilonExceedsObject& e) {
    r.miss = true;
    r.note = "core emptied";
  } catch (const EmptyCoreError& e) {
    r.miss = true;
    r.note = "core emptied";
  }
  r.seconds = secs(t0);
  return r;
}

void criterion5(const OrientationGrid<3>& fine, double fine_disp,
                const OrientationGrid<3>& mid, double mid_disp) {
  const Scene<3> ring = load3("ring_link3d");
  const Scene<3> part = load3("narrow_part3d");
  const Scene<3> shell = load3("surround3d");

  const CageResult a = run_cage(ring, fine, fine_disp, make_vec(1.0, 0.0, 0.0));
  const CageResult b = run_cage(part, fine, fine_disp, make_vec(0.0, 0.0, 0.0));
  const CageResult c = run_cage(shell, mid, mid_disp, make_vec(0.0, 0.0, 0.0));

  // Coarse grid: the miss is permitted, not required.
  const auto coarse_samples = generate_grid(0.23, 5);
  const auto coarse = build_adjacency(coarse_samples, 0.23);
  const CageResult d = run_cage(part, coarse, 0.23, make_vec(0.0, 0.0, 0.0));

  const bool budget = a.seconds < 1800 && b.seconds < 1800 && c.seconds < 1800;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "- ring-link %s (%.0fs), narrow-part %s (%.0fs), surround %s (%.0fs); "
                "coarse narrow-part: %s",
                a.caged ? "caged" : "NOT caged", a.seconds,
                b.caged ? "caged" : "NOT caged", b.seconds,
                c.caged ? "caged" : "NOT caged", c.seconds,
                d.caged ? "caged" : (d.miss ? "missed (core emptied)" : "missed"));
  report(5, a.caged && b.caged && c.caged && budget,
         "3D cages certified within the time budget", buf);
}

// ---------------------------------------------------------------------------
// 6. Narrow passage: the bottleneck scene is one class at delta = 0 and
//    disconnected at delta = 20% of the passage width, so the probe reports
//    the passage bound.
void criterion6() {
  Fixture2 f(load2("bottleneck2d"));
  FreeSpaceApprox<2> fs(f.in, build_sequential(f.in));
  int classes_at_zero = static_cast<int>(fs.classes().size());

  const Configuration<2> inside{make_vec(0.0, 0.0), 0.0};
  const Configuration<2> outside{make_vec(6.0, 0.0), 0.0};
  const bool open0 =
      fs.path_nonexistence(inside, outside).kind == VerdictKind::PossiblyConnected;

  Fixture2 g(load2("bottleneck2d"), 36, 0.2);
  FreeSpaceApprox<2> fs2(g.in, build_sequential(g.in));
  const bool closed =
      fs2.path_nonexistence(inside, outside).kind == VerdictKind::Disconnected;

  const Verdict v = narrow_passage(f.in, inside, outside, 0.2);
  const bool probe = v.kind == VerdictKind::PassageAtMostDelta &&
                     v.clearance_bound && std::abs(*v.clearance_bound - 0.2) < 1e-12;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "- %d class(es) at delta=0 (open=%d), disconnected at delta=0.2: %d, "
                "probe verdict %s",
                classes_at_zero, open0 ? 1 : 0, closed ? 1 : 0, to_string(v.kind));
  report(6, classes_at_zero == 1 && open0 && closed && probe,
         "narrow passage bounded via offset probe", buf);
}

// ---------------------------------------------------------------------------
// 7. Parallel build: identical partitions for 1/2/4/8 workers, and wall-time
//    speedup thresholds (>= 2.5x at 4 workers, >= 3.0x at 8) on the 3D ring
//    benchmark. The speedup half is hardware-dependent.
void criterion7(const Scene<3>& ring, const OrientationGrid<3>& grid, double dispersion) {
  RigidObjectModel<3> object = RigidObjectModel<3>::make(ring.object);
  BuildInputs<3> in;
  in.obstacles = &ring.obstacles;
  in.object = &object;
  in.grid = &grid;
  in.plan = choose_epsilon(dispersion, object.radius, 0.0, min_radius(ring.object));
  in.bounds = default_bounds(ring, object.radius);

  auto signature = [](const ConnectivityGraph& g) {
    std::vector<std::vector<int>> sig;
    for (const auto& c : components(g)) sig.push_back(c.vertices);
    return sig;
  };

  std::vector<double> wall;
  std::vector<std::vector<std::vector<int>>> sigs;
  for (int w : {1, 2, 4, 8}) {
    const auto t0 = Clock::now();
    const auto g = build_parallel(in, w);
    wall.push_back(secs(t0));
    sigs.push_back(signature(g));
  }
  const bool identical = sigs[1] == sigs[0] && sigs[2] == sigs[0] && sigs[3] == sigs[0];
  const double s4 = wall[0] / wall[2], s8 = wall[0] / wall[3];
  const bool speedup = s4 >= 2.5 && s8 >= 3.0;
  const unsigned cores = std::thread::hardware_concurrency();
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "- partitions identical: %d; speedup %.2fx@4 %.2fx@8 on %u core(s), "
                "grid %d orientations",
                identical ? 1 : 0, s4, s8, cores, grid.size());
  report(7, identical && speedup, "parallel determinism and speedup", buf);
}

// ---------------------------------------------------------------------------
// 8. Generated grids meet the requested dispersion target according to an
//    independently seeded estimate; reference grid files are imported and
//    checked when bundled.
void criterion8(const std::vector<Quat>& fine, double fine_target) {
  bool ok = true;
  std::string detail = "-";
  for (double target : {0.4, 0.25, 0.10}) {
    const auto g = generate_grid(target, 9);
    const double est = estimate_dispersion(g, 300, 99);
    char buf[96];
    std::snprintf(buf, sizeof buf, " target %.2f: n=%zu est %.4f;", target, g.size(), est);
    detail += buf;
    ok = ok && est <= target;
  }
  {
    const double est = estimate_dispersion(fine, 300, 99);
    char buf[96];
    std::snprintf(buf, sizeof buf, " target %.2f: n=%zu est %.4f;", fine_target,
                  fine.size(), est);
    detail += buf;
    ok = ok && est <= fine_target;
  }
  bool any_import = false;
  for (const char* name : {"grid_576.qgrid", "grid_4608.qgrid", "grid_36864.qgrid"}) {
    const std::string path = oracle::scene_path(name);
    if (std::filesystem::exists(path)) {
      any_import = true;
      const auto g = load_grid_file(path);
      const double est = estimate_dispersion(g, 300, 99);
      const double want = g.size() <= 600 ? 0.23 : (g.size() <= 5000 ? 0.10 : 0.05);
      ok = ok && std::abs(est - want) <= 0.15 * want;
      char buf[96];
      std::snprintf(buf, sizeof buf, " import n=%zu est %.4f;", g.size(), est);
      detail += buf;
    }
  }
  if (!any_import) detail += " (no reference grid files bundled; import skipped)";
  report(8, ok, "dispersion targets met per estimator", detail);
}

// ---------------------------------------------------------------------------
// 9. Adjacency degrees: planar grids have degree exactly 2; the 3D grid near
//    dispersion 0.10 has a mean degree in [10, 40].
void criterion9(const OrientationGrid<3>& mid) {
  const auto g2 = so2_grid(36);
  bool deg2 = true;
  for (const auto& adj : g2.adjacency) deg2 = deg2 && adj.size() == 2;

  double mean = 0;
  for (const auto& adj : mid.adjacency) mean += static_cast<double>(adj.size());
  mean /= mid.size();
  char buf[160];
  std::snprintf(buf, sizeof buf, "- planar degree exactly 2: %d; 3D mean degree %.1f (n=%d)",
                deg2 ? 1 : 0, mean, mid.size());
  report(9, deg2 && mean >= 10.0 && mean <= 40.0, "orientation adjacency degrees", buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();

  // Shared 3D grids: "fine" (target 0.05) and "mid" (target 0.10).
  const double fine_t = 0.05, mid_t = 0.10;
  const auto fine_samples = generate_grid(fine_t, 2);
  const auto fine = build_adjacency(fine_samples, fine_t);
  const auto mid_samples = generate_grid(mid_t, 1);
  const auto mid = build_adjacency(mid_samples, mid_t);

  criterion5(fine, fine_t, mid, mid_t);
  criterion6();
  criterion7(load3("ring_link3d"), mid, mid_t);
  criterion8(fine_samples, fine_t);
  criterion9(mid);

  std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED"
                                      : "SOME CRITERIA FAILED (see lines above)");
  return g_failures;
}
