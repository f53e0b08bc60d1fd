#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Rasterize a disc into a blocked bitmap.
void mark_disc(std::vector<char>& blocked, int nx, int ny, const AABox<2>& box,
               const Vec2& c, double r, int layer) {
  const double sx = (box.hi[0] - box.lo[0]) / nx;
  const double sy = (box.hi[1] - box.lo[1]) / ny;
  const int x0 = std::max(0, static_cast<int>((c[0] - r - box.lo[0]) / sx));
  const int x1 = std::min(nx - 1, static_cast<int>((c[0] + r - box.lo[0]) / sx));
  const int y0 = std::max(0, static_cast<int>((c[1] - r - box.lo[1]) / sy));
  const int y1 = std::min(ny - 1, static_cast<int>((c[1] + r - box.lo[1]) / sy));
  const double r2 = r * r;
  for (int iy = y0; iy <= y1; ++iy) {
    const double py = box.lo[1] + (iy + 0.5) * sy;
    for (int ix = x0; ix <= x1; ++ix) {
      const double px = box.lo[0] + (ix + 0.5) * sx;
      const double dx = px - c[0], dy = py - c[1];
      if (dx * dx + dy * dy <= r2)
        blocked[static_cast<std::size_t>(layer) * nx * ny + iy * nx + ix] = 1;
    }
  }
}

// Label 4/6-connected free components; returns component count.  theta_wrap
// adds +-layer neighbors with wraparound.
int label(std::vector<int>& comp, const std::vector<char>& blocked, int nx, int ny,
          int nt, bool theta_wrap, std::vector<char>& bounded) {
  comp.assign(blocked.size(), -1);
  int n = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < blocked.size(); ++s) {
    if (blocked[s] || comp[s] >= 0) continue;
    const int id = n++;
    bool touches = false;
    stack.assign(1, static_cast<int>(s));
    comp[s] = id;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int it = cur / (nx * ny), rem = cur % (nx * ny);
      const int iy = rem / nx, ix = rem % nx;
      if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1) touches = true;
      auto visit = [&](int jx, int jy, int jt) {
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) return;
        if (theta_wrap) jt = (jt + nt) % nt;
        else if (jt < 0 || jt >= nt) return;
        const int j = (jt * ny + jy) * nx + jx;
        if (!blocked[j] && comp[j] < 0) {
          comp[j] = id;
          stack.push_back(j);
        }
      };
      visit(ix - 1, iy, it);
      visit(ix + 1, iy, it);
      visit(ix, iy - 1, it);
      visit(ix, iy + 1, it);
      if (nt > 1) {
        visit(ix, iy, it - 1);
        visit(ix, iy, it + 1);
      }
    }
    bounded.push_back(!touches);
  }
  return n;
}

}  // namespace

Se2Flood se2_flood(const BallUnion<2>& obstacles, const BallUnion<2>& object,
                   const Vec2& reference, double rad, const AABox<2>& box,
                   int nx, int ny, int nt) {
  Se2Flood f;
  f.nx = nx;
  f.ny = ny;
  f.nt = nt;
  f.box = box;
  const double sx = (box.hi[0] - box.lo[0]) / nx;
  const double sy = (box.hi[1] - box.lo[1]) / ny;
  const double t_step = 2.0 * kPi / nt;
  // Largest displacement of any object point across one cell: half the cell
  // diagonal in position plus the rotational sweep of half a theta step.
  const double margin = 0.5 * std::hypot(sx, sy) + 2.0 * std::sin(t_step / 4.0) * rad;

  std::vector<char> blocked(static_cast<std::size_t>(nx) * ny * nt, 0);
  for (int it = 0; it < nt; ++it) {
    const double theta = (it + 0.5) * t_step;
    for (const auto& ob : object.balls) {
      const Vec2 off = rotate(theta, ob.center - reference);
      for (const auto& os : obstacles.balls)
        mark_disc(blocked, nx, ny, box, os.center - off, os.radius + ob.radius + margin, it);
    }
  }
  f.n_components = label(f.comp, blocked, nx, ny, nt, true, f.comp_bounded);
  f.comp_cells.assign(f.n_components, 0);
  for (int v : f.comp)
    if (v >= 0) ++f.comp_cells[v];
  return f;
}

int Se2Flood::component_at(const Vec2& p, double theta) const {
  if (!box.contains(p)) return -1;
  const int ix = std::min(nx - 1, static_cast<int>((p[0] - box.lo[0]) / (box.hi[0] - box.lo[0]) * nx));
  const int iy = std::min(ny - 1, static_cast<int>((p[1] - box.lo[1]) / (box.hi[1] - box.lo[1]) * ny));
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  const int it = std::min(nt - 1, static_cast<int>(t / (2.0 * kPi) * nt));
  return comp[idx(ix, iy, it)];
}

int Se2Flood::bounded_count(int min_cells) const {
  int n = 0;
  for (std::size_t i = 0; i < comp_bounded.size(); ++i)
    n += comp_bounded[i] && comp_cells[i] >= min_cells;
  return n;
}

SliceFlood slice_flood(const std::vector<Ball<2>>& collision, const AABox<2>& box,
                       int nx, int ny) {
  SliceFlood f;
  f.nx = nx;
  f.ny = ny;
  f.box = box;
  std::vector<char> blocked(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& b : collision) mark_disc(blocked, nx, ny, box, b.center, b.radius, 0);
  f.n_components = label(f.comp, blocked, nx, ny, 1, false, f.comp_bounded);
  f.comp_cells.assign(f.n_components, 0);
  for (int v : f.comp)
    if (v >= 0) ++f.comp_cells[v];
  return f;
}

int SliceFlood::component_at(const Vec2& p) const {
  if (!box.contains(p)) return -1;
  const int ix = std::min(nx - 1, static_cast<int>((p[0] - box.lo[0]) / (box.hi[0] - box.lo[0]) * nx));
  const int iy = std::min(ny - 1, static_cast<int>((p[1] - box.lo[1]) / (box.hi[1] - box.lo[1]) * ny));
  return comp[iy * nx + ix];
}

int SliceFlood::bounded_count(int min_cells) const {
  int n = 0;
  for (std::size_t i = 0; i < comp_bounded.size(); ++i)
    n += comp_bounded[i] && comp_cells[i] >= min_cells;
  return n;
}

RingScene random_scene2d(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  RingScene s;

  const int n_obj = 1 + static_cast<int>(u01(rng) * 6) % 6;
  Vec2 cur = make_vec(0.0, 0.0);
  double prev_r = 0.4 + 0.1 * u01(rng);
  s.object.balls.push_back({cur, prev_r});
  for (int i = 1; i < n_obj; ++i) {
    const double r = 0.4 + 0.1 * u01(rng);
    const double ang = 2.0 * kPi * u01(rng);
    cur = cur + make_vec(std::cos(ang), std::sin(ang)) * (0.4 * (prev_r + r));
    s.object.balls.push_back({cur, r});
    prev_r = r;
  }

  // Even seeds carry a closed obstacle ring sized to the object, so that
  // bounded free components (cages) appear regularly in the corpus.
  if (seed % 2 == 0) {
    const double rad = reference_and_radius(s.object).second;
    const double ring_r = 0.45, rc = rad + 2.0 * ring_r;
    const Vec2 mid = make_vec(-2.0 + 4.0 * u01(rng), -2.0 + 4.0 * u01(rng));
    for (int k = 0; k < 20; ++k) {
      const double a = 2.0 * kPi * k / 20;
      s.obstacles.balls.push_back({mid + make_vec(std::cos(a), std::sin(a)) * rc, ring_r});
    }
    s.ring_center = mid;
    s.has_ring = true;
  }

  const int n_obs = 5 + static_cast<int>(u01(rng) * 8) % 8;
  for (int i = 0; i < n_obs; ++i) {
    const Vec2 c = make_vec(-4.0 + 8.0 * u01(rng), -4.0 + 8.0 * u01(rng));
    s.obstacles.balls.push_back({c, 0.3 + 0.7 * u01(rng)});
  }
  return s;
}

std::string scene_path(const std::string& name) {
  const char* src = std::getenv("CSPACE_SRC");
  const std::string root = src ? src : ".";
  return root + "/data/scenes/" + name + ".json";
}

}  // namespace oracle
