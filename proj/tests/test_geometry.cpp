#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cspace/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cspace;

TEST_CASE("reference of a single ball is its center") {
  BallUnion<2> u{{{make_vec(1.5, -2.0), 0.75}}};
  auto [g, rad] = reference_and_radius(u);
  CHECK(dist(g, make_vec(1.5, -2.0)) < 1e-9);
  CHECK(rad == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("reference of two equal balls is the midpoint") {
  BallUnion<2> u{{{make_vec(-2.0, 0.0), 0.5}, {make_vec(2.0, 0.0), 0.5}}};
  auto [g, rad] = reference_and_radius(u);
  CHECK(dist(g, make_vec(0.0, 0.0)) < 1e-6);
  CHECK(rad == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("enclosing radius is tight and minimal against sampling") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    BallUnion<3> obj;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i)
      obj.balls.push_back({make_vec(u(rng) * 2, u(rng) * 2, u(rng) * 2),
                           0.2 + 0.5 * std::abs(u(rng))});
    auto [g, rad] = reference_and_radius(obj);

    double reach = 0;
    for (const auto& b : obj.balls) reach = std::max(reach, dist(g, b.center) + b.radius);
    CHECK(rad == doctest::Approx(reach).epsilon(1e-9));

    // No nearby center does better.
    for (int k = 0; k < 50; ++k) {
      const Vec3 alt = g + make_vec(u(rng), u(rng), u(rng)) * 0.3;
      double alt_reach = 0;
      for (const auto& b : obj.balls)
        alt_reach = std::max(alt_reach, dist(alt, b.center) + b.radius);
      CHECK(alt_reach >= rad - 1e-7);
    }
  }
}

TEST_CASE("epsilon core shrinks radii and drops swallowed balls") {
  BallUnion<2> u{{{make_vec(0.0, 0.0), 1.0}, {make_vec(3.0, 0.0), 0.2}}};
  const auto core = epsilon_core(u, 0.5);
  REQUIRE(core.size() == 1);
  CHECK(core.balls[0].radius == doctest::Approx(0.5));
  CHECK_THROWS_AS(epsilon_core(u, 1.0), EmptyCoreError);
}

TEST_CASE("offset inflates every radius") {
  BallUnion<3> u{{{make_vec(0.0, 0.0, 0.0), 1.0}, {make_vec(1.0, 0.0, 0.0), 0.3}}};
  const auto fat = offset(u, 0.25);
  CHECK(fat.balls[0].radius == doctest::Approx(1.25));
  CHECK(fat.balls[1].radius == doctest::Approx(0.55));
}

TEST_CASE("power distance sign matches ball membership") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Ball<2> b{make_vec(0.5, -0.5), 1.2};
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = make_vec(u(rng), u(rng));
    CHECK((power_distance(p, b) < 0) == (dist(p, b.center) < b.radius));
  }
}

TEST_CASE("planar rotation matches angle arithmetic") {
  const Vec2 v = make_vec(1.0, 0.0);
  const Vec2 r = rotate(3.14159265358979323846 / 2.0, v);
  CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.0));
}
