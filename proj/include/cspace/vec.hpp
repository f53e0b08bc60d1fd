#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace cspace {

template <int N>
struct Vec {
  std::array<double, N> c{};

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  Vec operator+(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = c[i] * s;
    return r;
  }
  Vec operator/(double s) const { return *this * (1.0 / s); }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec operator-() const { return *this * -1.0; }
  bool operator==(const Vec& o) const { return c == o.c; }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <int N>
inline double norm2(const Vec<N>& a) {
  return dot(a, a);
}

template <int N>
inline double norm(const Vec<N>& a) {
  return std::sqrt(norm2(a));
}

template <int N>
inline double dist(const Vec<N>& a, const Vec<N>& b) {
  return norm(a - b);
}

template <int N>
inline Vec<N> normalized(const Vec<N>& a) {
  return a / norm(a);
}

inline Vec2 make_vec(double x, double y) { return Vec2{{x, y}}; }
inline Vec3 make_vec(double x, double y, double z) { return Vec3{{x, y, z}}; }

// splitmix64; used to derive deterministic perturbations keyed on input index.
inline std::uint64_t hash_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// deterministic value in [-1, 1)
inline double hash_unit(std::uint64_t key) {
  return static_cast<double>(hash_u64(key) >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace cspace
