#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cspace/vec.hpp"

namespace cspace {

// Incremental (Bowyer-Watson) regular triangulation of weighted points in
// dimension N.  Callers are expected to supply an initial enclosing simplex
// of "scaffold" sites; all later insertions must fall inside it.  Degeneracies
// are broken beforehand by deterministic site perturbation (see slice.cpp).
template <int N>
class RegularTriangulation {
 public:
  struct Site {
    Vec<N> pos;
    double weight = 0;  // radius squared
    bool scaffold = false;
  };

  struct Simplex {
    std::array<int, N + 1> v;   // site indices, sorted
    Vec<N> ortho_center{};      // equal power distance to all N+1 sites
    double ortho_power = 0;     // that common power value
    bool alive = true;
    bool scaffold = false;      // touches a scaffold site
  };

  // sites[0..N] must form the enclosing simplex.
  explicit RegularTriangulation(std::vector<Site> sites) : sites_(std::move(sites)) {
    Simplex s0;
    for (int i = 0; i <= N; ++i) s0.v[i] = i;
    fit_ortho(s0);
    s0.scaffold = true;
    simplices_.push_back(s0);
    alive_.push_back(0);
    link(0);
    for (int i = N + 1; i < static_cast<int>(sites_.size()); ++i) insert(i);
  }

  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const std::vector<int>& hidden() const { return hidden_; }

  // Power of weighted point x against the orthogonal sphere of s.
  double conflict_value(const Simplex& s, const Vec<N>& x, double w) const {
    return norm2(x - s.ortho_center) - s.ortho_power - w;
  }

 private:
  using Facet = std::array<int, N>;

  struct FacetHash {
    std::size_t operator()(const Facet& f) const {
      std::size_t h = 1469598103934665603ull;
      for (int v : f) {
        h ^= static_cast<std::size_t>(v);
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  static Facet facet_of(const Simplex& s, int drop) {
    Facet f;
    int k = 0;
    for (int i = 0; i <= N; ++i)
      if (i != drop) f[k++] = s.v[i];
    return f;
  }

  // Solve for the point with equal power distance to all N+1 sites.
  void fit_ortho(Simplex& s) {
    double A[N][N], b[N];
    const Site& s0 = sites_[s.v[0]];
    for (int r = 0; r < N; ++r) {
      const Site& sr = sites_[s.v[r + 1]];
      for (int c = 0; c < N; ++c) A[r][c] = 2.0 * (sr.pos[c] - s0.pos[c]);
      b[r] = norm2(sr.pos) - sr.weight - (norm2(s0.pos) - s0.weight);
    }
    // Gaussian elimination with partial pivoting.
    int perm[N];
    for (int i = 0; i < N; ++i) perm[i] = i;
    for (int col = 0; col < N; ++col) {
      int piv = col;
      for (int r = col + 1; r < N; ++r)
        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
      if (piv != col) {
        for (int c = 0; c < N; ++c) std::swap(A[col][c], A[piv][c]);
        std::swap(b[col], b[piv]);
      }
      for (int r = col + 1; r < N; ++r) {
        const double f = A[r][col] / A[col][col];
        for (int c = col; c < N; ++c) A[r][c] -= f * A[col][c];
        b[r] -= f * b[col];
      }
    }
    Vec<N> x;
    for (int r = N - 1; r >= 0; --r) {
      double acc = b[r];
      for (int c = r + 1; c < N; ++c) acc -= A[r][c] * x[c];
      x[r] = acc / A[r][r];
    }
    s.ortho_center = x;
    s.ortho_power = norm2(x - s0.pos) - s0.weight;
  }

  // Register / deregister a simplex's facets in the persistent incidence map.
  void link(int si) {
    for (int d = 0; d <= N; ++d) {
      Facet f = facet_of(simplices_[si], d);
      auto it = inc_.find(f);
      if (it == inc_.end())
        inc_[f] = {si, -1};
      else
        it->second[1] = si;
    }
  }
  void unlink(int si) {
    for (int d = 0; d <= N; ++d) {
      Facet f = facet_of(simplices_[si], d);
      auto it = inc_.find(f);
      if (it == inc_.end()) continue;
      auto& pr = it->second;
      if (pr[1] == si)
        pr[1] = -1;
      else if (pr[0] == si) {
        pr[0] = pr[1];
        pr[1] = -1;
      }
      if (pr[0] < 0) inc_.erase(it);
    }
  }

  void insert(int vi) {
    const Site& site = sites_[vi];
    // Conflict region: simplices whose orthogonal sphere sees the new site
    // with negative power.
    std::vector<int> conflict;
    int seed = -1;
    double seed_val = 0;
    for (const int i : alive_) {
      const double cv = conflict_value(simplices_[i], site.pos, site.weight);
      if (cv < 0) {
        conflict.push_back(i);
        if (seed < 0 || cv < seed_val) {
          seed = i;
          seed_val = cv;
        }
      }
    }
    if (conflict.empty()) {
      hidden_.push_back(vi);
      return;
    }

    // Keep only the facet-connected component of the conflict region that
    // contains the deepest conflict; guards against numerically inconsistent
    // predicates producing a disconnected region.
    in_conflict_.assign(simplices_.size(), 0);
    auto& in_conflict = in_conflict_;
    for (int i : conflict) in_conflict[i] = 1;
    keep_.assign(simplices_.size(), 0);
    auto& keep = keep_;
    std::vector<int> stack{seed};
    keep[seed] = 1;
    while (!stack.empty()) {
      const int si = stack.back();
      stack.pop_back();
      for (int d = 0; d <= N; ++d) {
        const auto& pair = inc_[facet_of(simplices_[si], d)];
        const int other = pair[0] == si ? pair[1] : pair[0];
        if (other >= 0 && in_conflict[other] && !keep[other]) {
          keep[other] = 1;
          stack.push_back(other);
        }
      }
    }

    // Boundary facets separate kept simplices from non-kept ones (or the
    // outside); each spawns a new simplex with the inserted site.
    std::vector<std::pair<Facet, int>> boundary;  // facet, kept simplex id
    for (int si : conflict) {
      if (!keep[si]) continue;
      for (int d = 0; d <= N; ++d) {
        Facet f = facet_of(simplices_[si], d);
        const auto& pair = inc_[f];
        const int other = pair[0] == si ? pair[1] : pair[0];
        if (other < 0 || !keep[other]) boundary.emplace_back(f, si);
      }
    }
    for (int si : conflict)
      if (keep[si]) {
        simplices_[si].alive = false;
        unlink(si);
      }
    std::erase_if(alive_, [&](int i) { return !simplices_[i].alive; });

    for (auto& [f, from] : boundary) {
      Simplex s;
      for (int i = 0; i < N; ++i) s.v[i] = f[i];
      s.v[N] = vi;
      std::sort(s.v.begin(), s.v.end());
      fit_ortho(s);
      s.scaffold = false;
      for (int i = 0; i <= N; ++i)
        if (sites_[s.v[i]].scaffold) s.scaffold = true;
      simplices_.push_back(s);
      alive_.push_back(static_cast<int>(simplices_.size()) - 1);
      link(static_cast<int>(simplices_.size()) - 1);
    }
  }

  std::vector<Site> sites_;
  std::vector<Simplex> simplices_;
  std::vector<int> hidden_;
  std::vector<int> alive_;
  std::vector<char> in_conflict_, keep_;
  std::unordered_map<Facet, std::array<int, 2>, FacetHash> inc_;
};

}  // namespace cspace
