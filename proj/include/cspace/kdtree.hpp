#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace cspace {

// Static kd-tree over fixed-dimension points; supports nearest-neighbor and
// radius queries with Euclidean distance.
template <int D>
class KdTree {
 public:
  using Point = std::array<double, D>;

  explicit KdTree(std::vector<Point> pts) : pts_(std::move(pts)) {
    idx_.resize(pts_.size());
    std::iota(idx_.begin(), idx_.end(), 0);
    if (!idx_.empty()) build(0, static_cast<int>(idx_.size()), 0);
  }

  std::size_t size() const { return pts_.size(); }
  const Point& point(int i) const { return pts_[i]; }

  // Index of the nearest point, excluding indices for which skip(i) is true.
  template <class Skip>
  int nearest(const Point& q, Skip skip) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    nearest_rec(q, 0, static_cast<int>(idx_.size()), 0, skip, best, best_d2);
    return best;
  }

  int nearest(const Point& q) const {
    return nearest(q, [](int) { return false; });
  }

  std::vector<int> radius_query(const Point& q, double r) const {
    std::vector<int> out;
    radius_rec(q, r * r, 0, static_cast<int>(idx_.size()), 0, out);
    return out;
  }

 private:
  static double dist2(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < D; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  }

  void build(int lo, int hi, int axis) {
    if (hi - lo <= 1) return;
    const int mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                     [&](int a, int b) { return pts_[a][axis] < pts_[b][axis]; });
    const int next = (axis + 1) % D;
    build(lo, mid, next);
    build(mid + 1, hi, next);
  }

  template <class Skip>
  void nearest_rec(const Point& q, int lo, int hi, int axis, Skip skip,
                   int& best, double& best_d2) const {
    if (lo >= hi) return;
    const int mid = (lo + hi) / 2;
    const int i = idx_[mid];
    if (!skip(i)) {
      const double d2 = dist2(q, pts_[i]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    const double delta = q[axis] - pts_[i][axis];
    const int next = (axis + 1) % D;
    if (delta < 0) {
      nearest_rec(q, lo, mid, next, skip, best, best_d2);
      if (delta * delta < best_d2) nearest_rec(q, mid + 1, hi, next, skip, best, best_d2);
    } else {
      nearest_rec(q, mid + 1, hi, next, skip, best, best_d2);
      if (delta * delta < best_d2) nearest_rec(q, lo, mid, next, skip, best, best_d2);
    }
  }

  void radius_rec(const Point& q, double r2, int lo, int hi, int axis,
                  std::vector<int>& out) const {
    if (lo >= hi) return;
    const int mid = (lo + hi) / 2;
    const int i = idx_[mid];
    if (dist2(q, pts_[i]) <= r2) out.push_back(i);
    const double delta = q[axis] - pts_[i][axis];
    const int next = (axis + 1) % D;
    if (delta < 0) {
      radius_rec(q, r2, lo, mid, next, out);
      if (delta * delta <= r2) radius_rec(q, r2, mid + 1, hi, next, out);
    } else {
      radius_rec(q, r2, mid + 1, hi, next, out);
      if (delta * delta <= r2) radius_rec(q, r2, lo, mid, next, out);
    }
  }

  std::vector<Point> pts_;
  std::vector<int> idx_;
};

}  // namespace cspace
