#include "cspace/graph.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <thread>

namespace cspace {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// (slice a component, slice b component) raw edge of one adjacent pair.
using CompEdge = std::pair<int, int>;

// Raw edge between (slice, component) pairs, before vertex ids exist.
struct RawEdge {
  int sa, ca, sb, cb;
};

ConnectivityGraph assemble(const std::vector<int>& comp_count,
                           std::vector<RawEdge> raw) {
  ConnectivityGraph g;
  const int slices = static_cast<int>(comp_count.size());
  g.slice_vertex_offset.assign(slices + 1, 0);
  for (int s = 0; s < slices; ++s)
    g.slice_vertex_offset[s + 1] = g.slice_vertex_offset[s] + comp_count[s];
  const int nv = g.slice_vertex_offset[slices];
  g.vertices.resize(nv);
  for (int s = 0; s < slices; ++s)
    for (int c = 0; c < comp_count[s]; ++c)
      g.vertices[g.vertex_id(s, c)] = GraphVertex{s, c, c == 0};

  g.edges.reserve(raw.size());
  for (const auto& e : raw) {
    int u = g.vertex_id(e.sa, e.ca);
    int v = g.vertex_id(e.sb, e.cb);
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  g.partition = DisjointSet(nv);
  for (const auto& [u, v] : g.edges) g.partition.unite(u, v);
  return g;
}

void fill_class_stats(const ConnectivityGraph& g, BuildStats* stats) {
  if (!stats) return;
  stats->total_components = static_cast<int>(g.vertices.size());
  for (const auto& c : components(g))
    ++(c.unbounded ? stats->unbounded_classes : stats->bounded_classes);
}

template <int N>
BallUnion<N> effective_core(const BuildInputs<N>& in) {
  return epsilon_core(offset(in.object->shape, in.plan.delta), in.plan.epsilon);
}

template <int N>
SliceFreeSpace<N> make_slice(const BuildInputs<N>& in, const BallUnion<N>& core, int s) {
  return compute_slice(*in.obstacles, core, in.object->reference,
                       in.grid->samples[s], s, in.bounds, in.seed);
}

// Edges of one adjacent slice pair, with the optional strict filter applied.
template <int N>
std::vector<RawEdge> pair_edges(const BuildInputs<N>& in, const BallUnion<N>& core,
                                const SliceFreeSpace<N>& a, const SliceFreeSpace<N>& b) {
  std::vector<CompEdge> ce = add_edges(a, b, in.bounds.diagonal());
  std::vector<RawEdge> out;
  std::optional<CollisionBallSet<N>> col_a, col_b;
  for (const auto& [ca, cb] : ce) {
    if (in.strict_edges && !(a.components[ca].is_infinite && b.components[cb].is_infinite)) {
      if (!col_a) {
        col_a = collision_balls(*in.obstacles, core, in.object->reference,
                                in.grid->samples[a.orientation_id], a.orientation_id);
        col_b = collision_balls(*in.obstacles, core, in.object->reference,
                                in.grid->samples[b.orientation_id], b.orientation_id);
      }
      const std::uint64_t key =
          hash_u64(in.seed ^ (static_cast<std::uint64_t>(a.orientation_id) << 20) ^
                   static_cast<std::uint64_t>(b.orientation_id));
      if (!strict_edge_check<N>(a.components[ca], b.components[cb], *col_a, *col_b,
                                in.bounds.diagonal(), key))
        continue;
    }
    out.push_back({a.orientation_id, ca, b.orientation_id, cb});
  }
  return out;
}

}  // namespace

template <int N>
std::vector<std::pair<int, int>> add_edges(const SliceFreeSpace<N>& a,
                                           const SliceFreeSpace<N>& b, double scale) {
  const double tol = overlap_tol(scale);
  std::set<CompEdge> found;

  // The two infinite components always share the unbounded outside region.
  int inf_a = -1, inf_b = -1;
  for (int i = 0; i < static_cast<int>(a.components.size()); ++i)
    if (a.components[i].is_infinite) inf_a = i;
  for (int i = 0; i < static_cast<int>(b.components.size()); ++i)
    if (b.components[i].is_infinite) inf_b = i;
  if (inf_a >= 0 && inf_b >= 0) found.insert({inf_a, inf_b});

  auto balls_overlap = [&](const DualShape<N>& x, const DualShape<N>& y) {
    return dist(x.center, y.center) <= x.radius + y.radius + tol;
  };

  // Finite components are small pockets; pair them directly with early exit.
  // The infinite components hold the bulk of the shapes (everything touching
  // the outside, plus the half-spaces), so pocket-vs-infinite tests walk the
  // big list lazily and stop at the first hit.
  auto touches_component = [&](const typename SliceFreeSpace<N>::Component& pocket,
                               const typename SliceFreeSpace<N>::Component& big) {
    for (const auto& p : pocket.shapes) {
      if (p.kind != DualShape<N>::Kind::FiniteBall) continue;
      for (const auto& q : big.shapes) {
        if (q.kind == DualShape<N>::Kind::Halfspace) {
          // Pocket balls never reach beyond the bounds, where half-space
          // boundaries live; only the unconditional infinite pair uses them.
          continue;
        }
        if (balls_overlap(p, q)) return true;
      }
    }
    return false;
  };

  for (int ca = 0; ca < static_cast<int>(a.components.size()); ++ca) {
    for (int cb = 0; cb < static_cast<int>(b.components.size()); ++cb) {
      if (ca == inf_a && cb == inf_b) continue;  // already added
      const bool a_small = ca != inf_a;
      const auto& pocket = a_small ? a.components[ca] : b.components[cb];
      const auto& other = a_small ? b.components[cb] : a.components[ca];
      if (touches_component(pocket, other)) found.insert({ca, cb});
    }
  }
  return {found.begin(), found.end()};
}

template <int N>
bool strict_edge_check(const typename SliceFreeSpace<N>::Component& a,
                       const typename SliceFreeSpace<N>::Component& b,
                       const CollisionBallSet<N>& col_a, const CollisionBallSet<N>& col_b,
                       double scale, std::uint64_t seed) {
  const double tol = overlap_tol(scale);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Successive samples from one overlap lens tend to be covered by the same
  // collision ball, so remember the last hit and test it first.
  int last_a = -1, last_b = -1;
  auto covered = [&](const Vec<N>& p) {
    if (last_a >= 0 && dist(p, col_a.balls[last_a].center) <= col_a.balls[last_a].radius)
      return true;
    if (last_b >= 0 && dist(p, col_b.balls[last_b].center) <= col_b.balls[last_b].radius)
      return true;
    for (int i = 0; i < static_cast<int>(col_a.balls.size()); ++i)
      if (dist(p, col_a.balls[i].center) <= col_a.balls[i].radius) {
        last_a = i;
        return true;
      }
    for (int i = 0; i < static_cast<int>(col_b.balls.size()); ++i)
      if (dist(p, col_b.balls[i].center) <= col_b.balls[i].radius) {
        last_b = i;
        return true;
      }
    return false;
  };

  // Global sampling budgets per edge keep the verification O(1) regardless of
  // how many shape pairs overlap; exhausting the budget without a free sample
  // removes the edge (all evidence says the overlap is covered), while a
  // pairing with no usable sample at all keeps it.
  bool sampled = false;
  int accepted = 0, tries = 0;
  constexpr int kMaxAccepted = 96, kMaxTries = 1024;
  for (const auto& sa : a.shapes) {
    if (sa.kind != DualShape<N>::Kind::FiniteBall) continue;
    for (const auto& sb : b.shapes) {
      if (sb.kind != DualShape<N>::Kind::FiniteBall) continue;
      const double d = dist(sa.center, sb.center);
      if (d > sa.radius + sb.radius + tol) continue;
      const auto& small = sa.radius <= sb.radius ? sa : sb;
      const auto& other = sa.radius <= sb.radius ? sb : sa;
      // Deterministic probe: the point of the smaller ball deepest inside the
      // larger one (its center, or the center pushed toward the other).
      {
        Vec<N> p = small.center;
        if (d > other.radius) {
          const double step = std::min(small.radius, d - other.radius + tol);
          p = p + (other.center - small.center) * (step / d);
        }
        if (dist(p, other.center) <= other.radius + tol) {
          sampled = true;
          if (!covered(p)) return true;
        }
      }
      const int pair_accept_cap = accepted + 16;
      while (tries < kMaxTries && accepted < std::min(kMaxAccepted, pair_accept_cap)) {
        ++tries;
        Vec<N> p;
        for (int k = 0; k < N; ++k) p[k] = small.center[k] + unit(rng) * small.radius;
        if (dist(p, small.center) > small.radius) continue;
        if (dist(p, other.center) > other.radius) continue;
        ++accepted;
        sampled = true;
        if (!covered(p)) return true;  // genuinely free overlap point
      }
      if (tries >= kMaxTries || accepted >= kMaxAccepted) break;
    }
    if (tries >= kMaxTries || accepted >= kMaxAccepted) break;
  }
  // No usable sample (tangential contact): keep the edge, staying on the
  // conservative side.
  return !sampled;
}

template <int N>
ConnectivityGraph build_sequential(const BuildInputs<N>& in, BuildStats* stats) {
  const auto t0 = Clock::now();
  const BallUnion<N> core = effective_core(in);
  const int n = in.grid->size();

  std::vector<std::optional<SliceFreeSpace<N>>> resident(n);
  std::vector<int> pending(n);  // unprocessed incident slice pairs
  for (int s = 0; s < n; ++s) pending[s] = static_cast<int>(in.grid->adjacency[s].size());

  std::vector<int> comp_count(n, 0);
  std::vector<RawEdge> raw;
  double slice_sec = 0, edge_sec = 0;
  int live = 0, peak = 0;

  auto evict_if_done = [&](int s) {
    if (pending[s] == 0 && resident[s]) {
      resident[s].reset();
      --live;
    }
  };

  // BFS over the orientation grid from a seed-chosen start; every slice is
  // computed once, every adjacent pair handled by its later endpoint.
  std::vector<char> enqueued(n, 0), done(n, 0);
  std::vector<int> queue;
  auto start_at = [&](int s) {
    queue.push_back(s);
    enqueued[s] = 1;
  };
  start_at(n > 0 ? static_cast<int>(hash_u64(in.seed) % n) : 0);
  std::size_t head = 0;
  int processed = 0;
  while (processed < n) {
    if (head == queue.size()) {  // disconnected grid: restart somewhere fresh
      for (int s = 0; s < n; ++s)
        if (!enqueued[s]) {
          start_at(s);
          break;
        }
    }
    const int s = queue[head++];
    auto ts = Clock::now();
    resident[s] = make_slice(in, core, s);
    slice_sec += seconds_since(ts);
    ++live;
    peak = std::max(peak, live);
    comp_count[s] = static_cast<int>(resident[s]->components.size());

    auto te = Clock::now();
    for (int nb : in.grid->adjacency[s]) {
      if (!done[nb]) continue;
      auto es = pair_edges(in, core, *resident[nb], *resident[s]);
      raw.insert(raw.end(), es.begin(), es.end());
      --pending[s];
      --pending[nb];
      evict_if_done(nb);
    }
    edge_sec += seconds_since(te);
    done[s] = 1;
    ++processed;
    evict_if_done(s);
    for (int nb : in.grid->adjacency[s])
      if (!enqueued[nb]) start_at(nb);
  }

  ConnectivityGraph g = assemble(comp_count, std::move(raw));
  if (stats) {
    stats->wall_seconds = seconds_since(t0);
    stats->slice_seconds = slice_sec;
    stats->edge_seconds = edge_sec;
    stats->peak_resident_slices = peak;
    stats->slices = n;
    fill_class_stats(g, stats);
  }
  return g;
}

template <int N>
ConnectivityGraph build_parallel(const BuildInputs<N>& in, int workers, BuildStats* stats) {
  const auto t0 = Clock::now();
  const BallUnion<N> core = effective_core(in);
  const int n = in.grid->size();
  workers = std::max(1, workers);

  std::vector<std::mutex> mtx(n);
  std::vector<int> status(n, 0);  // 0 unseen, 1 computed (edges may lag), 2 complete
  std::vector<std::optional<SliceFreeSpace<N>>> resident(n);
  std::vector<int> comp_count(n, 0);
  std::vector<int> pending(n);
  for (int s = 0; s < n; ++s) pending[s] = static_cast<int>(in.grid->adjacency[s].size());

  std::mutex book;  // guards raw edges, processed set, counters, timings
  std::set<std::pair<int, int>> processed_pairs;
  std::vector<RawEdge> raw;
  double slice_sec = 0, edge_sec = 0;
  int live = 0, peak = 0;
  std::exception_ptr failure;

  auto pair_key = [](int a, int b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };

  // Caller must hold `book`.  Evicts a slice once all its pairs are recorded.
  auto note_pair_done_locked = [&](int a, int b) {
    for (int s : {a, b}) {
      if (--pending[s] == 0 && resident[s]) {
        resident[s].reset();
        --live;
      }
    }
  };

  auto process_pair = [&](int a, int b) {  // both resident, both locks held by caller
    const auto te = Clock::now();
    auto es = pair_edges(in, core, *resident[std::min(a, b)], *resident[std::max(a, b)]);
    std::lock_guard lk(book);
    if (!processed_pairs.insert(pair_key(a, b)).second) return;
    raw.insert(raw.end(), es.begin(), es.end());
    edge_sec += seconds_since(te);
    note_pair_done_locked(a, b);
  };

  auto worker_fn = [&](int wid) {
    std::mt19937_64 rng(hash_u64(in.seed ^ (0x9e3779b97f4a7c15ULL * (wid + 1))));
    std::vector<int> local;
    std::size_t lhead = 0;
    auto next_slice = [&]() -> int {
      while (lhead < local.size()) {
        const int s = local[lhead++];
        if (status[s] == 0) return s;  // racy read; rechecked under lock
      }
      const int off = static_cast<int>(rng() % n);
      for (int i = 0; i < n; ++i) {
        const int s = (off + i) % n;
        if (status[s] == 0) return s;
      }
      return -1;
    };

    try {
      for (;;) {
        const int s = next_slice();
        if (s < 0) return;
        std::unique_lock lq(mtx[s]);
        if (status[s] != 0) continue;

        const auto ts = Clock::now();
        auto fs = make_slice(in, core, s);
        {
          std::lock_guard lk(book);
          slice_sec += seconds_since(ts);
          resident[s] = std::move(fs);
          comp_count[s] = static_cast<int>(resident[s]->components.size());
          ++live;
          peak = std::max(peak, live);
        }

        bool deferred = false;
        for (int nb : in.grid->adjacency[s]) {
          std::unique_lock ln(mtx[nb], std::try_to_lock);
          if (!ln.owns_lock()) {
            deferred = true;  // the neighbor's owner or the final sweep handles it
            continue;
          }
          if (status[nb] == 0) continue;  // neighbor handles the pair when computed
          bool already;
          {
            std::lock_guard lk(book);
            already = processed_pairs.count(pair_key(s, nb)) > 0;
          }
          if (!already) process_pair(s, nb);
        }
        status[s] = deferred ? 1 : 2;
        for (int nb : in.grid->adjacency[s])
          if (status[nb] == 0) local.push_back(nb);
      }
    } catch (...) {
      std::lock_guard lk(book);
      if (!failure) failure = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Sequential sweep: finish edge pairs deferred by failed try-locks.
  for (int s = 0; s < n; ++s) {
    if (status[s] != 1) continue;
    for (int nb : in.grid->adjacency[s]) {
      bool already;
      {
        std::lock_guard lk(book);
        already = processed_pairs.count(pair_key(s, nb)) > 0;
      }
      if (!already) process_pair(s, nb);
    }
    status[s] = 2;
  }

  ConnectivityGraph g = assemble(comp_count, std::move(raw));
  if (stats) {
    stats->wall_seconds = seconds_since(t0);
    stats->slice_seconds = slice_sec;
    stats->edge_seconds = edge_sec;
    stats->peak_resident_slices = peak;
    stats->slices = n;
    fill_class_stats(g, stats);
  }
  return g;
}

std::vector<PartitionClass> components(const ConnectivityGraph& graph) {
  std::vector<PartitionClass> out;
  std::map<int, int> class_of_root;  // keyed by root; filled in vertex order
  for (int v = 0; v < static_cast<int>(graph.vertices.size()); ++v) {
    const int root = graph.partition.find(v);
    auto it = class_of_root.find(root);
    if (it == class_of_root.end()) {
      it = class_of_root.emplace(root, static_cast<int>(out.size())).first;
      out.push_back({});
    }
    out[it->second].vertices.push_back(v);
    if (graph.vertices[v].is_infinite) out[it->second].unbounded = true;
  }
  return out;
}

template std::vector<std::pair<int, int>> add_edges<2>(const SliceFreeSpace<2>&, const SliceFreeSpace<2>&, double);
template std::vector<std::pair<int, int>> add_edges<3>(const SliceFreeSpace<3>&, const SliceFreeSpace<3>&, double);
template bool strict_edge_check<2>(const SliceFreeSpace<2>::Component&, const SliceFreeSpace<2>::Component&, const CollisionBallSet<2>&, const CollisionBallSet<2>&, double, std::uint64_t);
template bool strict_edge_check<3>(const SliceFreeSpace<3>::Component&, const SliceFreeSpace<3>::Component&, const CollisionBallSet<3>&, const CollisionBallSet<3>&, double, std::uint64_t);
template ConnectivityGraph build_sequential<2>(const BuildInputs<2>&, BuildStats*);
template ConnectivityGraph build_sequential<3>(const BuildInputs<3>&, BuildStats*);
template ConnectivityGraph build_parallel<2>(const BuildInputs<2>&, int, BuildStats*);
template ConnectivityGraph build_parallel<3>(const BuildInputs<3>&, int, BuildStats*);

}  // namespace cspace
