#include "mixwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mixwalk {

VertexDist delta_dist(int n, int x) {
  if (x < 0 || x >= n) throw std::invalid_argument("delta_dist: vertex out of range");
  VertexDist d(n, 0.0);
  d[x] = 1.0;
  return d;
}

static void check_vertex_dist(const Multigraph& g, const VertexDist& d) {
  if (static_cast<int>(d.size()) != g.n)
    throw std::invalid_argument("vertex distribution size mismatch");
  for (int v = 0; v < g.n; ++v)
    if (g.deg[v] == 0 && d[v] != 0.0)
      throw std::invalid_argument("positive mass on an isolated vertex");
}

VertexDist srw_push(const Multigraph& g, const VertexDist& d) {
  check_vertex_dist(g, d);
  VertexDist out(g.n, 0.0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < g.n; ++v) {
    double acc = 0.0;
    for (auto [w, s] : g.adj[v]) acc += d[w] / g.deg[w];
    out[v] = acc;
  }
  return out;
}

VertexDist srw_push_serial(const Multigraph& g, const VertexDist& d) {
  check_vertex_dist(g, d);
  VertexDist out(g.n, 0.0);
  for (int v = 0; v < g.n; ++v) {
    if (d[v] == 0.0) continue;
    double share = d[v] / g.deg[v];
    for (auto [w, s] : g.adj[v]) out[w] += share;
  }
  return out;
}

EdgeDist nbrw_start(const Multigraph& g, int x0) {
  if (x0 < 0 || x0 >= g.n) throw std::invalid_argument("nbrw_start: vertex out of range");
  if (g.deg[x0] == 0) throw std::invalid_argument("nbrw_start: isolated start");
  EdgeDist d(2 * g.m(), 0.0);
  double p = 1.0 / g.deg[x0];
  for (auto [w, s] : g.adj[x0]) d[s] = p;
  return d;
}

EdgeDist nbrw_push(const Multigraph& g, const EdgeDist& d) {
  if (d.size() != 2 * g.edges.size()) throw std::invalid_argument("edge distribution size mismatch");
  // pass 1: total incoming mass per head vertex (s leaves v, so s^1 enters v)
  std::vector<double> in_sum(g.n, 0.0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < g.n; ++v) {
    double acc = 0.0;
    for (auto [w, s] : g.adj[v]) acc += d[s ^ 1];
    in_sum[v] = acc;
  }
  // pass 2: each out-state of v gets everything that entered v except its own
  // reversal, spread over deg(v)-1 choices
  EdgeDist out(d.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < g.n; ++v) {
    if (g.deg[v] == 1) {
      auto [w, s] = g.adj[v][0];
      out[s] = d[s ^ 1];  // forced backtrack
      continue;
    }
    double inv = 1.0 / (g.deg[v] - 1);
    for (auto [w, s] : g.adj[v]) out[s] = (in_sum[v] - d[s ^ 1]) * inv;
  }
  return out;
}

EdgeDist nbrw_push_serial(const Multigraph& g, const EdgeDist& d) {
  if (d.size() != 2 * g.edges.size()) throw std::invalid_argument("edge distribution size mismatch");
  EdgeDist out(d.size(), 0.0);
  for (int e = 0; e < g.m(); ++e) {
    for (int dir = 0; dir < 2; ++dir) {
      int s = 2 * e + dir;
      if (d[s] == 0.0) continue;
      int v = g.head(s);
      if (g.deg[v] == 1) {
        out[s ^ 1] += d[s];
        continue;
      }
      double share = d[s] / (g.deg[v] - 1);
      for (auto [w, t] : g.adj[v])
        if (t != (s ^ 1)) out[t] += share;
    }
  }
  return out;
}

VertexDist vertex_marginal(const Multigraph& g, const EdgeDist& d) {
  if (d.size() != 2 * g.edges.size()) throw std::invalid_argument("edge distribution size mismatch");
  VertexDist out(g.n, 0.0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < g.n; ++v) {
    double acc = 0.0;
    for (auto [w, s] : g.adj[v]) acc += d[s ^ 1];
    out[v] = acc;
  }
  return out;
}

Trajectory sample_walk(const Multigraph& g, int x0, int steps, WalkKind kind,
                       std::uint64_t seed) {
  if (x0 < 0 || x0 >= g.n) throw std::invalid_argument("sample_walk: vertex out of range");
  if (steps < 0) throw std::invalid_argument("sample_walk: negative step count");
  if (steps > 0 && g.deg[x0] == 0) throw std::invalid_argument("sample_walk: isolated start");
  Trajectory traj{x0, {x0}, kind, seed};
  traj.verts.reserve(steps + 1);
  Rng rng(seed);
  int cur = x0;
  int in_state = -1;  // directed state we arrived on
  for (int t = 0; t < steps; ++t) {
    const auto& nbrs = g.adj[cur];
    int pick;
    if (kind == WalkKind::SRW || in_state == -1) {
      pick = static_cast<int>(rng.below(nbrs.size()));
    } else if (g.deg[cur] == 1) {
      pick = 0;  // forced backtrack
    } else {
      // uniform over out-states excluding the reversal of in_state
      int forbidden = in_state ^ 1;
      int fpos = -1;
      for (int i = 0; i < static_cast<int>(nbrs.size()); ++i)
        if (nbrs[i].second == forbidden) {
          fpos = i;
          break;
        }
      pick = static_cast<int>(rng.below(nbrs.size() - 1));
      if (pick >= fpos) ++pick;
    }
    in_state = nbrs[pick].second;
    cur = nbrs[pick].first;
    traj.verts.push_back(cur);
  }
  return traj;
}

namespace {

struct AbsorbingBall {
  std::vector<int> verts;           // ball vertices, BFS order
  std::vector<int> local_dist;
  std::vector<std::vector<int>> in_nbrs;  // per local vertex: local interior sources
  std::vector<double> invdeg;             // per local vertex (interior use only)
  std::vector<int> boundary_local;
  int interior = 0;  // locals with dist < K (not necessarily a prefix)
};

AbsorbingBall build_absorbing(const Multigraph& g, int x0, int K) {
  Ball b = ball(g, x0, K);
  if (b.boundary.empty())
    throw std::invalid_argument("hitting_measure: empty sphere at this radius");
  AbsorbingBall a;
  a.verts = b.vertices;
  a.local_dist = b.dist;
  std::vector<int> local_of(g.n, -1);
  for (int i = 0; i < static_cast<int>(a.verts.size()); ++i) local_of[a.verts[i]] = i;
  a.in_nbrs.resize(a.verts.size());
  a.invdeg.resize(a.verts.size());
  for (int i = 0; i < static_cast<int>(a.verts.size()); ++i) {
    int v = a.verts[i];
    a.invdeg[i] = g.deg[v] > 0 ? 1.0 / g.deg[v] : 0.0;
    if (a.local_dist[i] < K) ++a.interior;
    for (auto [w, s] : g.adj[v]) {
      int lw = local_of[w];
      if (lw >= 0 && a.local_dist[lw] < K) a.in_nbrs[i].push_back(lw);
    }
    if (a.local_dist[i] == K) a.boundary_local.push_back(i);
  }
  return a;
}

}  // namespace

HittingMeasure hitting_measure(const Multigraph& g, int x0, int K, int s_max) {
  if (K <= 0)
    throw std::invalid_argument("hitting_measure: K = 0 has no first hitting time");
  AbsorbingBall a = build_absorbing(g, x0, K);
  if (s_max <= 0) s_max = 256 + 200 * K;

  int L = static_cast<int>(a.verts.size());
  std::vector<double> d(L, 0.0), nxt(L, 0.0);
  d[0] = 1.0;  // x0 is the BFS origin
  HittingMeasure hm;
  hm.K = K;
  for (int li : a.boundary_local) hm.boundary.push_back(a.verts[li]);
  hm.mu.assign(hm.boundary.size(), 0.0);

  double residual = 1.0;
  for (int s = 1; s <= s_max && residual >= 1e-9; ++s) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
#pragma omp parallel for schedule(static) if (L > 4096)
    for (int i = 0; i < L; ++i) {
      double acc = 0.0;
      for (int j : a.in_nbrs[i]) acc += d[j] * a.invdeg[j];
      nxt[i] = acc;
    }
    residual = 0.0;
    for (int i = 0; i < L; ++i) {
      if (a.local_dist[i] < K) residual += nxt[i];
    }
    for (std::size_t bi = 0; bi < a.boundary_local.size(); ++bi) {
      int i = a.boundary_local[bi];
      hm.mu[bi] += nxt[i];
      nxt[i] = 0.0;
    }
    hm.tau_tail.push_back(residual);
    d.swap(nxt);
  }
  hm.captured = std::accumulate(hm.mu.begin(), hm.mu.end(), 0.0);
  hm.unabsorbed = residual;
  return hm;
}

HittingMeasure hitting_measure_mc(const Multigraph& g, int x0, int K, int trials, Rng& rng,
                                  int s_max) {
  if (K <= 0)
    throw std::invalid_argument("hitting_measure: K = 0 has no first hitting time");
  if (trials <= 0) throw std::invalid_argument("hitting_measure_mc: trials must be positive");
  Ball b = ball(g, x0, K);
  if (b.boundary.empty())
    throw std::invalid_argument("hitting_measure: empty sphere at this radius");
  if (s_max <= 0) s_max = 256 + 200 * K;

  std::vector<int> dist_of(g.n, -1);
  for (std::size_t i = 0; i < b.vertices.size(); ++i) dist_of[b.vertices[i]] = b.dist[i];
  std::vector<int> slot_of(g.n, -1);
  HittingMeasure hm;
  hm.K = K;
  hm.boundary = b.boundary;
  for (std::size_t i = 0; i < hm.boundary.size(); ++i) slot_of[hm.boundary[i]] = i;
  hm.mu.assign(hm.boundary.size(), 0.0);
  std::vector<long long> over(s_max, 0);  // walks with tau > s
  long long lost = 0;

  for (int trial = 0; trial < trials; ++trial) {
    int cur = x0;
    int hit_time = -1;
    for (int s = 1; s <= s_max; ++s) {
      const auto& nbrs = g.adj[cur];
      cur = nbrs[rng.below(nbrs.size())].first;
      if (dist_of[cur] == K) {
        hit_time = s;
        hm.mu[slot_of[cur]] += 1.0;
        break;
      }
    }
    if (hit_time < 0) {
      ++lost;
      hit_time = s_max + 1;
    }
    for (int s = 1; s < hit_time && s <= s_max; ++s) ++over[s - 1];
  }
  for (double& x : hm.mu) x /= trials;
  hm.tau_tail.resize(s_max);
  for (int s = 0; s < s_max; ++s) hm.tau_tail[s] = static_cast<double>(over[s]) / trials;
  hm.captured = std::accumulate(hm.mu.begin(), hm.mu.end(), 0.0);
  hm.unabsorbed = static_cast<double>(lost) / trials;
  return hm;
}

}  // namespace mixwalk
