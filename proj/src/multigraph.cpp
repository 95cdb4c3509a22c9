#include "mixwalk/multigraph.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mixwalk/json_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixwalk {

Multigraph Multigraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  Multigraph g;
  g.n = n;
  g.edges = std::move(edges);
  g.adj.assign(n, {});
  for (int e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edges[e];
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("from_edges: endpoint out of range");
    g.adj[u].push_back({v, 2 * e});
    g.adj[v].push_back({u, 2 * e + 1});
  }
  g.deg.resize(n);
  for (int v = 0; v < n; ++v) g.deg[v] = static_cast<int>(g.adj[v].size());
  return g;
}

void Multigraph::check() const {
  long long degsum = std::accumulate(deg.begin(), deg.end(), 0ll);
  if (degsum != 2ll * m()) throw std::logic_error("handshake violated");
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(adj[v].size()) != deg[v]) throw std::logic_error("degree mismatch");
    for (auto [w, s] : adj[v]) {
      if (tail(s) != v || head(s) != w) throw std::logic_error("adjacency state inconsistent");
    }
  }
}

Multigraph configuration_model(const std::vector<int>& degrees, Rng& rng) {
  long long total = std::accumulate(degrees.begin(), degrees.end(), 0ll);
  if (total % 2 != 0) throw std::invalid_argument("configuration_model: odd total degree");
  std::vector<int> half;
  half.reserve(total);
  for (int v = 0; v < static_cast<int>(degrees.size()); ++v) {
    if (degrees[v] < 0) throw std::invalid_argument("configuration_model: negative degree");
    for (int i = 0; i < degrees[v]; ++i) half.push_back(v);
  }
  for (std::size_t i = half.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(half[i - 1], half[j]);
  }
  std::vector<std::pair<int, int>> edges(half.size() / 2);
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e] = {half[2 * e], half[2 * e + 1]};
  return Multigraph::from_edges(static_cast<int>(degrees.size()), std::move(edges));
}

Ball ball(const Multigraph& g, int x, int k, long long node_budget) {
  if (x < 0 || x >= g.n) throw std::invalid_argument("ball: center out of range");
  if (k < 0) throw std::invalid_argument("ball: negative radius");
  Ball b;
  b.center = x;
  b.radius = k;
  std::vector<int> dist_of(g.n, -1);
  b.vertices.push_back(x);
  b.dist.push_back(0);
  dist_of[x] = 0;
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    int v = b.vertices[i];
    int d = b.dist[i];
    if (d == k) break;  // BFS order: all later vertices are at distance >= d
    for (auto [w, s] : g.adj[v]) {
      if (dist_of[w] != -1) continue;
      if (node_budget >= 0 && static_cast<long long>(b.vertices.size()) >= node_budget) {
        b.complete = false;
        break;
      }
      dist_of[w] = d + 1;
      b.vertices.push_back(w);
      b.dist.push_back(d + 1);
    }
    if (!b.complete) break;
  }
  long long entries = 0;
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    int v = b.vertices[i];
    if (b.dist[i] == k) b.boundary.push_back(v);
    for (auto [w, s] : g.adj[v])
      if (dist_of[w] != -1) ++entries;
  }
  b.induced_edges = entries / 2;
  return b;
}

long long tree_excess(const Multigraph& g, int x, int k) {
  Ball b = ball(g, x, k);
  return b.induced_edges - static_cast<long long>(b.vertices.size()) + 1;
}

bool is_k_root(const Multigraph& g, int x, int K) { return tree_excess(g, x, K) == 0; }

namespace {

// BFS with reusable scratch (stamp array) so the census does not reallocate
// per center. Returns {tree excess, complete}.
struct BallScratch {
  std::vector<int> stamp, dist, queue_v;
  int epoch = 0;
  explicit BallScratch(int n) : stamp(n, -1), dist(n, 0) {}

  std::pair<long long, bool> excess(const Multigraph& g, int x, int k, long long budget) {
    ++epoch;
    queue_v.clear();
    queue_v.push_back(x);
    stamp[x] = epoch;
    dist[x] = 0;
    bool complete = true;
    for (std::size_t i = 0; i < queue_v.size() && complete; ++i) {
      int v = queue_v[i];
      if (dist[v] == k) break;
      for (auto [w, s] : g.adj[v]) {
        if (stamp[w] == epoch) continue;
        if (budget >= 0 && static_cast<long long>(queue_v.size()) >= budget) {
          complete = false;
          break;
        }
        stamp[w] = epoch;
        dist[w] = dist[v] + 1;
        queue_v.push_back(w);
      }
    }
    long long entries = 0;
    for (int v : queue_v)
      for (auto [w, s] : g.adj[v])
        if (stamp[w] == epoch) ++entries;
    return {entries / 2 - static_cast<long long>(queue_v.size()) + 1, complete};
  }
};

}  // namespace

Census root_census(const Multigraph& g, int K, std::uint64_t seed, long long node_budget) {
  if (K < 0) throw std::invalid_argument("root_census: negative K");
  Census c;
  c.exhaustive = (g.n <= 100000 && K <= 3);
  std::vector<int> centers;
  if (c.exhaustive) {
    centers.resize(g.n);
    std::iota(centers.begin(), centers.end(), 0);
  } else {
    Rng rng = Rng::stream(seed, 0x6373u);  // census sampling stream
    int want = std::min(g.n, 1000);
    for (int i = 0; i < want; ++i) centers.push_back(static_cast<int>(rng.below(g.n)));
    int vmax = static_cast<int>(std::max_element(g.deg.begin(), g.deg.end()) - g.deg.begin());
    centers.push_back(vmax);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  }
  c.centers = static_cast<long long>(centers.size());

  std::vector<long long> tx5(centers.size(), 0);
  std::vector<char> root_flag(centers.size(), 0), ok5(centers.size(), 1);
#pragma omp parallel
  {
    BallScratch scratch(g.n);
#pragma omp for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(centers.size()); ++i) {
      auto [txk, okk] = scratch.excess(g, centers[i], K, node_budget);
      root_flag[i] = (okk && txk == 0) ? 1 : 0;
      auto [t5, ok] = scratch.excess(g, centers[i], 5 * K, node_budget);
      tx5[i] = t5;
      ok5[i] = ok ? 1 : 0;
      if (!okk) ok5[i] = 0;
    }
  }
  long long roots = 0;
  bool have_max = false;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    roots += root_flag[i];
    if (!ok5[i]) {
      c.partial = true;
      continue;
    }
    if (!have_max || tx5[i] > c.max_tx_5k) have_max = true, c.max_tx_5k = tx5[i];
  }
  c.fraction_k_roots = centers.empty() ? 0.0 : static_cast<double>(roots) / centers.size();
  for (std::size_t i = 0; i < centers.size() && c.worst_vertices.size() < 16; ++i)
    if (ok5[i] && tx5[i] == c.max_tx_5k) c.worst_vertices.push_back(centers[i]);
  return c;
}

Multigraph regular_tree(int d, int depth) {
  if (d < 2 || depth < 0) throw std::invalid_argument("regular_tree: bad parameters");
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, int>> frontier;  // (vertex, its depth)
  int next = 1;
  frontier.push_back({0, 0});
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    auto [v, dep] = frontier[i];
    if (dep == depth) continue;
    int kids = (dep == 0) ? d : d - 1;
    for (int c = 0; c < kids; ++c) {
      edges.push_back({v, next});
      frontier.push_back({next, dep + 1});
      ++next;
    }
  }
  return Multigraph::from_edges(next, std::move(edges));
}

Multigraph unicyclic_cubic(int depth) {
  if (depth < 1) throw std::invalid_argument("unicyclic_cubic: depth < 1");
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 0}};
  int next = 3;
  std::vector<std::pair<int, int>> frontier;
  for (int c = 0; c < 3; ++c) {
    edges.push_back({c, next});
    frontier.push_back({next, 1});
    ++next;
  }
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    auto [v, dep] = frontier[i];
    if (dep == depth) continue;
    for (int c = 0; c < 2; ++c) {
      edges.push_back({v, next});
      frontier.push_back({next, dep + 1});
      ++next;
    }
  }
  return Multigraph::from_edges(next, std::move(edges));
}

void save_edges(const Multigraph& g, const std::string& path, std::uint64_t seed, bool force) {
  std::string out;
  out.reserve(16ull * g.m() + 64);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# n=%d m=%d seed=%" PRIu64 "\n", g.n, g.m(), seed);
  out += buf;
  for (auto [u, v] : g.edges) {
    std::snprintf(buf, sizeof(buf), "%d %d\n", u, v);
    out += buf;
  }
  write_text_file(path, out, force);
}

LoadedGraph load_edges(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::string header;
  std::getline(in, header);
  int n = 0, m = 0;
  std::uint64_t seed = 0;
  if (std::sscanf(header.c_str(), "# n=%d m=%d seed=%" SCNu64, &n, &m, &seed) != 3)
    throw std::runtime_error("bad edge-list header: " + header);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  int u, v;
  while (in >> u >> v) edges.push_back({u, v});
  if (static_cast<int>(edges.size()) != m)
    throw std::runtime_error("edge count does not match header m in " + path);
  LoadedGraph lg{Multigraph::from_edges(n, std::move(edges)), seed};
  lg.g.check();
  return lg;
}

}  // namespace mixwalk
