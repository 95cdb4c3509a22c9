#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixwalk/rng.hpp"

namespace mixwalk {

// Half-edge-paired multigraph. Parallel edges and self-loops are kept as-is;
// a self-loop contributes 2 to its vertex degree. Immutable after build.
//
// Adjacency entries carry the *directed state* of the incident edge rather
// than the bare edge id: edge e = (u,v) owns states 2e (u->v) and 2e+1
// (v->u), so state ^ 1 is the reversal and state >> 1 recovers the edge id.
// This is what the nonbacktracking kernel needs; for a self-loop the two
// entries at the same vertex stay distinguishable.
struct Multigraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;            // id = position
  std::vector<std::vector<std::pair<int, int>>> adj; // (neighbor, directed state)
  std::vector<int> deg;

  int m() const { return static_cast<int>(edges.size()); }
  int head(int state) const {
    const auto& e = edges[state >> 1];
    return (state & 1) ? e.first : e.second;
  }
  int tail(int state) const {
    const auto& e = edges[state >> 1];
    return (state & 1) ? e.second : e.first;
  }

  static Multigraph from_edges(int n, std::vector<std::pair<int, int>> edges);
  void check() const;  // handshake + adjacency consistency, throws on violation
};

// Uniform half-edge matching (shuffle then pair consecutively).
Multigraph configuration_model(const std::vector<int>& degrees, Rng& rng);

struct Ball {
  int center = 0;
  int radius = 0;
  std::vector<int> vertices;  // BFS order
  std::vector<int> dist;      // aligned with vertices
  std::vector<int> boundary;  // vertices at distance exactly radius
  long long induced_edges = 0;
  bool complete = true;       // false when a node budget stopped the BFS
};

Ball ball(const Multigraph& g, int x, int k, long long node_budget = -1);

// Independent cycles in the induced subgraph on B_k(x):
// (induced edges) - |B_k(x)| + 1. Self-loops and parallel edges count.
long long tree_excess(const Multigraph& g, int x, int k);
bool is_k_root(const Multigraph& g, int x, int K);

struct Census {
  double fraction_k_roots = 0.0;
  long long max_tx_5k = 0;
  std::vector<int> worst_vertices;  // centers attaining max_tx_5k (capped)
  bool exhaustive = true;           // all vertices vs sampled centers
  bool partial = false;             // some 5K-ball hit the node budget
  long long centers = 0;
};

// Exhaustive for n <= 1e5 and K <= 3, otherwise 1000 sampled centers plus the
// maximum-degree vertex. node_budget caps each 5K-ball BFS.
Census root_census(const Multigraph& g, int K, std::uint64_t seed,
                   long long node_budget = 2000000);

// The (d-1)-ary tree of the given depth in which every internal vertex has
// degree d (the root has d children). BFS vertex order.
Multigraph regular_tree(int d, int depth);

// 3-regular graph with exactly one cycle (length 3) and complete binary trees
// of the given depth hanging off each cycle vertex. Every vertex that is far
// enough from the cycle is a K-root; leaf vertices have degree 1.
Multigraph unicyclic_cubic(int depth);

// Edge-list text file: header "# n=<n> m=<m> seed=<seed>", then "u v" lines.
void save_edges(const Multigraph& g, const std::string& path, std::uint64_t seed,
                bool force = false);
struct LoadedGraph {
  Multigraph g;
  std::uint64_t seed = 0;
};
LoadedGraph load_edges(const std::string& path);

}  // namespace mixwalk
