#pragma once
#include <cstdint>
#include <vector>

#include "mixwalk/multigraph.hpp"
#include "mixwalk/rng.hpp"

namespace mixwalk {

using VertexDist = std::vector<double>;  // indexed by vertex
using EdgeDist = std::vector<double>;    // indexed by directed state, size 2m

enum class WalkKind { SRW, NBRW };

inline const char* walk_name(WalkKind k) { return k == WalkKind::SRW ? "srw" : "nbrw"; }

VertexDist delta_dist(int n, int x);

// One SRW step. Gather form, parallel over target vertices, so the result is
// independent of the thread count. A self-loop at x returns 2/deg(x) of x's
// mass to itself.
VertexDist srw_push(const Multigraph& g, const VertexDist& d);
// Scatter reference implementation (serial), kept as an independent oracle
// and as the baseline for the kernel benchmark.
VertexDist srw_push_serial(const Multigraph& g, const VertexDist& d);

// NBRW on directed states: mass on state s (an oriented edge into head(s))
// moves uniformly over the out-states of head(s) except the reversal s^1.
// A parallel edge back is a different state and is allowed; deg-1 heads
// backtrack (forced move), which strict-mode graphs never hit.
EdgeDist nbrw_start(const Multigraph& g, int x0);  // uniform on out-states of x0
EdgeDist nbrw_push(const Multigraph& g, const EdgeDist& d);
EdgeDist nbrw_push_serial(const Multigraph& g, const EdgeDist& d);
VertexDist vertex_marginal(const Multigraph& g, const EdgeDist& d);  // sum by head

struct Trajectory {
  int start = 0;
  std::vector<int> verts;  // steps + 1 entries, verts[0] == start
  WalkKind kind = WalkKind::SRW;
  std::uint64_t seed = 0;
};

Trajectory sample_walk(const Multigraph& g, int x0, int steps, WalkKind kind,
                       std::uint64_t seed);

struct HittingMeasure {
  int K = 0;
  std::vector<int> boundary;     // the sphere, BFS discovery order
  std::vector<double> mu;        // aligned with boundary; sums to captured
  std::vector<double> tau_tail;  // tau_tail[s-1] = P(tau_K > s)
  double captured = 0.0;         // mass absorbed on the sphere
  double unabsorbed = 0.0;       // mass still transient when iteration stopped
};

// Exact absorbing propagation of the SRW from x0 until the transient residual
// drops below 1e-9 or s_max steps elapse (s_max <= 0 picks a generous
// default). K = 0 makes the first-hit time ill-posed and errors out.
HittingMeasure hitting_measure(const Multigraph& g, int x0, int K, int s_max = 0);
// Monte Carlo counterpart over `trials` walks.
HittingMeasure hitting_measure_mc(const Multigraph& g, int x0, int K, int trials, Rng& rng,
                                  int s_max = 0);

}  // namespace mixwalk
