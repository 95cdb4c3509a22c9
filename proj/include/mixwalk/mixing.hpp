#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixwalk/degree_model.hpp"
#include "mixwalk/multigraph.hpp"
#include "mixwalk/rng.hpp"
#include "mixwalk/walk.hpp"

namespace mixwalk {

// d_tv curve indexed by t = 0..t_max
using Curve = std::vector<double>;

extern const std::vector<double> kDefaultEpsGrid;  // {0.75, 0.5, 0.25, 0.1, 0.05}

bool is_connected(const Multigraph& g);

// deg/2m for both walks (the NBRW edge chain's uniform law projects to it)
VertexDist stationary(const Multigraph& g, WalkKind kind);

double tv(const VertexDist& mu, const VertexDist& nu);

Curve dtv_curve(const Multigraph& g, int x0, int t_max, WalkKind kind);

// first t with curve[t] <= eps, or -1
int first_crossing(const Curve& curve, double eps);

// throwing flavor: "not mixed within horizon"
int t_mix(const Curve& curve, double eps);

struct StartPolicy {
  int all_cap = 2000;  // exact worst case at or below this n
  int samples = 10;    // structured sample size above it
};

struct MixingProfile {
  int n = 0;
  long long m = 0;
  std::uint64_t graph_seed = 0;
  std::string law;  // free-form descriptor recorded by the caller
  WalkKind kind = WalkKind::SRW;
  int t_max = 0;
  std::vector<double> eps_grid;
  std::vector<int> starts;
  std::vector<Curve> curves;  // one per start
  Curve envelope;             // pointwise max over starts
  std::vector<std::vector<int>> t_mix_starts;  // [start][eps], -1 = not reached
  std::vector<int> t_mix_envelope;             // [eps], -1 = not reached
  int expander_guard = -1;  // envelope below 0.01 by 50 log n: 1 yes, 0 no, -1 not evaluable
  double wall_seconds = 0.0;  // in-memory only; serialized output stays run-independent
};

// sampled policy always includes max-degree, min-degree and (if present) a
// vertex whose radius-2 ball is not a tree, then uniform draws
std::vector<int> pick_starts(const Multigraph& g, const StartPolicy& policy, std::uint64_t seed);

MixingProfile worst_case_profile(const Multigraph& g, const StartPolicy& policy, int t_max,
                                 WalkKind kind,
                                 const std::vector<double>& eps_grid = kDefaultEpsGrid,
                                 std::uint64_t seed = 0);

std::string profile_json_text(const MixingProfile& p);
std::string curve_csv_text(const Curve& c);

struct LambdaSet {
  std::vector<int> lambda;  // boundary vertices whose SRW is still eps-far at time t
  double mu_mass = 0.0;     // hitting measure of the set
  int boundary_size = 0;
};

LambdaSet lambda_set(const Multigraph& g, int x0, int K, int t, double eps);

struct ReachRootResult {
  double empirical_success = 0.0;
  double bound = 0.0;  // 1 - exp(-K/128)
  double std_err = 0.0;
  int trials = 0;
  bool ok = false;  // empirical >= bound - 3 sigma
};

// SRW of length 4K from sampled starts whose 5K-ball has excess <= 1;
// success = endpoint has a tree K-ball
ReachRootResult reach_root_experiment(const Multigraph& g, int K, int trials, Rng& rng);

// same walk on the infinite cubic environment with a single 3-cycle,
// collapsed to the distance-from-cycle chain (no truncation artefacts)
ReachRootResult reach_root_unicyclic(int K, int trials, std::uint64_t seed);

struct CutoffRow {
  int n = 0;
  int loc_half = -1;       // envelope t_mix(1/2)
  int window = -1;         // t_mix(eps_lo) - t_mix(eps_hi)
  double predicted = 0.0;  // log(n) / h_hat
  double ratio = 0.0;      // loc_half / predicted
  double ratio_q = 0.0;    // t_mix(1/4) / t_mix(3/4), -> 1 under cutoff
};

struct CutoffReport {
  WalkKind kind = WalkKind::SRW;
  double h_hat = 0.0;
  double eps_lo = 0.25, eps_hi = 0.75;
  std::vector<CutoffRow> rows;
  double window_slope = 0.0;  // window regressed on sqrt(log n)
  double window_r2 = 0.0;
};

CutoffReport cutoff_report(const std::vector<MixingProfile>& profiles, double h_hat,
                           double eps_lo = 0.25, double eps_hi = 0.75);

std::string cutoff_json_text(const CutoffReport& r);

struct ConnectedSample {
  Multigraph g;
  std::uint64_t used_seed = 0;
  int regenerated = 0;  // discarded disconnected draws
};

ConnectedSample sample_connected_graph(const DegreeDistribution& law, int n, std::uint64_t seed);

}  // namespace mixwalk
