#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixwalk/degree_model.hpp"
#include "mixwalk/rng.hpp"

namespace mixwalk {

// Root offspring count: AGW = Z+1 (stationary environment for the walk),
// PLAIN = Z, GRAPH_LIMIT = the degree law the offspring law was tilted from.
enum class RootLaw { AGW, PLAIN, GRAPH_LIMIT };

inline const char* root_law_name(RootLaw r) {
  return r == RootLaw::AGW ? "agw" : (r == RootLaw::PLAIN ? "plain" : "graph_limit");
}

// Tree truncated at realized_depth, BFS order: children of node v are the
// contiguous id block [kid0[v], kid0[v] + kids[v]). Nodes at realized_depth
// are childless placeholders; their counts were never sampled.
struct TruncatedTree {
  std::vector<int> parent;  // -1 at the root
  std::vector<int> depth;
  std::vector<int> kids;
  std::vector<int> kid0;
  std::vector<int> level_off;  // level r = ids [level_off[r], level_off[r+1])
  int realized_depth = 0;
  RootLaw root_law = RootLaw::AGW;

  int nodes() const { return static_cast<int>(parent.size()); }
  int deg(int v) const { return kids[v] + (v != 0); }
  int level_size(int r) const { return level_off[r + 1] - level_off[r]; }
};

// Node budget: explicit argument if > 0, else MIXWALK_BUDGET_NODES, else 1e7.
long long node_budget(long long requested = -1);

double expected_nodes(const OffspringLaw& z, RootLaw root_law, int depth);

TruncatedTree sample_tree(const OffspringLaw& z, RootLaw root_law, int depth, Rng& rng,
                          long long budget = -1);

// Exact SRW law at time t started from the root (degrees: kids+1, root kids).
std::vector<double> srw_dist_on_tree(const TruncatedTree& tree, int t);
double entropy_Ht(const TruncatedTree& tree, int t);

// NBRW descends one level per step; the law lives on depth-t nodes with mass
// = reciprocal product of branching factors along the path.
double nbrw_entropy_Lt(const TruncatedTree& tree, int t);

double ell_t(const OffspringLaw& z, int t);  // E log(Z+1) + (t-1) E log Z
double hY(const OffspringLaw& z);            // E log Z

struct EntropyEstimate {
  int t = 0;
  double h_hat = 0.0;
  double std_err = 0.0;
  int M = 0;
};

enum class HtMethod { AUTO, EXACT, EXPLICIT, ENDPOINT };

// h_t = E[H_t] for t = 1..t_max. Three interchangeable computations:
//   exact    - constant offspring law: the depth chain is a deterministic
//              birth-death recursion, no sampling error;
//   explicit - sample M full trees of depth t_max, exact H_t on each;
//   endpoint - when full trees blow the node budget: per draw run the walk
//              itself and average -log P_t(X_t), whose tree-and-walk mean is
//              exactly h_t. P_t(X_t) comes from pushes on the lazily grown
//              set of nodes that length-t root-to-X_t paths can touch, so
//              truncation loses nothing.
// samples[i] keeps the per-draw value for every t (paired statistics).
struct HtSeries {
  std::vector<EntropyEstimate> by_t;
  std::vector<double> inc;     // inc[t-1] = h_t - h_{t-1}, h_0 = 0
  std::vector<double> inc_se;  // paired standard errors
  std::vector<std::vector<double>> samples;  // [draw][t-1]; empty for exact
  int draws = 0;
  int t_max = 0;
  std::string method;
};

HtSeries estimate_ht(const OffspringLaw& z, RootLaw root_law, int t_max, int M,
                     std::uint64_t seed, long long budget = -1,
                     HtMethod method = HtMethod::AUTO);

// Monte Carlo counterpart of ell_t over M explicit trees.
std::vector<EntropyEstimate> estimate_lt(const OffspringLaw& z, RootLaw root_law, int t_max,
                                         int M, std::uint64_t seed, long long budget = -1);

// Increments decrease to h_X, so the raw last increment is an upper-bound
// estimate with an O(1/t) bias that 5%-level work cannot ignore at t_max ~ 40;
// the reported point estimate extrapolates it away: least squares of the
// increments against 1/t over the back half of the series, evaluated at 0.
// The raw last increment is kept alongside as the safe upper bound.
struct HXEstimate {
  double h_hat = 0.0;  // 1/t intercept of the increment tail
  double std_err = 0.0;
  double last_increment = 0.0;
  double last_increment_se = 0.0;
  double fit_slope = 0.0;  // coefficient of 1/t
  std::vector<double> increments, increment_ses;
  std::vector<double> ht_over_t;
  std::string method;
};

HXEstimate estimate_hX(const HtSeries& series);

std::string ht_series_json_text(const HtSeries& s);
std::string ht_series_csv_text(const HtSeries& s);  // t,h_hat,std_err,increment,increment_se

}  // namespace mixwalk
