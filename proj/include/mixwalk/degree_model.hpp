#pragma once
#include <vector>

#include "mixwalk/rng.hpp"

namespace mixwalk {

// Vertex-degree law (p_k). strict means p_1 = p_2 = 0, i.e. minimum degree 3,
// the regime in which the walks below mix and the offspring law has Z >= 2.
struct DegreeDistribution {
  std::vector<int> support;   // degrees k, strictly increasing, k >= 1
  std::vector<double> probs;  // same length, sums to 1
  bool strict = false;

  void validate() const;  // throws std::invalid_argument on any violation
  double mean() const;
  double second_moment() const;
  int sample(Rng& rng) const;  // CDF inversion
};

// Offspring law of the size-biased degree, Z = K - 1 with P(Z=k-1) ~ k p_k:
// the number of forward children seen along an edge of the random graph.
struct OffspringLaw {
  std::vector<int> support;  // values z >= 0, strictly increasing
  std::vector<double> probs;
  bool strict = false;  // min support >= 2

  void validate() const;
  double mean() const;
  bool constant() const { return support.size() == 1; }
  int sample(Rng& rng) const;
};

// Log-moments of Z used throughout the entropy computations (nats).
struct MomentSet {
  double mean_Z;
  double e_log_Z;      // h_Y
  double e_log_Zp1;    // h_1
  double beta;         // E[Z/(Z+1)]
  double e_Zlog_over;  // E[Z log(Z+1)/(Z+1)]
};

DegreeDistribution make_degree_law(std::vector<int> support, std::vector<double> probs);
OffspringLaw make_offspring_law(std::vector<int> support, std::vector<double> probs);

// p_k ~ q^k on [k_min, k_max], renormalized: a geometric tail cut at k_max.
DegreeDistribution truncated_geometric(double q, int k_min, int k_max);

OffspringLaw size_biased_offspring(const DegreeDistribution& dd);

// Inverse of size biasing: P(D = z+1) ~ P(Z = z)/(z+1).
DegreeDistribution unbias(const OffspringLaw& z);

MomentSet moments(const OffspringLaw& z);

// i.i.d. degrees conditioned on even sum, by whole-sequence rejection.
// Errors out when the law makes an even sum impossible (all-odd support with
// odd n).
std::vector<int> sample_degrees(const DegreeDistribution& dd, int n, Rng& rng);

struct TailCheck {
  double delta_n;    // exp((log n)^{1/2 - delta})
  double tail_prob;  // P(Z > delta_n)
  bool ok;           // tail_prob < 1/n
};

TailCheck check_tail(const OffspringLaw& z, double n, double delta);

}  // namespace mixwalk
