#pragma once
#include <string>
#include <vector>

#include "mixwalk/degree_model.hpp"
#include "mixwalk/rng.hpp"

namespace mixwalk {

// Expected entropies of the first three walk steps on the augmented tree,
// computed exactly: h1 and the level-3 share of h3 have closed forms in the
// offspring moments, the rest is an expectation over the first two
// generations, which we enumerate through the distribution of sums of
// 1/(Z+1) (rational atoms over a common denominator).
struct ThreeStep {
  double h1, h2, h3;
};
ThreeStep exact_h123(const OffspringLaw& z);

// level-3 share of h3: beta^2 E[log(Z+1)] + 2 beta E[Z log(Z+1)/(Z+1)]
double expected_R(const OffspringLaw& z);

// h3 <= E[log(Z+1)] + 2 beta E[Z log(Z+1)/(Z+1)] - (1-beta^2) log(1-beta^2),
// with equality exactly for constant laws
double h3_upper_bound(const OffspringLaw& z);

// g(x) = log((x+1)/x) - (2x+1)/(2(x+1)^2) log(2x+1); negative on [2, inf),
// which is what turns the three-step gap into a bound by 2 E[log Z]
double g_eval(double x);
double g_prime(double x);
double f3_eval(double x);

struct GScan {
  double x_lo = 0, x_hi = 0;
  double worst = 0;  // max of g over the grid
  int sign_changes_gprime = 0;
  bool all_negative = false;
};
GScan scan_g(double x_lo, double x_hi, double factor);

// One link of the comparison chain; asserted lhs < rhs (strict) or
// lhs <= rhs.
struct ChainStep {
  std::string name;
  double lhs = 0, rhs = 0;
  bool strict = false, ok = false;
};

struct Verification {
  ThreeStep exact;
  double e_g = 0;       // E[g(Z)]
  double hx_upper = 0;  // (h3 - h1) / 2, an upper bound on the walk speed
  double h_y = 0;       // E[log Z]
  std::vector<ChainStep> steps;
  bool ok = false;
};

// Checks the five-link chain between the exact three-step gap and
// 2 E[log Z]. For constant laws the first three links are provable
// equalities, so they are only required strict when the law is not
// constant; the last two stay strict either way. Needs Z >= 2 (the sign of
// g does).
Verification verify_entropy_gap(const OffspringLaw& z);

// h1 >= h2 - h1 >= h3 - h2
bool increments_nonincreasing(const ThreeStep& s, double tol = 1e-12);

// non-constant law on 2..4 atoms from {2..hi} with rational weights
OffspringLaw random_strict_law(Rng& rng, int hi = 12);

}  // namespace mixwalk
