#include "mixwalk/entropy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mixwalk {

namespace {

// distribution of a sum of k independent copies of 1/(Z+1); atoms are
// integer numerators over the common denominator L
using Atoms = std::map<long long, double>;

std::vector<Atoms> sum_tables(const OffspringLaw& z, long long L, int k_max) {
  std::vector<Atoms> sums(k_max + 1);
  sums[0][0] = 1.0;
  for (int k = 1; k <= k_max; ++k)
    for (const auto& [num, pr] : sums[k - 1])
      for (std::size_t i = 0; i < z.support.size(); ++i)
        sums[k][num + L / (z.support[i] + 1)] += pr * z.probs[i];
  return sums;
}

}  // namespace

ThreeStep exact_h123(const OffspringLaw& z) {
  z.validate();
  auto m = moments(z);
  long long L = 1;
  int z_max = 0;
  for (int v : z.support) {
    L = std::lcm(L, static_cast<long long>(v) + 1);
    z_max = std::max(z_max, v);
  }
  auto sums = sum_tables(z, L, z_max + 1);

  ThreeStep out;
  out.h1 = m.e_log_Zp1;

  // h2: the walk either returns to the root, with probability
  // A = (1/d0) sum_j 1/(Z_j+1), or sits uniformly below one child
  long double h2 = 0.0L;
  for (std::size_t i0 = 0; i0 < z.support.size(); ++i0) {
    int d0 = z.support[i0] + 1;
    for (const auto& [num, pr] : sums[d0]) {
      long double a = static_cast<long double>(num) / L / d0;
      h2 += z.probs[i0] * pr * (-a * std::log(a));
    }
  }
  h2 += m.beta * m.e_log_Zp1 + m.e_Zlog_over;
  out.h2 = static_cast<double>(h2);

  // h3 = (level-3 share, closed form) + (level-1 share, enumerated);
  // P(X_3 = x) = (1/d0) (A + T_x/(Z_x+1)) with T_x the sum of 1/(Z_y+1)
  // over the children y of x
  long double es = 0.0L;
  for (std::size_t i0 = 0; i0 < z.support.size(); ++i0) {
    int d0 = z.support[i0] + 1;
    for (std::size_t i1 = 0; i1 < z.support.size(); ++i1) {
      int z1 = z.support[i1];
      double p01 = z.probs[i0] * z.probs[i1];
      for (const auto& [rest, pr] : sums[d0 - 1])
        for (const auto& [t1, pt] : sums[z1]) {
          long double a = (rest + static_cast<long double>(L) / (z1 + 1)) / L / d0;
          long double p = (a + static_cast<long double>(t1) / L / (z1 + 1)) / d0;
          es += p01 * pr * pt * d0 * (-p * std::log(p));
        }
    }
  }
  out.h3 = expected_R(z) + static_cast<double>(es);
  return out;
}

double expected_R(const OffspringLaw& z) {
  auto m = moments(z);
  return m.beta * m.beta * m.e_log_Zp1 + 2 * m.beta * m.e_Zlog_over;
}

double h3_upper_bound(const OffspringLaw& z) {
  auto m = moments(z);
  double c = 1 - m.beta * m.beta;
  return m.e_log_Zp1 + 2 * m.beta * m.e_Zlog_over - c * std::log(c);
}

double g_eval(double x) {
  return std::log1p(1.0 / x) - (2 * x + 1) / (2 * (x + 1) * (x + 1)) * std::log(2 * x + 1);
}

double g_prime(double x) {
  double xp = x + 1;
  return (x * x * std::log(2 * x + 1) - (2 * x + 1) * xp) / (x * xp * xp * xp);
}

double f3_eval(double x) {
  return (2 * x + 1) / (x + 1) * std::log(2 * x + 1) - 2 * std::log(x + 1);
}

GScan scan_g(double x_lo, double x_hi, double factor) {
  if (!(x_lo > 0) || !(x_hi > x_lo) || !(factor > 1))
    throw std::invalid_argument("scan_g: bad grid");
  GScan s;
  s.x_lo = x_lo;
  s.x_hi = x_hi;
  s.worst = -1e300;
  int prev_sign = 0;
  bool first = true;
  for (double x = x_lo;; x *= factor) {
    if (x > x_hi) x = x_hi;
    s.worst = std::max(s.worst, g_eval(x));
    int sign = g_prime(x) > 0 ? 1 : -1;
    if (!first && sign != prev_sign) ++s.sign_changes_gprime;
    prev_sign = sign;
    first = false;
    if (x >= x_hi) break;
  }
  s.all_negative = s.worst < 0;
  return s;
}

Verification verify_entropy_gap(const OffspringLaw& z) {
  z.validate();
  if (z.support.front() < 2)
    throw std::invalid_argument("verify_entropy_gap: needs Z >= 2");
  auto m = moments(z);
  double beta = m.beta;
  bool mixed = !z.constant();

  double e_f1f2 = 0, e_f3 = 0, e_f3_over = 0;
  Verification v;
  v.e_g = 0;
  double g_max = -1e300;
  for (std::size_t i = 0; i < z.support.size(); ++i) {
    double x = z.support[i], p = z.probs[i];
    double f1 = (2 * x + 1) / (x + 1);
    double f2 = std::log((2 * x + 1) / ((x + 1) * (x + 1)));
    double f3 = f3_eval(x);
    e_f1f2 += p * f1 * f2;
    e_f3 += p * f3;
    e_f3_over += p * f3 / (x + 1);
    v.e_g += p * g_eval(x);
    g_max = std::max(g_max, g_eval(x));
  }

  v.exact = exact_h123(z);
  double gap = v.exact.h3 - v.exact.h1;
  v.hx_upper = gap / 2;
  v.h_y = m.e_log_Z;

  double c = 1 - beta * beta;
  auto push = [&v](std::string name, double lhs, double rhs, bool strict) {
    ChainStep s{std::move(name), lhs, rhs, strict, false};
    s.ok = strict ? lhs < rhs : lhs <= rhs + 1e-12;
    v.steps.push_back(std::move(s));
  };
  push("exact h3 within the jensen bound", v.exact.h3, h3_upper_bound(z), mixed);
  push("log-moment convexity", (1 - beta) * e_f1f2, c * std::log(c), mixed);
  push("f3 anticorrelated with 1/(Z+1)", e_f3_over, (1 - beta) * e_f3, false);
  push("g negative at every atom", g_max, 0.0, true);
  push("three-step gap below twice the flow entropy", gap, 2 * m.e_log_Z, true);

  v.ok = true;
  for (const auto& s : v.steps) v.ok = v.ok && s.ok;
  v.ok = v.ok && v.hx_upper < v.h_y;
  return v;
}

bool increments_nonincreasing(const ThreeStep& s, double tol) {
  double i1 = s.h1, i2 = s.h2 - s.h1, i3 = s.h3 - s.h2;
  return i1 >= i2 - tol && i2 >= i3 - tol;
}

OffspringLaw random_strict_law(Rng& rng, int hi) {
  if (hi < 3) throw std::invalid_argument("random_strict_law: need at least two atoms in 2..hi");
  int k = 2 + static_cast<int>(rng.below(3));
  std::vector<int> pool;
  for (int v = 2; v <= hi; ++v) pool.push_back(v);
  k = std::min<int>(k, static_cast<int>(pool.size()));
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  std::vector<int> support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  std::vector<double> probs(k);
  double tot = 0;
  for (int i = 0; i < k; ++i) {
    probs[i] = 1.0 + static_cast<double>(rng.below(20));
    tot += probs[i];
  }
  for (double& p : probs) p /= tot;
  return make_offspring_law(support, probs);
}

}  // namespace mixwalk
