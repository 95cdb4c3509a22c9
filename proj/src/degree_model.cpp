#include "mixwalk/degree_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mixwalk {

namespace {

void check_law(const std::vector<int>& support, const std::vector<double>& probs,
               int min_value, bool strict, int strict_min, const char* what) {
  if (support.empty()) throw std::invalid_argument(std::string(what) + ": empty support");
  if (support.size() != probs.size())
    throw std::invalid_argument(std::string(what) + ": support/probs length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < min_value)
      throw std::invalid_argument(std::string(what) + ": support value below " +
                                  std::to_string(min_value));
    if (i > 0 && support[i] <= support[i - 1])
      throw std::invalid_argument(std::string(what) + ": support not strictly increasing");
    if (probs[i] < 0.0) throw std::invalid_argument(std::string(what) + ": negative probability");
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                std::to_string(sum));
  if (strict && support.front() < strict_min)
    throw std::invalid_argument(std::string(what) + ": strict mode requires min support >= " +
                                std::to_string(strict_min));
}

int sample_cdf(const std::vector<int>& support, const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return support[i];
  }
  return support.back();
}

}  // namespace

void DegreeDistribution::validate() const {
  check_law(support, probs, 1, strict, 3, "DegreeDistribution");
}

double DegreeDistribution::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) s += support[i] * probs[i];
  return s;
}

double DegreeDistribution::second_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    s += static_cast<double>(support[i]) * support[i] * probs[i];
  return s;
}

int DegreeDistribution::sample(Rng& rng) const { return sample_cdf(support, probs, rng); }

void OffspringLaw::validate() const { check_law(support, probs, 0, strict, 2, "OffspringLaw"); }

double OffspringLaw::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) s += support[i] * probs[i];
  return s;
}

int OffspringLaw::sample(Rng& rng) const { return sample_cdf(support, probs, rng); }

DegreeDistribution make_degree_law(std::vector<int> support, std::vector<double> probs) {
  DegreeDistribution dd{std::move(support), std::move(probs), false};
  dd.strict = !dd.support.empty() && dd.support.front() >= 3;
  dd.validate();
  return dd;
}

OffspringLaw make_offspring_law(std::vector<int> support, std::vector<double> probs) {
  OffspringLaw z{std::move(support), std::move(probs), false};
  z.strict = !z.support.empty() && z.support.front() >= 2;
  z.validate();
  return z;
}

DegreeDistribution truncated_geometric(double q, int k_min, int k_max) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("truncated_geometric: q outside (0,1)");
  if (k_min < 1 || k_max < k_min) throw std::invalid_argument("truncated_geometric: bad range");
  std::vector<int> support;
  std::vector<double> probs;
  double norm = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    support.push_back(k);
    double w = std::pow(q, k);
    probs.push_back(w);
    norm += w;
  }
  for (double& p : probs) p /= norm;
  // renormalized weights can miss 1 by a few ulp; absorb into the largest atom
  double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  probs.front() += 1.0 - sum;
  return make_degree_law(std::move(support), std::move(probs));
}

OffspringLaw size_biased_offspring(const DegreeDistribution& dd) {
  dd.validate();
  std::vector<int> support(dd.support.size());
  std::vector<double> probs(dd.probs.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < dd.support.size(); ++i) norm += dd.support[i] * dd.probs[i];
  for (std::size_t i = 0; i < dd.support.size(); ++i) {
    support[i] = dd.support[i] - 1;
    probs[i] = dd.support[i] * dd.probs[i] / norm;
  }
  double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  probs.front() += 1.0 - sum;
  OffspringLaw z{std::move(support), std::move(probs), dd.strict};
  z.validate();
  return z;
}

DegreeDistribution unbias(const OffspringLaw& z) {
  z.validate();
  std::vector<int> support(z.support.size());
  std::vector<double> probs(z.probs.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < z.support.size(); ++i) norm += z.probs[i] / (z.support[i] + 1);
  for (std::size_t i = 0; i < z.support.size(); ++i) {
    support[i] = z.support[i] + 1;
    probs[i] = z.probs[i] / (z.support[i] + 1) / norm;
  }
  double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  probs.front() += 1.0 - sum;
  DegreeDistribution dd{std::move(support), std::move(probs), z.strict};
  dd.validate();
  return dd;
}

MomentSet moments(const OffspringLaw& z) {
  z.validate();
  MomentSet m{0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < z.support.size(); ++i) {
    double zi = z.support[i];
    double p = z.probs[i];
    m.mean_Z += zi * p;
    m.e_log_Z += std::log(zi) * p;  // strict mode keeps z >= 2
    m.e_log_Zp1 += std::log(zi + 1.0) * p;
    m.beta += zi / (zi + 1.0) * p;
    m.e_Zlog_over += zi * std::log(zi + 1.0) / (zi + 1.0) * p;
  }
  return m;
}

std::vector<int> sample_degrees(const DegreeDistribution& dd, int n, Rng& rng) {
  dd.validate();
  if (n < 2) throw std::invalid_argument("sample_degrees: n < 2");
  bool any_even = false, any_odd = false;
  for (int k : dd.support) ((k % 2 == 0) ? any_even : any_odd) = true;
  if (!any_even && (n % 2 != 0))
    throw std::invalid_argument(
        "sample_degrees: all support degrees are odd and n is odd, so the total degree is "
        "always odd; even-sum conditioning is impossible");
  std::vector<int> deg(n);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    long long sum = 0;
    for (int i = 0; i < n; ++i) {
      deg[i] = dd.sample(rng);
      sum += deg[i];
    }
    if (sum % 2 == 0) return deg;
  }
  throw std::runtime_error("sample_degrees: even-sum rejection did not terminate");
}

TailCheck check_tail(const OffspringLaw& z, double n, double delta) {
  z.validate();
  if (!(n >= 3.0)) throw std::invalid_argument("check_tail: n < 3");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("check_tail: delta outside (0, 1/2)");
  TailCheck tc;
  tc.delta_n = std::exp(std::pow(std::log(n), 0.5 - delta));
  tc.tail_prob = 0.0;
  for (std::size_t i = 0; i < z.support.size(); ++i)
    if (z.support[i] > tc.delta_n) tc.tail_prob += z.probs[i];
  tc.ok = tc.tail_prob < 1.0 / n;
  return tc;
}

}  // namespace mixwalk
