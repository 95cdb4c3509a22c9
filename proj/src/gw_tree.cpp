#include "mixwalk/gw_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"
#include "mixwalk/json_io.hpp"

namespace mixwalk {

long long node_budget(long long requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIXWALK_BUDGET_NODES")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 10000000;
}

static int sample_root_kids(const OffspringLaw& z, RootLaw root_law, const DegreeDistribution& dd,
                            Rng& rng) {
  switch (root_law) {
    case RootLaw::AGW:
      return z.sample(rng) + 1;
    case RootLaw::PLAIN:
      return z.sample(rng);
    default:
      return dd.sample(rng);
  }
}

double expected_nodes(const OffspringLaw& z, RootLaw root_law, int depth) {
  double mu = z.mean();
  double lvl = root_law == RootLaw::AGW    ? mu + 1.0
               : root_law == RootLaw::PLAIN ? mu
                                            : unbias(z).mean();
  double total = 1.0;
  for (int r = 1; r <= depth; ++r) {
    total += lvl;
    if (total > 1e18) return total;
    lvl *= mu;
  }
  return total;
}

TruncatedTree sample_tree(const OffspringLaw& z, RootLaw root_law, int depth, Rng& rng,
                          long long budget) {
  if (depth < 1) throw std::invalid_argument("sample_tree: depth must be >= 1");
  z.validate();
  long long cap = node_budget(budget);
  DegreeDistribution dd;
  if (root_law == RootLaw::GRAPH_LIMIT) dd = unbias(z);

  TruncatedTree t;
  t.root_law = root_law;
  t.realized_depth = depth;
  t.parent = {-1};
  t.depth = {0};
  t.kids = {0};
  t.kid0 = {-1};
  t.level_off = {0, 1};
  int begin = 0, end = 1;
  for (int r = 0; r < depth; ++r) {
    for (int v = begin; v < end; ++v) {
      int c = r == 0 ? sample_root_kids(z, root_law, dd, rng) : z.sample(rng);
      t.kids[v] = c;
      t.kid0[v] = c > 0 ? t.nodes() : -1;
      for (int j = 0; j < c; ++j) {
        t.parent.push_back(v);
        t.depth.push_back(r + 1);
        t.kids.push_back(0);
        t.kid0.push_back(-1);
      }
      if (t.nodes() > cap) throw std::runtime_error("sample_tree: node budget exceeded");
    }
    begin = end;
    end = t.nodes();
    t.level_off.push_back(end);
  }
  return t;
}

static double entropy_of(const std::vector<double>& d) {
  double H = 0.0;
  for (double p : d)
    if (p > 0.0) H -= p * std::log(p);
  return H;
}

static void tree_push(const TruncatedTree& tree, const std::vector<double>& d,
                      std::vector<double>& out) {
  int n = tree.nodes();
  out.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    double acc = 0.0;
    int p = tree.parent[v];
    if (p >= 0 && d[p] != 0.0) acc += d[p] / tree.deg(p);
    for (int j = 0; j < tree.kids[v]; ++j) {
      int c = tree.kid0[v] + j;
      if (d[c] != 0.0) acc += d[c] / tree.deg(c);
    }
    out[v] = acc;
  }
}

std::vector<double> srw_dist_on_tree(const TruncatedTree& tree, int t) {
  if (t < 0) throw std::invalid_argument("srw_dist_on_tree: negative time");
  if (t > tree.realized_depth)
    throw std::invalid_argument("srw_dist_on_tree: tree too shallow for this horizon");
  std::vector<double> d(tree.nodes(), 0.0), buf;
  d[0] = 1.0;
  for (int s = 0; s < t; ++s) {
    tree_push(tree, d, buf);
    d.swap(buf);
  }
  return d;
}

double entropy_Ht(const TruncatedTree& tree, int t) { return entropy_of(srw_dist_on_tree(tree, t)); }

// per-level NBRW log-masses; returns entropy of each level 1..t
static std::vector<double> lt_profile(const TruncatedTree& tree, int t_max) {
  if (t_max > tree.realized_depth)
    throw std::invalid_argument("nbrw entropy: tree too shallow for this horizon");
  std::vector<double> out;
  if (t_max < 1) return out;
  if (tree.kids[0] == 0) throw std::domain_error("nbrw entropy: the root has no children");
  std::vector<double> lp(tree.kids[0], -std::log(static_cast<double>(tree.kids[0]))), nxt;
  double H = 0.0;
  for (double l : lp) H += std::exp(l) * -l;
  out.push_back(H);
  for (int r = 1; r < t_max; ++r) {
    nxt.clear();
    nxt.reserve(tree.level_size(r + 1));
    for (int v = tree.level_off[r]; v < tree.level_off[r + 1]; ++v) {
      if (tree.kids[v] == 0)
        throw std::domain_error("nbrw entropy: offspring 0 above the horizon");
      double l = lp[v - tree.level_off[r]] - std::log(static_cast<double>(tree.kids[v]));
      for (int j = 0; j < tree.kids[v]; ++j) nxt.push_back(l);
    }
    lp.swap(nxt);
    H = 0.0;
    for (double l : lp) H += std::exp(l) * -l;
    out.push_back(H);
  }
  return out;
}

double nbrw_entropy_Lt(const TruncatedTree& tree, int t) {
  if (t == 0) return 0.0;
  if (t < 0) throw std::invalid_argument("nbrw_entropy_Lt: negative time");
  return lt_profile(tree, t).back();
}

double ell_t(const OffspringLaw& z, int t) {
  if (t < 1) throw std::invalid_argument("ell_t: t must be >= 1");
  auto m = moments(z);
  return m.e_log_Zp1 + (t - 1) * m.e_log_Z;
}

double hY(const OffspringLaw& z) { return moments(z).e_log_Z; }

// ---- h_t estimation ----------------------------------------------------

static HtSeries exact_constant_ht(const OffspringLaw& z, RootLaw root_law, int t_max, int M) {
  int c = z.support[0];
  int k0 = root_law == RootLaw::PLAIN ? c : c + 1;
  if (k0 == 0) throw std::domain_error("estimate_ht: the root has no children");
  HtSeries out;
  out.t_max = t_max;
  out.draws = M;
  out.method = "exact";
  std::vector<double> logn(t_max + 1, 0.0);
  for (int r = 1; r <= t_max; ++r)
    logn[r] = std::log(static_cast<double>(k0)) + (r - 1) * std::log(static_cast<double>(c));
  std::vector<double> q(t_max + 2, 0.0), nq(t_max + 2);
  q[0] = 1.0;
  double up = 1.0 / (c + 1), down = static_cast<double>(c) / (c + 1);
  double prev = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    std::fill(nq.begin(), nq.end(), 0.0);
    for (int r = 0; r <= t_max; ++r) {
      if (q[r] == 0.0) continue;
      if (r == 0) {
        nq[1] += q[0];
      } else {
        nq[r - 1] += q[r] * up;
        nq[r + 1] += q[r] * down;
      }
    }
    q.swap(nq);
    double H = 0.0;
    for (int r = 0; r <= t_max; ++r)
      if (q[r] > 0.0) H += q[r] * (logn[r] - std::log(q[r]));
    out.by_t.push_back({t, H, 0.0, M});
    out.inc.push_back(H - prev);
    out.inc_se.push_back(0.0);
    prev = H;
  }
  return out;
}

static std::vector<double> ht_profile(const TruncatedTree& tree, int t_max) {
  std::vector<double> d(tree.nodes(), 0.0), buf, out;
  d[0] = 1.0;
  out.reserve(t_max);
  for (int s = 0; s < t_max; ++s) {
    tree_push(tree, d, buf);
    d.swap(buf);
    out.push_back(entropy_of(d));
  }
  return out;
}

// Lazily revealed tree for the endpoint estimator. Every created node has its
// offspring count sampled immediately (degrees are always true); child node
// objects appear only on materialization.
namespace {
struct LazyTree {
  std::vector<int> parent, depth, kids, kid0;
  const OffspringLaw* z = nullptr;
  const DegreeDistribution* dd = nullptr;
  RootLaw root_law = RootLaw::AGW;
  Rng* rng = nullptr;

  int create(int par) {
    int id = static_cast<int>(parent.size());
    parent.push_back(par);
    depth.push_back(par < 0 ? 0 : depth[par] + 1);
    kids.push_back(id == 0 ? sample_root_kids(*z, root_law, *dd, *rng) : z->sample(*rng));
    kid0.push_back(-1);
    return id;
  }
  void materialize(int v) {
    if (kid0[v] >= 0 || kids[v] == 0) return;
    kid0[v] = static_cast<int>(parent.size());
    for (int j = 0; j < kids[v]; ++j) create(v);
  }
  int deg(int v) const { return kids[v] + (v != 0); }
  int nodes() const { return static_cast<int>(parent.size()); }
};
}  // namespace

static std::vector<double> endpoint_draw(const OffspringLaw& z, RootLaw root_law,
                                         const DegreeDistribution& dd, int t_max, Rng& rng,
                                         long long cap, bool& over_budget) {
  LazyTree T;
  T.z = &z;
  T.dd = &dd;
  T.root_law = root_law;
  T.rng = &rng;
  T.create(-1);
  if (T.kids[0] == 0) throw std::domain_error("estimate_ht: the root has no children");

  // the walk itself
  std::vector<int> X = {0};
  for (int t = 1; t <= t_max; ++t) {
    int v = X.back();
    T.materialize(v);
    int pick = static_cast<int>(rng.below(T.deg(v)));
    X.push_back(v != 0 ? (pick == 0 ? T.parent[v] : T.kid0[v] + pick - 1) : T.kid0[0] + pick);
  }

  // sideways reach needed at each ancestor of each endpoint: a length-t
  // root-to-X_t path can stray (t - depth(X_t))/2 levels off the ancestor line
  std::vector<int> rmark(T.nodes(), -1);
  for (int t = 0; t <= t_max; ++t) {
    int rad = (t - T.depth[X[t]]) / 2;
    for (int a = X[t]; a >= 0; a = T.parent[a])
      if (rmark[a] < rad) rmark[a] = rad;
  }

  // reveal every node those paths can touch
  std::vector<std::pair<int, int>> queue = {{0, T.depth[0] + rmark[0]}};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [v, allow] = queue[qi];
    if (T.depth[v] < allow) T.materialize(v);
    if (T.nodes() > cap) {
      over_budget = true;
      return {};
    }
    if (T.kid0[v] < 0) continue;
    for (int j = 0; j < T.kids[v]; ++j) {
      int c = T.kid0[v] + j;
      int al = allow;
      if (c < static_cast<int>(rmark.size()) && rmark[c] >= 0)
        al = std::max(al, T.depth[c] + rmark[c]);
      if (T.depth[c] < al || T.kid0[c] >= 0) queue.push_back({c, al});
    }
  }

  // pushes over the revealed nodes; unrevealed children absorb silently,
  // which cannot touch P_t(X_t)
  int n = T.nodes();
  std::vector<double> d(n, 0.0), nd(n);
  d[0] = 1.0;
  std::vector<double> vals(t_max);
  for (int t = 1; t <= t_max; ++t) {
    std::fill(nd.begin(), nd.end(), 0.0);
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      int p = T.parent[v];
      if (p >= 0 && d[p] != 0.0) acc += d[p] / T.deg(p);
      if (T.kid0[v] >= 0)
        for (int j = 0; j < T.kids[v]; ++j) {
          int c = T.kid0[v] + j;
          if (d[c] != 0.0) acc += d[c] / T.deg(c);
        }
      nd[v] = acc;
    }
    d.swap(nd);
    vals[t - 1] = -std::log(d[X[t]]);
  }
  return vals;
}

static void finish_sampled(HtSeries& out, int t_max, int M) {
  for (int ti = 0; ti < t_max; ++ti) {
    double mean = 0.0;
    for (int i = 0; i < M; ++i) mean += out.samples[i][ti];
    mean /= M;
    double var = 0.0;
    for (int i = 0; i < M; ++i) {
      double e = out.samples[i][ti] - mean;
      var += e * e;
    }
    var /= (M - 1);
    out.by_t.push_back({ti + 1, mean, std::sqrt(var / M), M});
  }
  for (int ti = 0; ti < t_max; ++ti) {
    double mean = 0.0, var = 0.0;
    for (int i = 0; i < M; ++i) {
      double v = out.samples[i][ti] - (ti ? out.samples[i][ti - 1] : 0.0);
      mean += v;
    }
    mean /= M;
    for (int i = 0; i < M; ++i) {
      double v = out.samples[i][ti] - (ti ? out.samples[i][ti - 1] : 0.0);
      var += (v - mean) * (v - mean);
    }
    var /= (M - 1);
    out.inc.push_back(mean);
    out.inc_se.push_back(std::sqrt(var / M));
  }
}

HtSeries estimate_ht(const OffspringLaw& z, RootLaw root_law, int t_max, int M,
                     std::uint64_t seed, long long budget, HtMethod method) {
  if (t_max < 1) throw std::invalid_argument("estimate_ht: t_max must be >= 1");
  if (M < 2) throw std::invalid_argument("estimate_ht: M must be >= 2");
  z.validate();
  long long cap = node_budget(budget);

  HtMethod m = method;
  if (m == HtMethod::AUTO) {
    if (z.constant())
      m = HtMethod::EXACT;
    else
      m = expected_nodes(z, root_law, t_max) <= static_cast<double>(cap) ? HtMethod::EXPLICIT
                                                                         : HtMethod::ENDPOINT;
  }
  if (m == HtMethod::EXACT) {
    if (!z.constant())
      throw std::invalid_argument("estimate_ht: exact recursion needs a constant law");
    return exact_constant_ht(z, root_law, t_max, M);
  }

  HtSeries out;
  out.t_max = t_max;
  out.draws = M;
  out.samples.assign(M, {});
  DegreeDistribution dd;
  if (root_law == RootLaw::GRAPH_LIMIT) dd = unbias(z);

  bool failed = false;
  if (m == HtMethod::EXPLICIT) {
    out.method = "explicit";
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < M; ++i) {
      if (failed) continue;
      try {
        Rng rng = Rng::stream(seed, i);
        auto tree = sample_tree(z, root_law, t_max, rng, cap);
        out.samples[i] = ht_profile(tree, t_max);
      } catch (...) {
        failed = true;
      }
    }
    if (failed) throw std::runtime_error("estimate_ht: node budget exceeded (lower t_max, "
                                         "raise MIXWALK_BUDGET_NODES, or rely on the endpoint "
                                         "estimator)");
  } else {
    out.method = "endpoint";
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < M; ++i) {
      if (failed) continue;
      bool over = false;
      Rng rng = Rng::stream(seed, i);
      out.samples[i] = endpoint_draw(z, root_law, dd, t_max, rng, cap, over);
      if (over) failed = true;
    }
    if (failed) throw std::runtime_error("estimate_ht: node budget exceeded in a walk draw");
  }
  finish_sampled(out, t_max, M);
  return out;
}

std::vector<EntropyEstimate> estimate_lt(const OffspringLaw& z, RootLaw root_law, int t_max,
                                         int M, std::uint64_t seed, long long budget) {
  if (t_max < 1) throw std::invalid_argument("estimate_lt: t_max must be >= 1");
  if (M < 2) throw std::invalid_argument("estimate_lt: M must be >= 2");
  z.validate();
  long long cap = node_budget(budget);
  if (expected_nodes(z, root_law, t_max) > static_cast<double>(cap))
    throw std::runtime_error("estimate_lt: expected tree size over the node budget");

  std::vector<std::vector<double>> samples(M);
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < M; ++i) {
    if (failed) continue;
    try {
      Rng rng = Rng::stream(seed, i);
      auto tree = sample_tree(z, root_law, t_max, rng, cap);
      samples[i] = lt_profile(tree, t_max);
    } catch (...) {
      failed = true;
    }
  }
  if (failed) throw std::runtime_error("estimate_lt: node budget exceeded while sampling trees");

  std::vector<EntropyEstimate> out;
  for (int ti = 0; ti < t_max; ++ti) {
    double mean = 0.0;
    for (int i = 0; i < M; ++i) mean += samples[i][ti];
    mean /= M;
    double var = 0.0;
    for (int i = 0; i < M; ++i) var += (samples[i][ti] - mean) * (samples[i][ti] - mean);
    var /= (M - 1);
    out.push_back({ti + 1, mean, std::sqrt(var / M), M});
  }
  return out;
}

HXEstimate estimate_hX(const HtSeries& s) {
  if (s.t_max < 5) throw std::invalid_argument("estimate_hX: need t_max >= 5");
  HXEstimate e;
  e.method = s.method;
  e.increments = s.inc;
  e.increment_ses = s.inc_se;
  e.last_increment = s.inc.back();
  e.last_increment_se = s.inc_se.back();
  for (int t = 1; t <= s.t_max; ++t) e.ht_over_t.push_back(s.by_t[t - 1].h_hat / t);

  int t_lo = std::max(2, (s.t_max + 1) / 2);
  int n = s.t_max - t_lo + 1;
  double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (int t = t_lo; t <= s.t_max; ++t) {
    double x = 1.0 / t, y = s.inc[t - 1];
    sx += x, sxx += x * x, sy += y, sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  e.h_hat = (sxx * sy - sx * sxy) / den;
  e.fit_slope = (n * sxy - sx * sy) / den;

  if (!s.samples.empty()) {
    // the intercept is a fixed linear functional of the paired increments
    std::vector<double> w(s.t_max + 1, 0.0);
    for (int t = t_lo; t <= s.t_max; ++t) w[t] = (sxx - sx / t) / den;
    int M = s.draws;
    std::vector<double> v(M, 0.0);
    for (int i = 0; i < M; ++i) {
      double acc = 0.0;
      for (int t = t_lo; t <= s.t_max; ++t)
        acc += w[t] * (s.samples[i][t - 1] - s.samples[i][t - 2]);
      v[i] = acc;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= M;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (M - 1);
    e.std_err = std::sqrt(var / M);
  }
  return e;
}

std::string ht_series_json_text(const HtSeries& s) {
  nlohmann::json j;
  j["draws"] = s.draws;
  j["method"] = s.method;
  j["t_max"] = s.t_max;
  j["increments"] = s.inc;
  j["increment_ses"] = s.inc_se;
  j["by_t"] = nlohmann::json::array();
  for (const auto& e : s.by_t) {
    nlohmann::json o;
    o["t"] = e.t;
    o["h_hat"] = e.h_hat;
    o["std_err"] = e.std_err;
    j["by_t"].push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string ht_series_csv_text(const HtSeries& s) {
  std::string out = "t,h_hat,std_err,increment,increment_se\n";
  for (std::size_t i = 0; i < s.by_t.size(); ++i) {
    out += std::to_string(s.by_t[i].t);
    out += ',';
    out += fmt_double(s.by_t[i].h_hat);
    out += ',';
    out += fmt_double(s.by_t[i].std_err);
    out += ',';
    out += fmt_double(s.inc[i]);
    out += ',';
    out += fmt_double(s.inc_se[i]);
    out += '\n';
  }
  return out;
}

}  // namespace mixwalk
