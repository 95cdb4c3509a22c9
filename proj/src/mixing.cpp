#include "mixwalk/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "mixwalk/json_io.hpp"

namespace mixwalk {

const std::vector<double> kDefaultEpsGrid = {0.75, 0.5, 0.25, 0.1, 0.05};

bool is_connected(const Multigraph& g) {
  if (g.n <= 1) return true;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, s] : g.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == g.n;
}

VertexDist stationary(const Multigraph& g, WalkKind) {
  if (!is_connected(g)) throw std::invalid_argument("stationary: graph is not connected");
  if (g.m() == 0) throw std::invalid_argument("stationary: graph has no edges");
  VertexDist pi(g.n);
  double inv = 1.0 / (2.0 * g.m());
  for (int v = 0; v < g.n; ++v) pi[v] = g.deg[v] * inv;
  return pi;
}

double tv(const VertexDist& mu, const VertexDist& nu) {
  if (mu.size() != nu.size()) throw std::invalid_argument("tv: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += std::abs(mu[i] - nu[i]);
  return 0.5 * s;
}

// dense-vector cap: one propagated state per walk
static constexpr long long kDenseCap = 50000000;

Curve dtv_curve(const Multigraph& g, int x0, int t_max, WalkKind kind) {
  if (t_max < 1) throw std::invalid_argument("dtv_curve: t_max must be >= 1");
  long long state = kind == WalkKind::SRW ? g.n : 2LL * g.m();
  if (state > kDenseCap) throw std::runtime_error("dtv_curve: graph over the dense-vector cap");
  auto pi = stationary(g, kind);
  Curve curve(t_max + 1);
  curve[0] = tv(delta_dist(g.n, x0), pi);
  if (kind == WalkKind::SRW) {
    auto d = delta_dist(g.n, x0);
    for (int t = 1; t <= t_max; ++t) {
      d = srw_push(g, d);
      curve[t] = tv(d, pi);
    }
  } else {
    auto e = nbrw_start(g, x0);
    curve[1] = tv(vertex_marginal(g, e), pi);
    for (int t = 2; t <= t_max; ++t) {
      e = nbrw_push(g, e);
      curve[t] = tv(vertex_marginal(g, e), pi);
    }
  }
  return curve;
}

int first_crossing(const Curve& curve, double eps) {
  for (std::size_t t = 0; t < curve.size(); ++t)
    if (curve[t] <= eps) return static_cast<int>(t);
  return -1;
}

int t_mix(const Curve& curve, double eps) {
  int t = first_crossing(curve, eps);
  if (t < 0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "not mixed within horizon: d_tv(t_max) = %.6g",
                  curve.empty() ? 1.0 : curve.back());
    throw std::runtime_error(buf);
  }
  return t;
}

std::vector<int> pick_starts(const Multigraph& g, const StartPolicy& policy, std::uint64_t seed) {
  if (g.n <= policy.all_cap) {
    std::vector<int> all(g.n);
    for (int v = 0; v < g.n; ++v) all[v] = v;
    return all;
  }
  std::set<int> picked;
  int vmax = 0, vmin = 0;
  for (int v = 1; v < g.n; ++v) {
    if (g.deg[v] > g.deg[vmax]) vmax = v;
    if (g.deg[v] < g.deg[vmin]) vmin = v;
  }
  picked.insert(vmax);
  picked.insert(vmin);
  for (int v = 0; v < g.n; ++v)
    if (!is_k_root(g, v, 2)) {
      picked.insert(v);
      break;
    }
  Rng rng = Rng::stream(seed, 0x5747);
  int guard = 0;
  while (static_cast<int>(picked.size()) < policy.samples && guard++ < 100 * policy.samples)
    picked.insert(static_cast<int>(rng.below(g.n)));
  return {picked.begin(), picked.end()};
}

MixingProfile worst_case_profile(const Multigraph& g, const StartPolicy& policy, int t_max,
                                 WalkKind kind, const std::vector<double>& eps_grid,
                                 std::uint64_t seed) {
  MixingProfile p;
  p.n = g.n;
  p.m = g.m();
  p.graph_seed = seed;
  p.kind = kind;
  p.t_max = t_max;
  p.eps_grid = eps_grid;
  p.starts = pick_starts(g, policy, seed);
  p.curves.resize(p.starts.size());
  (void)stationary(g, kind);  // fail on disconnected input before the parallel sweep
  if ((kind == WalkKind::SRW ? g.n : 2LL * g.m()) > kDenseCap)
    throw std::runtime_error("worst_case_profile: graph over the dense-vector cap");

  double t0 = 0.0;
#ifdef _OPENMP
  t0 = omp_get_wtime();
#endif
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(p.starts.size()); ++i)
    p.curves[i] = dtv_curve(g, p.starts[i], t_max, kind);
#ifdef _OPENMP
  p.wall_seconds = omp_get_wtime() - t0;
#else
  (void)t0;
#endif

  p.envelope.assign(t_max + 1, 0.0);
  for (const auto& c : p.curves)
    for (int t = 0; t <= t_max; ++t) p.envelope[t] = std::max(p.envelope[t], c[t]);

  p.t_mix_starts.resize(p.curves.size());
  for (std::size_t i = 0; i < p.curves.size(); ++i)
    for (double eps : eps_grid) p.t_mix_starts[i].push_back(first_crossing(p.curves[i], eps));
  for (double eps : eps_grid) p.t_mix_envelope.push_back(first_crossing(p.envelope, eps));

  int guard_t = static_cast<int>(std::ceil(50.0 * std::log(std::max(2, g.n))));
  if (kind == WalkKind::SRW && guard_t <= t_max) {
    p.expander_guard = p.envelope[guard_t] < 0.01 ? 1 : 0;
    if (!p.expander_guard)
      std::fprintf(stderr, "mixing: slow-envelope flag, d_tv(%d) = %.4g on n=%d\n", guard_t,
                   p.envelope[guard_t], g.n);
  }
  return p;
}

std::string profile_json_text(const MixingProfile& p) {
  nlohmann::json j;
  j["n"] = p.n;
  j["m"] = p.m;
  j["seed"] = p.graph_seed;
  j["law"] = p.law;
  j["walk"] = walk_name(p.kind);
  j["t_max"] = p.t_max;
  j["eps_grid"] = p.eps_grid;
  j["starts"] = p.starts;
  j["curves"] = p.curves;
  j["envelope"] = p.envelope;
  j["t_mix_starts"] = p.t_mix_starts;
  j["t_mix_envelope"] = p.t_mix_envelope;
  j["expander_guard"] = p.expander_guard;
  return j.dump(2) + "\n";
}

std::string curve_csv_text(const Curve& c) {
  std::string out = "t,dtv\n";
  for (std::size_t t = 0; t < c.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += fmt_double(c[t]);
    out += '\n';
  }
  return out;
}

LambdaSet lambda_set(const Multigraph& g, int x0, int K, int t, double eps) {
  auto b = ball(g, x0, K);
  LambdaSet out;
  out.boundary_size = static_cast<int>(b.boundary.size());
  if (b.boundary.empty()) throw std::invalid_argument("lambda_set: empty sphere");
  if (static_cast<long long>(b.boundary.size()) * g.n > kDenseCap)
    throw std::runtime_error("lambda_set: boundary sweep over budget");

  auto pi = stationary(g, WalkKind::SRW);
  std::vector<char> far(b.boundary.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(b.boundary.size()); ++i) {
    auto d = delta_dist(g.n, b.boundary[i]);
    for (int s = 0; s < t; ++s) d = srw_push(g, d);
    far[i] = tv(d, pi) > eps;
  }

  auto hm = hitting_measure(g, x0, K);
  std::unordered_map<int, double> mass_of;
  for (std::size_t i = 0; i < hm.boundary.size(); ++i) mass_of[hm.boundary[i]] = hm.mu[i];
  for (std::size_t i = 0; i < b.boundary.size(); ++i)
    if (far[i]) {
      out.lambda.push_back(b.boundary[i]);
      out.mu_mass += mass_of[b.boundary[i]];
    }
  return out;
}

ReachRootResult reach_root_experiment(const Multigraph& g, int K, int trials, Rng& rng) {
  if (K < 1) throw std::invalid_argument("reach_root_experiment: K must be >= 1");
  ReachRootResult r;
  r.bound = 1.0 - std::exp(-K / 128.0);
  int success = 0, done = 0;
  long long attempts = 0, attempt_cap = 50LL * trials + 200;
  while (done < trials && attempts++ < attempt_cap) {
    // give up early when a 200-sample census finds no qualifying start at all
    if (attempts > 200 && done == 0) break;
    int x = static_cast<int>(rng.below(g.n));
    if (tree_excess(g, x, 5 * K) > 1) continue;
    auto traj = sample_walk(g, x, 4 * K, WalkKind::SRW, rng.next());
    success += is_k_root(g, traj.verts.back(), K);
    ++done;
  }
  if (done == 0)
    throw std::runtime_error("reach_root_experiment: no qualifying starts (every sampled "
                             "5K-ball has excess > 1)");
  r.trials = done;
  r.empirical_success = static_cast<double>(success) / done;
  r.std_err = std::sqrt(std::max(r.empirical_success * (1 - r.empirical_success), 1e-12) / done);
  r.ok = r.empirical_success >= r.bound - 3 * r.std_err - 1e-12;
  return r;
}

ReachRootResult reach_root_unicyclic(int K, int trials, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("reach_root_unicyclic: K must be >= 1");
  ReachRootResult r;
  r.bound = 1.0 - std::exp(-K / 128.0);
  int success = 0;
  // distance from the cycle: a cycle vertex keeps r=0 with prob 2/3, interior
  // tree vertices step down with prob 1/3 and up with prob 2/3. The endpoint
  // has a tree K-ball exactly when its distance is >= K.
#pragma omp parallel for reduction(+ : success) schedule(static)
  for (int i = 0; i < trials; ++i) {
    Rng rng = Rng::stream(seed, i);
    int pos = 0;
    for (int s = 0; s < 4 * K; ++s) {
      if (pos == 0)
        pos += rng.below(3) == 0;
      else
        pos += rng.below(3) == 0 ? -1 : 1;
    }
    success += pos >= K;
  }
  r.trials = trials;
  r.empirical_success = static_cast<double>(success) / trials;
  r.std_err = std::sqrt(std::max(r.empirical_success * (1 - r.empirical_success), 1e-12) / trials);
  r.ok = r.empirical_success >= r.bound - 3 * r.std_err - 1e-12;
  return r;
}

static int grid_index(const std::vector<double>& grid, double eps) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - eps) < 1e-12) return static_cast<int>(i);
  return -1;
}

CutoffReport cutoff_report(const std::vector<MixingProfile>& profiles, double h_hat,
                           double eps_lo, double eps_hi) {
  std::set<int> ns;
  for (const auto& p : profiles) ns.insert(p.n);
  if (ns.size() < 3) throw std::invalid_argument("cutoff_report: need at least 3 values of n");
  if (!(h_hat > 0)) throw std::invalid_argument("cutoff_report: h_hat must be positive");
  for (const auto& p : profiles)
    if (p.kind != profiles.front().kind)
      throw std::invalid_argument("cutoff_report: mixed walk kinds");

  CutoffReport rep;
  rep.kind = profiles.front().kind;
  rep.h_hat = h_hat;
  rep.eps_lo = eps_lo;
  rep.eps_hi = eps_hi;
  for (const auto& p : profiles) {
    int ih = grid_index(p.eps_grid, 0.5);
    int iq = grid_index(p.eps_grid, 0.25);
    int iq3 = grid_index(p.eps_grid, 0.75);
    int ilo = grid_index(p.eps_grid, eps_lo);
    int ihi = grid_index(p.eps_grid, eps_hi);
    if (ih < 0 || iq < 0 || iq3 < 0 || ilo < 0 || ihi < 0)
      throw std::invalid_argument("cutoff_report: required eps missing from the profile grid");
    CutoffRow row;
    row.n = p.n;
    row.loc_half = p.t_mix_envelope[ih];
    int tlo = p.t_mix_envelope[ilo], thi = p.t_mix_envelope[ihi];
    row.window = (tlo >= 0 && thi >= 0) ? tlo - thi : -1;
    row.predicted = std::log(static_cast<double>(p.n)) / h_hat;
    row.ratio = row.loc_half >= 0 ? row.loc_half / row.predicted : -1.0;
    int tq = p.t_mix_envelope[iq], tq3 = p.t_mix_envelope[iq3];
    row.ratio_q = (tq >= 0 && tq3 > 0) ? static_cast<double>(tq) / tq3 : -1.0;
    rep.rows.push_back(row);
  }

  // window against sqrt(log n)
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int k = 0;
  for (const auto& row : rep.rows) {
    if (row.window < 0) continue;
    double x = std::sqrt(std::log(static_cast<double>(row.n))), y = row.window;
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
    ++k;
  }
  if (k >= 2) {
    double den = k * sxx - sx * sx;
    rep.window_slope = den != 0 ? (k * sxy - sx * sy) / den : 0.0;
    double b = (sy - rep.window_slope * sx) / k;
    double ss_res = 0, ss_tot = 0, ybar = sy / k;
    for (const auto& row : rep.rows) {
      if (row.window < 0) continue;
      double x = std::sqrt(std::log(static_cast<double>(row.n)));
      double e = row.window - (rep.window_slope * x + b);
      ss_res += e * e;
      ss_tot += (row.window - ybar) * (row.window - ybar);
    }
    rep.window_r2 = ss_tot > 1e-15 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-15 ? 1.0 : 0.0);
  }
  return rep;
}

std::string cutoff_json_text(const CutoffReport& r) {
  nlohmann::json j;
  j["walk"] = walk_name(r.kind);
  j["h_hat"] = r.h_hat;
  j["eps_lo"] = r.eps_lo;
  j["eps_hi"] = r.eps_hi;
  j["window_slope"] = r.window_slope;
  j["window_r2"] = r.window_r2;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o;
    o["n"] = row.n;
    o["t_mix_half"] = row.loc_half;
    o["window"] = row.window;
    o["predicted"] = row.predicted;
    o["ratio"] = row.ratio;
    o["ratio_quarters"] = row.ratio_q;
    j["rows"].push_back(o);
  }
  return j.dump(2) + "\n";
}

ConnectedSample sample_connected_graph(const DegreeDistribution& law, int n, std::uint64_t seed) {
  for (int a = 0; a < 64; ++a) {
    Rng rng(seed + a);
    auto degrees = sample_degrees(law, n, rng);
    auto g = configuration_model(degrees, rng);
    if (is_connected(g)) return {std::move(g), seed + a, a};
  }
  throw std::runtime_error("sample_connected_graph: 64 consecutive draws were disconnected");
}

}  // namespace mixwalk
