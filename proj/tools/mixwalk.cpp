// command-line front end: graph generation, mixing sweeps, entropy
// estimation, the inequality chain, and the cutoff report
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixwalk/degree_model.hpp"
#include "mixwalk/entropy_bounds.hpp"
#include "mixwalk/gw_tree.hpp"
#include "mixwalk/json_io.hpp"
#include "mixwalk/mixing.hpp"
#include "mixwalk/multigraph.hpp"
#include "mixwalk/rng.hpp"
#include "mixwalk/walk.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace mixwalk;

namespace {

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  (void)threads;
}

// no partial outputs: claim every path up front, then write
struct OutputSet {
  std::vector<std::pair<fs::path, std::string>> files;
  bool force = false;

  void add(fs::path p, std::string text) { files.emplace_back(std::move(p), std::move(text)); }
  void commit() const {
    if (!force)
      for (const auto& [p, _] : files)
        if (fs::exists(p))
          throw std::runtime_error("output exists: " + p.string() + " (pass --force)");
    for (const auto& [p, text] : files) write_text_file(p.string(), text, true);
  }
};

int auto_horizon(int n) {
  return static_cast<int>(std::ceil(12.0 * std::log(static_cast<double>(std::max(n, 3))))) + 32;
}

int auto_census_radius(int n) {
  double ll = std::log(std::log(static_cast<double>(std::max(n, 3))));
  return std::max(1, static_cast<int>(std::ceil(ll)));
}

std::vector<WalkKind> walk_kinds(const std::string& w) {
  if (w == "srw") return {WalkKind::SRW};
  if (w == "nbrw") return {WalkKind::NBRW};
  return {WalkKind::SRW, WalkKind::NBRW};
}

int cmd_graph(const std::string& law_path, int n, std::uint64_t seed, int K,
              const std::string& out_dir, bool force) {
  auto dd = load_degree_law(law_path);
  Rng rng(seed);
  auto degrees = sample_degrees(dd, n, rng);
  auto g = configuration_model(degrees, rng);
  if (K <= 0) K = auto_census_radius(n);
  auto census = root_census(g, K, seed);

  fs::path edges = fs::path(out_dir) /
                   ("graph_n" + std::to_string(n) + "_s" + std::to_string(seed) + ".edges");
  fs::path cpath = fs::path(out_dir) / "census.json";
  if (!force && fs::exists(edges))
    throw std::runtime_error("output exists: " + edges.string() + " (pass --force)");

  nlohmann::json j;
  j["n"] = g.n;
  j["m"] = g.m();
  j["seed"] = seed;
  j["K"] = K;
  j["fraction_k_roots"] = census.fraction_k_roots;
  j["max_tx_5k"] = census.max_tx_5k;
  j["worst_vertices"] = census.worst_vertices;
  j["exhaustive"] = census.exhaustive;
  j["partial"] = census.partial;
  j["centers"] = census.centers;

  OutputSet out;
  out.force = force;
  out.add(cpath, j.dump(2) + "\n");
  out.commit();
  save_edges(g, edges.string(), seed, true);
  std::printf("graph: n=%d m=%d -> %s\n", g.n, g.m(), edges.string().c_str());
  std::printf("census: K=%d roots %.4f max tx(B_5K) %lld\n", K, census.fraction_k_roots,
              census.max_tx_5k);
  return 0;
}

int cmd_mix(const std::string& law_path, int n, std::uint64_t seed, int t_max,
            std::vector<double> eps, const std::string& walk, const std::string& out_dir,
            bool force) {
  auto dd = load_degree_law(law_path);
  if (eps.empty()) eps = kDefaultEpsGrid;
  auto cs = sample_connected_graph(dd, n, seed);
  int horizon = t_max > 0 ? t_max : auto_horizon(n);

  OutputSet out;
  out.force = force;
  for (WalkKind kind : walk_kinds(walk)) {
    auto prof = worst_case_profile(cs.g, StartPolicy{}, horizon, kind, eps, cs.used_seed);
    prof.law = degree_law_json(dd);
    for (std::size_t i = 0; i < eps.size(); ++i)
      if (prof.t_mix_envelope[i] < 0) {
        std::fprintf(stderr,
                     "error: %s not mixed to eps=%g within t_max=%d; envelope d_tv(%d) = %.6g\n",
                     walk_name(kind), eps[i], horizon, horizon, prof.envelope.back());
        return 1;
      }
    std::string prefix = std::string("mix_") + walk_name(kind) + "_n" + std::to_string(n) +
                         "_s" + std::to_string(seed);
    out.add(fs::path(out_dir) / (prefix + ".json"), profile_json_text(prof));
    for (std::size_t s = 0; s < prof.starts.size(); ++s)
      out.add(fs::path(out_dir) / (prefix + "_start_v" + std::to_string(prof.starts[s]) + ".csv"),
              curve_csv_text(prof.curves[s]));
    out.add(fs::path(out_dir) / (prefix + "_envelope.csv"), curve_csv_text(prof.envelope));
    int q = first_crossing(prof.envelope, 0.25);
    std::printf("%s: n=%d m=%lld starts=%zu t_mix(1/4)=%d\n", walk_name(kind), prof.n, prof.m,
                prof.starts.size(), q);
  }
  out.commit();
  return 0;
}

int cmd_entropy(const std::string& law_path, std::uint64_t seed, int t_max, int trees,
                const std::string& walk, const std::string& out_dir, bool force) {
  auto dd = load_degree_law(law_path);
  auto z = size_biased_offspring(dd);

  OutputSet out;
  out.force = force;
  for (WalkKind kind : walk_kinds(walk)) {
    std::string prefix =
        std::string("entropy_") + walk_name(kind) + "_s" + std::to_string(seed);
    if (kind == WalkKind::SRW) {
      auto series = estimate_ht(z, RootLaw::AGW, t_max, trees, seed);
      auto fit = estimate_hX(series);
      auto j = nlohmann::json::parse(ht_series_json_text(series));
      j["speed"] = {{"h_hat", fit.h_hat},
                    {"std_err", fit.std_err},
                    {"last_increment", fit.last_increment},
                    {"last_increment_se", fit.last_increment_se},
                    {"fit_slope", fit.fit_slope}};
      j["flow_entropy"] = hY(z);
      out.add(fs::path(out_dir) / (prefix + ".csv"), ht_series_csv_text(series));
      out.add(fs::path(out_dir) / (prefix + ".json"), j.dump(2) + "\n");
      std::printf("srw: method=%s h_hat=%.6f +- %.6f (flow entropy %.6f)\n",
                  series.method.c_str(), fit.h_hat, fit.std_err, hY(z));
    } else {
      auto est = estimate_lt(z, RootLaw::AGW, t_max, trees, seed);
      std::string csv = "t,h_hat,std_err,increment,increment_se\n";
      nlohmann::json j;
      j["draws"] = trees;
      j["t_max"] = t_max;
      j["flow_entropy"] = hY(z);
      j["annealed"] = nlohmann::json::array();
      j["by_t"] = nlohmann::json::array();
      for (std::size_t i = 0; i < est.size(); ++i) {
        double prev = i ? est[i - 1].h_hat : 0.0;
        double prev_se = i ? est[i - 1].std_err : 0.0;
        csv += std::to_string(est[i].t) + ',' + fmt_double(est[i].h_hat) + ',' +
               fmt_double(est[i].std_err) + ',' + fmt_double(est[i].h_hat - prev) + ',' +
               fmt_double(std::hypot(est[i].std_err, prev_se)) + '\n';
        j["annealed"].push_back(ell_t(z, est[i].t));
        nlohmann::json o;
        o["t"] = est[i].t;
        o["h_hat"] = est[i].h_hat;
        o["std_err"] = est[i].std_err;
        j["by_t"].push_back(o);
      }
      out.add(fs::path(out_dir) / (prefix + ".csv"), csv);
      out.add(fs::path(out_dir) / (prefix + ".json"), j.dump(2) + "\n");
      std::printf("nbrw: L_%d = %.6f (annealed %.6f, slope %.6f)\n", t_max,
                  est.back().h_hat, ell_t(z, t_max), hY(z));
    }
  }
  out.commit();
  return 0;
}

int cmd_verify(const std::string& law_path, const std::string& out_dir, bool force) {
  auto dd = load_degree_law(law_path);
  auto z = size_biased_offspring(dd);
  auto v = verify_entropy_gap(z);

  nlohmann::json j;
  j["h1"] = v.exact.h1;
  j["h2"] = v.exact.h2;
  j["h3"] = v.exact.h3;
  j["e_g"] = v.e_g;
  j["hx_upper"] = v.hx_upper;
  j["h_y"] = v.h_y;
  j["ok"] = v.ok;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : v.steps) {
    nlohmann::json o;
    o["name"] = s.name;
    o["lhs"] = s.lhs;
    o["rhs"] = s.rhs;
    o["strict"] = s.strict;
    o["ok"] = s.ok;
    j["steps"].push_back(o);
    std::printf("%-46s %.12f %s %.12f  %s\n", s.name.c_str(), s.lhs, s.strict ? "< " : "<=",
                s.rhs, s.ok ? "PASS" : "FAIL");
  }
  OutputSet out;
  out.force = force;
  out.add(fs::path(out_dir) / "verify_report.json", j.dump(2) + "\n");
  out.commit();
  return v.ok ? 0 : 1;
}

int cmd_cutoff(const std::string& law_path, std::vector<int> ns, std::uint64_t seed, int t_max,
               int trees, const std::string& walk, const std::string& out_dir, bool force) {
  auto dd = load_degree_law(law_path);
  auto z = size_biased_offspring(dd);
  auto series = estimate_ht(z, RootLaw::AGW, t_max, trees, seed);
  double h_hat = estimate_hX(series).h_hat;

  const std::vector<double> grid = {0.9, 0.75, 0.5, 0.25, 0.1, 0.05};
  WalkKind kind = walk_kinds(walk)[0];
  std::vector<MixingProfile> profs;
  for (int n : ns) {
    auto cs = sample_connected_graph(dd, n, seed);
    auto prof = worst_case_profile(cs.g, StartPolicy{}, auto_horizon(n), kind, grid,
                                   cs.used_seed);
    prof.law = degree_law_json(dd);
    if (prof.t_mix_envelope.back() < 0) {
      std::fprintf(stderr, "error: n=%d not mixed within t_max=%d; envelope d_tv = %.6g\n", n,
                   auto_horizon(n), prof.envelope.back());
      return 1;
    }
    std::printf("n=%d: t_mix(1/2)=%d window=%d predicted=%.1f\n", n,
                first_crossing(prof.envelope, 0.5),
                first_crossing(prof.envelope, 0.25) - first_crossing(prof.envelope, 0.75),
                std::log(static_cast<double>(n)) / h_hat);
    profs.push_back(std::move(prof));
  }
  auto rep = cutoff_report(profs, h_hat);
  OutputSet out;
  out.force = force;
  out.add(fs::path(out_dir) / "cutoff_report.json", cutoff_json_text(rep));
  out.commit();
  std::printf("speed %.6f, window slope %.3f (r2 %.3f) -> cutoff_report.json\n", h_hat,
              rep.window_slope, rep.window_r2);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixing and entropy toolkit for random walks on sparse random graphs"};
  app.require_subcommand(1);

  std::string law_path, out_dir = ".", mix_walk = "both", ent_walk = "srw", cut_walk = "srw";
  std::uint64_t seed = 0;
  int n = 0, K = 0, mix_tmax = 0, ent_tmax = 40, cut_tmax = 20, trees = 2000, threads = 0;
  std::vector<int> ns;
  std::vector<double> eps;
  bool force = false;

  auto* g = app.add_subcommand("graph", "sample a multigraph from a degree law and census it");
  g->add_option("--law", law_path, "degree law json file")->required()->check(CLI::ExistingFile);
  g->add_option("--n", n, "vertex count")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", seed, "rng seed")->required();
  g->add_option("--K", K, "census ball radius (default: ceil(log log n))");
  g->add_option("--out", out_dir, "output directory");
  g->add_option("--threads", threads, "worker thread count");
  g->add_flag("--force", force, "overwrite existing outputs");

  auto* mx = app.add_subcommand("mix", "worst-start total-variation mixing profile");
  mx->add_option("--law", law_path, "degree law json file")->required()->check(CLI::ExistingFile);
  mx->add_option("--n", n, "vertex count")->required()->check(CLI::PositiveNumber);
  mx->add_option("--seed", seed, "rng seed")->required();
  mx->add_option("--tmax", mix_tmax, "horizon (default: 12 ln n + 32)");
  mx->add_option("--eps", eps, "comma-separated eps grid")->delimiter(',');
  mx->add_option("--walk", mix_walk, "srw, nbrw or both")
      ->check(CLI::IsMember({"srw", "nbrw", "both"}));
  mx->add_option("--out", out_dir, "output directory");
  mx->add_option("--threads", threads, "worker thread count");
  mx->add_flag("--force", force, "overwrite existing outputs");

  auto* en = app.add_subcommand("entropy", "walk entropy profile on the size-biased tree");
  en->add_option("--law", law_path, "degree law json file")->required()->check(CLI::ExistingFile);
  en->add_option("--seed", seed, "rng seed")->required();
  en->add_option("--tmax", ent_tmax, "entropy horizon");
  en->add_option("--trees", trees, "Monte Carlo draws")->check(CLI::PositiveNumber);
  en->add_option("--walk", ent_walk, "srw, nbrw or both")
      ->check(CLI::IsMember({"srw", "nbrw", "both"}));
  en->add_option("--out", out_dir, "output directory");
  en->add_option("--threads", threads, "worker thread count");
  en->add_flag("--force", force, "overwrite existing outputs");

  auto* vf = app.add_subcommand("verify", "check the three-step entropy comparison chain");
  vf->add_option("--law", law_path, "degree law json file")->required()->check(CLI::ExistingFile);
  vf->add_option("--out", out_dir, "output directory");
  vf->add_flag("--force", force, "overwrite existing outputs");

  auto* co = app.add_subcommand("cutoff", "mixing location and window across sizes");
  co->add_option("--law", law_path, "degree law json file")->required()->check(CLI::ExistingFile);
  co->add_option("--ns", ns, "comma-separated vertex counts (need 3+)")
      ->required()
      ->delimiter(',');
  co->add_option("--seed", seed, "rng seed")->required();
  co->add_option("--tmax", cut_tmax, "entropy horizon for the speed estimate");
  co->add_option("--trees", trees, "Monte Carlo draws for the speed estimate")
      ->check(CLI::PositiveNumber);
  co->add_option("--walk", cut_walk, "srw or nbrw")->check(CLI::IsMember({"srw", "nbrw"}));
  co->add_option("--out", out_dir, "output directory");
  co->add_option("--threads", threads, "worker thread count");
  co->add_flag("--force", force, "overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    apply_threads(threads);
    if (app.got_subcommand(g)) return cmd_graph(law_path, n, seed, K, out_dir, force);
    if (app.got_subcommand(mx))
      return cmd_mix(law_path, n, seed, mix_tmax, eps, mix_walk, out_dir, force);
    if (app.got_subcommand(en))
      return cmd_entropy(law_path, seed, ent_tmax, trees, ent_walk, out_dir, force);
    if (app.got_subcommand(vf)) return cmd_verify(law_path, out_dir, force);
    if (app.got_subcommand(co))
      return cmd_cutoff(law_path, ns, seed, cut_tmax, trees, cut_walk, out_dir, force);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
