// kernel benchmark: parallel gather pushes vs the serial scatter references
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "mixwalk/degree_model.hpp"
#include "mixwalk/mixing.hpp"
#include "mixwalk/multigraph.hpp"
#include "mixwalk/rng.hpp"
#include "mixwalk/walk.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mixwalk;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

template <class Push, class Dist>
double bench(Push push, const Multigraph& g, Dist d, int steps, double* checksum) {
  auto t0 = clk::now();
  for (int s = 0; s < steps; ++s) d = push(g, d);
  double elapsed = seconds_since(t0);
  *checksum = 0;
  for (double v : d) *checksum += v * v;
  return elapsed;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 200000;
  int steps = argc > 2 ? std::atoi(argv[2]) : 40;
  std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  auto dd = make_degree_law({3, 4}, {0.5, 0.5});
  Rng rng(seed);
  auto degrees = sample_degrees(dd, n, rng);
  auto g = configuration_model(degrees, rng);
  std::printf("graph: n=%d m=%d states=%d steps=%d\n", g.n, g.m(), 2 * g.m(), steps);
#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: off\n");
#endif

  double c_par = 0, c_ser = 0;

  VertexDist v0 = delta_dist(g.n, 0);
  double srw_par = bench(srw_push, g, v0, steps, &c_par);
  double srw_ser = bench(srw_push_serial, g, v0, steps, &c_ser);
  std::printf("srw : parallel %8.1f Msteps-edges/s (%6.3fs)  serial %8.1f (%6.3fs)  x%.2f  |checksum gap| %.3g\n",
              2e-6 * g.m() * steps / srw_par, srw_par, 2e-6 * g.m() * steps / srw_ser, srw_ser,
              srw_ser / srw_par, std::fabs(c_par - c_ser));

  EdgeDist e0 = nbrw_start(g, 0);
  double nb_par = bench(nbrw_push, g, e0, steps, &c_par);
  double nb_ser = bench(nbrw_push_serial, g, e0, steps, &c_ser);
  std::printf("nbrw: parallel %8.1f Msteps-edges/s (%6.3fs)  serial %8.1f (%6.3fs)  x%.2f  |checksum gap| %.3g\n",
              2e-6 * g.m() * steps / nb_par, nb_par, 2e-6 * g.m() * steps / nb_ser, nb_ser,
              nb_ser / nb_par, std::fabs(c_par - c_ser));
  return 0;
}
