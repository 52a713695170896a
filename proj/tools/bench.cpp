// Timing comparison between the OpenMP kernels and their serial references.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qlink/detection.hpp"
#include "qlink/sender.hpp"

using namespace qlink;

namespace {

template <class F>
double time_ms(const F& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both paths run serially\n");
#endif

  ParamsIn in;
  in.g = 12;
  in.k = 3;
  in.gamma_sp = 5.87;
  in.omega1 = 7;
  in.omega2 = 28;
  in.delta_b_f = -12;
  in.delta_b_fp = 4;
  in.delta = 100;
  const auto p = build_params(in);
  const auto f1 = gaussian_pulse(0.12, 0.0);

  {
    const auto grid = make_grid(-0.72, 0.72, 2000000);
    const double ts = time_ms([&] { photon_wavepackets_serial(p, f1, grid); });
    const double tp = time_ms([&] { photon_wavepackets(p, f1, grid); });
    std::printf("wavepacket sampling (%d pts): serial %.1f ms, parallel %.1f ms, x%.2f\n",
                grid.n_points, ts, tp, ts / tp);
  }

  {
    const std::array<double, 3> beta_sq = {0.31, 0.36, 0.33};
    const DetectorModel det{0.9, 1e-4, 42};
    const std::uint64_t n = 20000000;
    CountRecord a, b;
    const double ts = time_ms([&] { a = simulate_readout_serial(beta_sq, det, n); });
    const double tp = time_ms([&] { b = simulate_readout(beta_sq, det, n); });
    std::printf("readout Monte Carlo (%llu trials): serial %.1f ms, parallel %.1f ms, x%.2f\n",
                static_cast<unsigned long long>(n), ts, tp, ts / tp);
    if (a.n_plus != b.n_plus || a.n_minus != b.n_minus ||
        a.n_second_stage != b.n_second_stage) {
      std::printf("MISMATCH between serial and parallel counts\n");
      return 1;
    }
  }

  return 0;
}
