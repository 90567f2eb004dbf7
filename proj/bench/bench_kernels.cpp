// Timing comparison of the OpenMP field kernels against the serial reference
// implementations, plus end-to-end step and ensemble throughput.
//
//   ./srsw_bench [grid sizes...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "reference.hpp"
#include "srsw/estimates.hpp"
#include "srsw/kernels.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  fn(); // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench_pointwise(int n) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n) * n;
  std::vector<double> a(m, 1.25), b(m, 0.75), out(m);
  const int reps = std::max(4, static_cast<int>(4e7 / m));

  const double serial = time_ms(reps, [&] { ref::mul(a.data(), b.data(), out.data(), m); });
  const double par = time_ms(reps, [&] { srsw::kernels::mul(a.data(), b.data(), out.data(), m); });
  std::printf("  mul      n=%4d  serial %8.4f ms   omp %8.4f ms   speedup %.2fx\n", n, serial,
              par, serial / par);

  const double sdot = time_ms(reps, [&] { (void)ref::dot(a.data(), b.data(), m); });
  const double kdot = time_ms(reps, [&] { (void)srsw::kernels::dot(a.data(), b.data(), m); });
  std::printf("  dot      n=%4d  serial %8.4f ms   ker %8.4f ms   (reduction kept serial)\n", n,
              sdot, kdot);
}

void bench_drift(int n) {
  auto grid = srsw::TorusGrid::make(n);
  srsw::PhysicalParams params;
  const srsw::State a = srsw::sample_analytic_state(42, {0.1, 4, 1.0}).realize(grid);
  const int reps = std::max(2, 2048 / n);

  const double spectral = time_ms(reps, [&] { (void)srsw::drift_deterministic(a, params); });
  srsw::VectorField dv;
  srsw::ScalarField dh;
  const double fd = time_ms(reps, [&] { ref::fd_drift(a, params, dv, dh); });
  std::printf("  drift    n=%4d  fd-ref %8.3f ms   spectral %8.3f ms\n", n, fd, spectral);
}

void bench_ensemble(int n) {
  auto grid = srsw::TorusGrid::make(n);
  srsw::PhysicalParams params;
  srsw::State a0 = srsw::sample_analytic_state(7, {0.02, 3, 1.0}).realize(grid);
  const srsw::NoiseBasis basis = srsw::NoiseBasis::standard(grid, 8);
  srsw::IntegrateConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 0.9 * srsw::stability_limits(a0, params, basis).dt_max;
  const int steps = static_cast<int>(cfg.T / cfg.dt) + 1;
  const int paths = 8;

  auto run_members = [&] {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < paths; ++i) {
      const srsw::NoisePath path =
          srsw::sample_path(basis.count(), cfg.dt, steps, srsw::derive_seed(1, i));
      (void)srsw::integrate(a0, params, basis, path, cfg);
    }
  };
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double serial = time_ms(1, run_members);
  omp_set_num_threads(saved);
  const double par = time_ms(1, run_members);
  std::printf("  ensemble n=%4d  %d paths  serial %8.1f ms   omp(%d) %8.1f ms   speedup %.2fx\n",
              n, paths, serial, saved, par, serial / par);
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::stoi(argv[i]));
  if (sizes.empty()) sizes = {64, 128, 256};

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("pointwise kernels (parallel above %td elements):\n",
              srsw::kernels::par_threshold);
  for (int n : sizes) bench_pointwise(n);
  std::printf("drift assembly, spectral vs 4th-order finite-difference reference:\n");
  for (int n : sizes) bench_drift(n);
  std::printf("ensemble throughput, serial vs OpenMP members:\n");
  bench_ensemble(64);
  return 0;
}
