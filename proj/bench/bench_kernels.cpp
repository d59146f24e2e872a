// Serial reference vs OpenMP kernels: soft-potential convolution and Ritz
// matrix assembly. Prints wall time, speedup and max deviation.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "landau/potentials.hpp"
#include "landau/spectral.hpp"

using namespace landau;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial_s", "omp_s", "speedup", "max_diff");
  for (std::size_t n : {512, 1024, 2048}) {
    const auto grid = build_grid(30.0, n, GridScheme::graded);
    const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
    std::vector<double> s, p;
    const double ts = seconds([&] { s = soft_convolution(*grid, mu.values(), -2.5, ExecPolicy::serial); }, 3);
    const double tp = seconds([&] { p = soft_convolution(*grid, mu.values(), -2.5, ExecPolicy::parallel); }, 3);
    char name[64];
    std::snprintf(name, sizeof name, "soft_convolution N=%zu", n);
    std::printf("%-28s %10.4f %10.4f %8.2f %10.2e\n", name, ts, tp, ts / tp, max_diff(s, p));
  }
  const auto grid = build_grid(30.0, 1024, GridScheme::graded);
  const auto fam = build_weight_family(grid, WeightParams{});
  for (std::size_t modes : {80, 120, 240}) {
    GapOptions opt;
    opt.alpha = 1.0;
    opt.basis.n_modes = modes;
    RitzMatrices ms, mp;
    opt.policy = ExecPolicy::serial;
    const double ts = seconds([&] { ms = assemble_ritz(fam, opt); }, 3);
    opt.policy = ExecPolicy::parallel;
    const double tp = seconds([&] { mp = assemble_ritz(fam, opt); }, 3);
    char name[64];
    std::snprintf(name, sizeof name, "assemble_ritz modes=%zu", modes);
    std::printf("%-28s %10.4f %10.4f %8.2f %10.2e\n", name, ts, tp, ts / tp, max_diff(ms.a, mp.a));
  }
  return 0;
}
