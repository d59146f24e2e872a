#include "landau/biharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {
namespace {

struct Parts {
  std::vector<double> a2, a4, b1;
  double f0 = 0.0;  // f(0)
  double f2 = 0.0;  // f''(0)
};

// Moments with the first few nodes replaced by A_k ~ f0 r^{k+1}/(k+1) + f''(0) r^{k+3}/(2(k+3)).
Parts moment_parts(const RadialField& f) {
  const auto m = moments(f);
  Parts p{m.a2.data(), m.a4.data(), m.b1.data(), 0.0, 0.0};
  const auto& grid = f.grid();
  std::vector<double> d2(grid.size());
  second_derivative(grid, f.values(), Parity::even, d2);
  const double f0 = f[0];
  const double f2 = d2[0];
  p.f0 = f0;
  p.f2 = f2;
  for (std::size_t i = 0; i < std::min(kTaylorNodes, grid.size()); ++i) {
    const double r = grid[i];
    const double r3 = r * r * r;
    const double r5 = r3 * r * r;
    p.a2[i] = f0 * r3 / 3.0 + f2 * r5 / 10.0;
    p.a4[i] = f0 * r5 / 5.0 + f2 * r5 * r * r / 14.0;
  }
  return p;
}

}  // namespace

BiharmonicDerivatives solve_biharmonic(const RadialField& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  const Parts p = moment_parts(f);

  std::vector<double> gr(n), grr(n), grrr(n), grrrr(n), g1(n), gq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    const double a2 = p.a2[i], a4 = p.a4[i], b1 = p.b1[i];
    if (i == 0) {
      gr[i] = 0.0;
      grr[i] = -b1 / 3.0;
      grrr[i] = 0.0;
      grrrr[i] = f[0] / 5.0;
      g1[i] = -b1;
      gq[i] = -b1 / 3.0;
      continue;
    }
    if (i < kTaylorNodes) {
      // Same expansions divided through analytically.
      const double f0 = p.f0;
      const double f2 = p.f2;
      const double a4_r3 = f0 * r * r / 5.0 + f2 * std::pow(r, 4) / 14.0;
      const double a4_r4 = f0 * r / 5.0 + f2 * std::pow(r, 3) / 14.0;
      const double a4_r5 = f0 / 5.0 + f2 * r * r / 14.0;
      const double a2_r = f0 * r * r / 3.0 + f2 * std::pow(r, 4) / 10.0;
      gr[i] = -0.5 * a2 + a4_r3 * r / 6.0 - r * b1 / 3.0;
      grr[i] = -a4_r3 / 3.0 - b1 / 3.0;
      grrr[i] = a4_r4;
      grrrr[i] = f[i] - 4.0 * a4_r5;
      g1[i] = -a2_r - b1;
      gq[i] = -0.5 * a2_r + a4_r3 / 6.0 - b1 / 3.0;
      continue;
    }
    const double r2 = r * r;
    const double r3 = r2 * r;
    gr[i] = -0.5 * a2 + a4 / (6.0 * r2) - r * b1 / 3.0;
    grr[i] = -a4 / (3.0 * r3) - b1 / 3.0;
    grrr[i] = a4 / (r2 * r2);
    grrrr[i] = f[i] - 4.0 * a4 / (r2 * r3);
    g1[i] = -a2 / r - b1;
    gq[i] = gr[i] / r;
  }
  const auto& gp = f.grid_ptr();
  return BiharmonicDerivatives{
      RadialField(gp, std::move(gr), Parity::none),   RadialField(gp, std::move(grr)),
      RadialField(gp, std::move(grrr), Parity::none), RadialField(gp, std::move(grrrr)),
      RadialField(gp, std::move(g1)),                 RadialField(gp, std::move(gq))};
}

BiharmonicResidual verify_biharmonic_residual(const BiharmonicDerivatives& d, const RadialField& f) {
  require_same_grid(d.g_rr, f);
  const auto& grid = f.grid();
  BiharmonicResidual res;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double lhs = d.g_rrrr[i] + 4.0 * d.g_rrr[i] / grid[i];
    res.algebraic = std::max(res.algebraic, std::abs(lhs - f[i]) / (1.0 + std::abs(f[i])));
  }
  const auto dgr = differentiate(d.g_r, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    res.cross = std::max(res.cross, std::abs(dgr[i] - d.g_rr[i]));
  }
  return res;
}

SignReport sign_properties(const RadialField& f) {
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) {
      std::ostringstream os;
      os << "sign_properties requires f >= 0; node " << i << " (r = " << grid[i]
         << ") holds " << f[i];
      throw PreconditionError(os.str());
    }
  }
  const Parts p = moment_parts(f);
  const auto d = solve_biharmonic(f);
  SignReport rep{true, true, true};
  constexpr double tol = 1e-12;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double r = grid[i];
    const double a2 = std::abs(p.a2[i]);
    const double a4 = std::abs(p.a4[i]);
    const double b1 = std::abs(p.b1[i]);
    const double s_r = 0.5 * a2 + a4 / (6.0 * r * r) + r * b1 / 3.0;
    const double s_rr = a4 / (3.0 * r * r * r) + b1 / 3.0;
    const double s_rrr = a4 / (r * r * r * r);
    if (d.g_r[i] > tol * s_r) rep.g_r_nonpositive = false;
    if (d.g_rr[i] > tol * s_rr) rep.g_rr_nonpositive = false;
    if (d.g_rrr[i] < -tol * s_rrr) rep.g_rrr_nonnegative = false;
  }
  if (d.g_rr[0] > tol * std::abs(p.b1[0])) rep.g_rr_nonpositive = false;
  return rep;
}

}  // namespace landau
