#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "landau/biharmonic.hpp"
#include "landau/errors.hpp"
#include "support.hpp"

using namespace landau;
using landau::test::maxwellian;

TEST_CASE("Coulomb identity (r^3 g_rr)_r = -r^2 mu / 2") {
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  const auto mu = maxwellian(g);
  const auto d = solve_biharmonic(mu);
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow((*g)[i], 3) * d.g_rr[i];
  const auto dv = differentiate(RadialField(g, v, Parity::none), 1);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double r = (*g)[i];
    if (r > 10.0) break;
    CHECK(std::abs(dv[i] + 0.5 * r * r * mu[i]) < 1e-7);
  }
}

TEST_CASE("r^3 g_rr tends to -sqrt(pi)/8") {
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  const auto d = solve_biharmonic(maxwellian(g));
  const std::size_t n = g->size() - 1;
  CHECK(std::abs(std::pow(30.0, 3) * d.g_rr[n] + std::sqrt(std::numbers::pi) / 8.0) < 1e-10);
}

TEST_CASE("algebraic identity residual at N=512") {
  const auto g = build_grid(30.0, 512, GridScheme::graded);
  const auto mu = maxwellian(g);
  CHECK(verify_biharmonic_residual(solve_biharmonic(mu), mu).algebraic <= 1e-8);
}

TEST_CASE("cross-derivative residual converges") {
  std::vector<double> e;
  for (std::size_t n : {256, 512, 1024}) {
    const auto g = build_grid(30.0, n, GridScheme::graded);
    const auto f = maxwellian(g);
    e.push_back(verify_biharmonic_residual(solve_biharmonic(f), f).cross);
  }
  CHECK(std::log2(e[0] / e[1]) >= 1.8);
  CHECK(std::log2(e[1] / e[2]) >= 1.8);
}

TEST_CASE("g_r / r tends to g_rr at the origin") {
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  const auto d = solve_biharmonic(maxwellian(g));
  CHECK(std::abs(d.g_r_over_r[0] - d.g_rr[0]) < 1e-12);
  CHECK(std::abs(d.g_r_over_r[5] - d.g_r[5] / (*g)[5]) < 1e-12);
}

TEST_CASE("sign properties on random nonnegative fields") {
  const auto g = build_grid(30.0, 512, GridScheme::graded);
  std::mt19937_64 rng(11);
  for (int s = 0; s < 100; ++s) CHECK(sign_properties(test::random_mixture(g, rng)).all());
}

TEST_CASE("sign properties require f >= 0") {
  const auto g = build_grid(30.0, 128, GridScheme::graded);
  const auto f = RadialField::sample(g, [](double r) { return (1.0 - r * r) * std::exp(-r * r); });
  CHECK_THROWS_AS(sign_properties(f), PreconditionError);
}

TEST_CASE("|g_rr| (1+r)^3 is bounded by a grid-independent constant") {
  auto fitted = [](std::size_t n) {
    const auto g = build_grid(30.0, n, GridScheme::graded);
    const auto d = solve_biharmonic(maxwellian(g));
    double c = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      c = std::max(c, std::abs(d.g_rr[i]) * std::pow(1.0 + (*g)[i], 3));
    }
    return c;
  };
  const double c512 = fitted(512), c1024 = fitted(1024);
  CHECK(c512 > 0.0);
  CHECK(std::abs(c512 - c1024) <= 1e-6 * c1024);
}
