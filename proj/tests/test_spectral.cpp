#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "landau/collision.hpp"
#include "landau/errors.hpp"
#include "landau/spectral.hpp"
#include "support.hpp"

using namespace landau;
using landau::test::maxwellian;

namespace {

const GridPtr& grid1024() {
  static const auto g = build_grid(30.0, 1024, GridScheme::graded);
  return g;
}

const WeightFamily& family() {
  static const auto fam = build_weight_family(grid1024(), WeightParams{});
  return fam;
}

// (c0 + c1 r^2 + c2 r^4) exp(-r^2 / s^2), sign-changing in general.
RadialField random_smooth(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0), s(0.7, 2.5);
  const double c0 = c(rng), c1 = c(rng), c2 = 0.3 * c(rng), w = s(rng);
  return RadialField::sample(g, [=](double r) {
    const double x = r * r;
    return (c0 + c1 * x + c2 * x * x) * std::exp(-x / (w * w));
  });
}

double norm2(const RadialField& f) { return std::sqrt(integrate(f * f, 2)); }

}  // namespace

TEST_CASE("forms vanish at f = 0") {
  const auto zero = RadialField::zeros(grid1024());
  CHECK(form_jrho(zero, family()).value == 0.0);
  CHECK(form_jrho_tilde(zero, family()).value == 0.0);
  CHECK(form_jrho2(zero, family().rho2).value == 0.0);
  const auto e = energy_functionals(zero, family());
  CHECK(e.e2 == 0.0);
  CHECK(e.d2 == 0.0);
  const auto c = coercivity_form(zero, family(), 1.0);
  CHECK(c.form == 0.0);
  CHECK(c.reference == 0.0);
}

TEST_CASE("J_rho is a square when rho = e^{r^2} everywhere") {
  const auto g = build_grid(8.0, 512, GridScheme::graded);
  const auto rho = RadialField::sample(g, [](double r) { return std::exp(r * r); });
  const WeightFamily fam{WeightParams{},
                         EtaProfile{},
                         0.0,
                         RadialField::sample(g, [](double) { return 1.0; }),
                         RadialField::sample(g, [](double r) { return std::log(2.0) + r * r; }),
                         RadialField::sample(g, [](double r) { return r * r; }),
                         2.0 * rho,
                         rho,
                         RadialField::sample(g, [](double r) { return 2.0 * r; }),
                         build_rho2(g, 12.5),
                         rho};
  std::mt19937_64 rng(31);
  for (int s = 0; s < 50; ++s) {
    const auto f = random_smooth(g, rng);
    const auto rep = form_jrho(f, fam);
    CHECK(rep.value >= 0.0);
    CHECK(rep.value == doctest::Approx(rep.damping).epsilon(1e-12));
  }
}

TEST_CASE("J_rho two evaluation paths agree") {
  std::mt19937_64 rng(32);
  for (int s = 0; s < 20; ++s) {
    const auto f = random_smooth(grid1024(), rng);
    const double a = form_jrho(f, family()).value;
    const double b = jrho_from_operator(f, family());
    CHECK(std::abs(a - b) <= 1e-3 * std::abs(a));
  }
  // Wide fields feel the kinks of rho at R1 and R1*; the gap still closes.
  double prev = 1e300;
  for (std::size_t n : {512, 1024, 2048}) {
    const auto g = build_grid(30.0, n, GridScheme::graded);
    const auto fam = build_weight_family(g, WeightParams{});
    const auto f = RadialField::sample(g, [](double r) {
      const double x = r * r;
      return (0.3 - 0.5 * x + 0.1 * x * x) * std::exp(-x / 4.0);
    });
    const double a = form_jrho(f, fam).value;
    const double rel = std::abs(a - jrho_from_operator(f, fam)) / std::abs(a);
    CHECK(rel < 0.5 * prev);
    prev = rel;
  }
}

TEST_CASE("J~_rho is nonnegative and vanishes on f = 1 / rho") {
  std::mt19937_64 rng(33);
  for (int s = 0; s < 100; ++s) CHECK(form_jrho_tilde(random_smooth(grid1024(), rng), family()).value >= 0.0);
  std::vector<double> v(grid1024()->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-family().log_rho[i]);
  const RadialField f(grid1024(), v);
  const double zero = form_jrho_tilde(f, family()).value;
  const double ref = form_jrho_tilde(maxwellian(grid1024()) * RadialField::sample(grid1024(), [](double r) {
                                       return 1.0 + r;
                                     }), family()).value;
  CHECK(std::abs(zero) <= 1e-8 * ref);
}

TEST_CASE("J_rho >= J~_rho - C int_{r >= R1} f^2 r^2 with one C") {
  auto ratio = [&](const RadialField& f) {
    const double gap = form_jrho_tilde(f, family()).value - form_jrho(f, family()).value;
    std::vector<double> outer(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) outer[i] = (*grid1024())[i] >= 4.0 ? f[i] * f[i] : 0.0;
    return gap / integrate_values(*grid1024(), outer, 2);
  };
  std::mt19937_64 rng(34);
  double c = 0.0;
  for (int s = 0; s < 100; ++s) c = std::max(c, ratio(random_smooth(grid1024(), rng)));
  CHECK(std::isfinite(c));
  for (int s = 0; s < 100; ++s) CHECK(ratio(random_smooth(grid1024(), rng)) <= 2.0 * c + 1e-12);
}

TEST_CASE("J(rho2) bound with frozen constants") {
  const auto& rho2 = family().rho2;
  std::mt19937_64 rng(35);
  std::vector<Jrho2Terms> fit;
  for (int s = 0; s < 100; ++s) fit.push_back(jrho2_terms(random_smooth(grid1024(), rng), rho2));
  const auto k = fit_jrho2_constants(fit, 12.5);
  CHECK(k.c1 > 0.0);
  CHECK(k.c4 > 0.0);
  CHECK(k.big_c > 0.0);
  for (const auto& t : fit) CHECK(t.j <= k.bound(t));
  const double r0 = k.r0_star();
  const auto bump = RadialField::sample(grid1024(), [=](double r) {
    return std::exp(-4.0 * (r - (r0 + 4.0)) * (r - (r0 + 4.0)));
  });
  CHECK(form_jrho2(bump, rho2).value < 0.0);
}

TEST_CASE("J(rho2) fit rejects empty samples") {
  CHECK_THROWS_AS(fit_jrho2_constants({}, 12.5), ConfigurationError);
}

TEST_CASE("D2 through both quadrature paths and E2 homogeneity") {
  const auto f = maxwellian(grid1024()) * RadialField::sample(grid1024(), [](double r) { return r * r; });
  const auto e = energy_functionals(f, family());
  CHECK(e.d2 == doctest::Approx(d2_via_rho2(f, family())).epsilon(1e-12));
  CHECK(energy_functionals(2.0 * f, family()).e2 == 4.0 * e.e2);
  CHECK(e.e2 > 0.0);
}

TEST_CASE("project_constraints removes both moments and is idempotent") {
  std::mt19937_64 rng(36);
  const auto f = test::random_mixture(grid1024(), rng);
  const auto p = project_constraints(f);
  CHECK(std::abs(integrate(p, 2)) <= 1e-14 * norm2(f));
  CHECK(std::abs(integrate(p, 4)) <= 1e-14 * norm2(f));
  CHECK(test::max_diff(project_constraints(p), p) <= 1e-14 * p.max_abs());
}

TEST_CASE("coercivity form on random constrained fields") {
  std::mt19937_64 rng(37);
  double worst = -1e300;
  for (int s = 0; s < 200; ++s) {
    const auto f = project_constraints(random_smooth(grid1024(), rng));
    worst = std::max(worst, coercivity_form(f, family(), 1.0).ratio);
  }
  MESSAGE("c* over 200 samples: " << -worst);
  CHECK(worst < 0.0);
}

TEST_CASE("coercivity form is affine in alpha") {
  std::mt19937_64 rng(38);
  const auto f = project_constraints(random_smooth(grid1024(), rng));
  const double f1 = coercivity_form(f, family(), 1.0).form;
  const double f2 = coercivity_form(f, family(), 1.02).form;
  const double f4 = coercivity_form(f, family(), 1.04).form;
  CHECK(f4 - f1 == doctest::Approx(2.0 * (f2 - f1)).epsilon(1e-9));
}

TEST_CASE("coercivity form rejects unconstrained fields") {
  CHECK_THROWS_AS(coercivity_form(maxwellian(grid1024()), family(), 1.0), PreconditionError);
}

TEST_CASE("top generalized eigenvalue against a dense solver") {
  std::mt19937_64 rng(39);
  std::normal_distribution<double> z;
  for (std::size_t n : {2, 5, 12}) {
    Eigen::MatrixXd m(n, n), s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = z(rng);
        s(i, j) = z(rng);
      }
    }
    const Eigen::MatrixXd a = 0.5 * (m + m.transpose());
    const Eigen::MatrixXd b = s * s.transpose() + Eigen::MatrixXd::Identity(n, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
    const double expect = es.eigenvalues().maxCoeff();
    std::vector<double> av(a.data(), a.data() + n * n), bv(b.data(), b.data() + n * n);
    CHECK(top_generalized_eigenvalue(av, bv, n) == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK_THROWS_AS(top_generalized_eigenvalue({1.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, -1.0}, 2),
                  NumericalError);
}

TEST_CASE("basis size limits") {
  CHECK_THROWS_AS(ritz_basis(grid1024(), BasisSpec{2}), ConfigurationError);
  CHECK_THROWS_AS(ritz_basis(grid1024(), BasisSpec{513}), ConfigurationError);
  const auto basis = ritz_basis(grid1024(), BasisSpec{15});
  CHECK(basis.size() == 15);
  for (const auto& b : basis) CHECK(std::abs(b[b.size() - 1]) < 1e-15);
}

TEST_CASE("coercive at alpha = 1 with the D2 denominator") {
  GapOptions o;
  o.alpha = 1.0;
  const auto est = constrained_gap(family(), o);
  MESSAGE("top quotient " << est.top_rayleigh);
  CHECK(est.top_rayleigh < 0.0);
  CHECK(est.best_single <= est.top_rayleigh);
}

TEST_CASE("top quotient is nondecreasing over nested bases") {
  double prev = -1e300;
  for (std::size_t m : {7, 15, 31, 63, 127}) {
    GapOptions o;
    o.basis.n_modes = m;
    const double top = constrained_gap(family(), o).top_rayleigh;
    CAPTURE(m);
    CHECK(top >= prev - 1e-10 * std::abs(top));
    prev = top;
  }
}

TEST_CASE("top quotient is invariant under rescaling W") {
  GapOptions o;
  o.denominator = Denominator::theorem;
  o.basis.n_modes = 60;
  const double a = constrained_gap(family(), o).top_rayleigh;
  auto scaled = family();
  scaled.w = 3.7 * scaled.w;
  const double b = constrained_gap(scaled, o).top_rayleigh;
  CHECK(b == doctest::Approx(a).epsilon(1e-8));
}

TEST_CASE("serial and parallel Ritz assembly agree") {
  GapOptions o;
  o.basis.n_modes = 40;
  o.policy = ExecPolicy::serial;
  const auto s = assemble_ritz(family(), o);
  o.policy = ExecPolicy::parallel;
  const auto p = assemble_ritz(family(), o);
  CHECK(s.a == p.a);
  CHECK(s.b == p.b);
}

TEST_CASE("denominator names round-trip") {
  for (auto d : {Denominator::d2, Denominator::e2, Denominator::theorem}) {
    CHECK(parse_denominator(to_string(d)) == d);
  }
  CHECK_THROWS_AS(parse_denominator("l2"), ConfigurationError);
}

TEST_CASE("local gap surrogate stays positive for n = 2, 3, 4") {
  std::vector<double> d;
  for (int n : {2, 3, 4}) {
    const auto s = local_gap_surrogate(n);
    CHECK(s.label == "surrogate");
    CHECK(s.delta > 0.0);
    d.push_back(s.delta);
  }
  CHECK(d[2] >= 0.5 * std::max(d[0], d[1]));
  CHECK_THROWS_AS(local_gap_surrogate(1), NumericalError);
  CHECK_THROWS_AS(local_gap_surrogate(3, 512, 5), ConfigurationError);
}

TEST_CASE("surrogate quotient ignores local kernel components") {
  const auto g = build_grid(3.0, 512, GridScheme::graded);
  const auto h = RadialField::sample(g, [](double r) {
    const double x = r * r / 9.0;
    return (1.0 - x) * (1.0 - x) * (0.5 + r * r);
  });
  const auto kernel = RadialField::sample(g, [](double r) {
    return (0.3 - 0.2 * r * r) * std::exp(-0.5 * r * r);
  });
  const double a = surrogate_quotient(h);
  const double b = surrogate_quotient(h + kernel);
  CHECK(a > 0.0);
  CHECK(b == doctest::Approx(a).epsilon(1e-10));
  CHECK_THROWS_AS(surrogate_quotient(kernel), DegenerateFieldError);
}
