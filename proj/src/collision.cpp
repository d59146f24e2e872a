#include "landau/collision.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/potentials.hpp"

namespace landau {
namespace {

void require_even(const RadialField& f, const char* what) {
  if (f.parity() != Parity::even) {
    throw PreconditionError(std::string(what) + " requires an even-parity field");
  }
}

// a_r / r with the origin limit a_rr(0).
std::vector<double> quotient(const RadialGrid& grid, std::span<const double> d1,
                             std::span<const double> d2) {
  std::vector<double> q(grid.size());
  q[0] = d2[0];
  for (std::size_t i = 1; i < q.size(); ++i) q[i] = d1[i] / grid[i];
  return q;
}

struct Derivs {
  std::vector<double> d1, d2, q;
};

Derivs derivs(const RadialField& f) {
  const auto& grid = f.grid();
  Derivs d{std::vector<double>(f.size()), std::vector<double>(f.size()), {}};
  first_derivative(grid, f.values(), Parity::even, d.d1);
  second_derivative(grid, f.values(), Parity::even, d.d2);
  d.q = quotient(grid, d.d1, d.d2);
  return d;
}

RadialField apply_q(const RadialField& a, const Derivs& da, const RadialField& b,
                    const BiharmonicDerivatives& gb) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -da.d2[i] * gb.g_rr[i] - 2.0 * da.q[i] * gb.g_r_over_r[i] + a[i] * b[i];
  }
  return RadialField(a.grid_ptr(), std::move(out));
}

std::mutex cache_mutex;
std::map<const RadialGrid*, std::weak_ptr<const MaxwellianBackground>> cache;

}  // namespace

std::shared_ptr<const MaxwellianBackground> maxwellian_background(const GridPtr& grid) {
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[grid.get()];
  if (auto hit = slot.lock(); hit && hit->grid == grid) return hit;
  auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  const auto d = derivs(mu);
  auto bg = std::make_shared<const MaxwellianBackground>(MaxwellianBackground{
      grid, mu, RadialField(grid, d.d1, Parity::none), RadialField(grid, d.d2),
      RadialField(grid, d.q), solve_biharmonic(mu)});
  slot = bg;
  return bg;
}

RadialField collision_bilinear(const RadialField& a, const RadialField& b) {
  require_same_grid(a, b);
  require_even(a, "collision_bilinear");
  require_even(b, "collision_bilinear");
  return apply_q(a, derivs(a), b, solve_biharmonic(b));
}

RadialField collision_q(const RadialField& f) { return collision_bilinear(f, f); }

void validate_alpha(double alpha) {
  if (!(alpha == 1.0 || (alpha > 1.0 && alpha <= 1.2))) {
    std::ostringstream os;
    os << "alpha must be 1 or lie in (1, 1.2], got " << alpha;
    throw ConfigurationError(os.str());
  }
}

double c_l_bar(double alpha) { return kCoulombC2 * (alpha - 1.0); }
double c_omega_bar(double alpha) { return kCoulombC1 * (alpha - 1.0); }

LinearizedPieces linearized_l1(const RadialField& f) {
  require_even(f, "linearized_l1");
  const auto bg = maxwellian_background(f.grid_ptr());
  auto loc = apply_q(f, derivs(f), bg->mu, bg->gbar);
  const Derivs dmu{bg->mu_r.data(), bg->mu_rr.data(), bg->mu_r_over_r.data()};
  auto nloc = apply_q(bg->mu, dmu, f, solve_biharmonic(f));
  auto sum = loc + nloc;
  return {std::move(loc), std::move(nloc), RadialField::zeros(f.grid_ptr()), std::move(sum), 0.0,
          0.0};
}

LinearizedPieces l_alpha(const RadialField& f, double alpha) {
  validate_alpha(alpha);
  auto pieces = linearized_l1(f);
  const double cl = c_l_bar(alpha);
  const double cw = c_omega_bar(alpha);
  const auto bg = maxwellian_background(f.grid_ptr());
  const auto& grid = f.grid();
  std::vector<double> fr(f.size());
  first_derivative(grid, f.values(), Parity::even, fr);
  std::vector<double> add(f.size());
  for (std::size_t i = 0; i < add.size(); ++i) {
    add[i] = -cl * grid[i] * fr[i] + cw * f[i] + 2.0 * (alpha - 1.0) * bg->mu[i] * f[i];
  }
  pieces.add = RadialField(f.grid_ptr(), std::move(add));
  pieces.alpha = pieces.loc + pieces.nloc + pieces.add;
  pieces.c_l_bar = cl;
  pieces.c_omega_bar = cw;
  return pieces;
}

NonlinearTerms nonlinear_terms(const RadialField& f, double alpha, double c_l, double c_omega) {
  validate_alpha(alpha);
  require_even(f, "nonlinear_terms");
  const auto bg = maxwellian_background(f.grid_ptr());
  const auto& grid = f.grid();
  const auto df = derivs(f);
  const auto g = solve_biharmonic(f);
  const double cl = c_l_bar(alpha);
  const double cw = c_omega_bar(alpha);
  std::vector<double> nf(f.size()), nb(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = grid[i];
    nf[i] = -c_l * r * df.d1[i] - df.d2[i] * g.g_rr[i] - 2.0 * df.q[i] * g.g_r_over_r[i] +
            alpha * f[i] * f[i] + c_omega * f[i];
    const double mu = bg->mu[i];
    nb[i] = -(cl + c_l) * r * bg->mu_r[i] + (alpha - 1.0) * mu * mu + (cw + c_omega) * mu;
  }
  return {RadialField(f.grid_ptr(), std::move(nf)), RadialField(f.grid_ptr(), std::move(nb))};
}

}  // namespace landau
