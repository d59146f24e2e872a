#pragma once

#include <memory>

#include "landau/biharmonic.hpp"
#include "landau/radial.hpp"

namespace landau {

/// mu = exp(-r^2) with its discrete derivatives and the derivatives of
/// g-bar = (-Delta)^{-2} mu, built once per grid and shared.
struct MaxwellianBackground {
  GridPtr grid;
  RadialField mu;
  RadialField mu_r;
  RadialField mu_rr;
  RadialField mu_r_over_r;  // mu_r / r, limit mu_rr(0) at the origin
  BiharmonicDerivatives gbar;
};

std::shared_ptr<const MaxwellianBackground> maxwellian_background(const GridPtr& grid);

struct LinearizedPieces {
  RadialField loc;    // Q(mu, f)
  RadialField nloc;   // Q(f, mu)
  RadialField add;    // -cl r f_r + cw f + 2(alpha-1) mu f
  RadialField alpha;  // loc + nloc + add
  double c_l_bar = 0.0;
  double c_omega_bar = 0.0;
};

/// Q(a, b) = -a_rr g[b]_rr - 2 (a_r / r)(g[b]_r / r) + a b.
RadialField collision_bilinear(const RadialField& a, const RadialField& b);

/// Q(f, f) for the Coulomb potential.
RadialField collision_q(const RadialField& f);

LinearizedPieces linearized_l1(const RadialField& f);

/// alpha in (1, 1.2], or exactly 1 for the relaxation control.
LinearizedPieces l_alpha(const RadialField& f, double alpha);

/// c-bar_l = C2 (alpha - 1), c-bar_omega = C1 (alpha - 1).
double c_l_bar(double alpha);
double c_omega_bar(double alpha);
void validate_alpha(double alpha);

struct NonlinearTerms {
  RadialField n_f;     // N(f)
  RadialField n_fbar;  // N(mu)
};

NonlinearTerms nonlinear_terms(const RadialField& f, double alpha, double c_l, double c_omega);

}  // namespace landau
