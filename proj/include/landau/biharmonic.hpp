#pragma once

#include "landau/radial.hpp"

namespace landau {

/// Radial derivatives of g = (-Delta)^{-2} f and of g1 = Delta^{-1} f,
/// written through the cumulative moments A2, A4, B1 of f:
///
///   g_r    = -A2/2 + A4/(6 r^2) - r B1/3
///   g_rr   = -A4/(3 r^3) - B1/3
///   g_rrr  =  A4/r^4
///   g_rrrr =  f - 4 A4/r^5
///   g1     = -A2/r - B1
///
/// g_r_over_r holds g_r / r, whose r -> 0 limit is g_rr(0); the Coulomb
/// operator needs that quotient directly.
struct BiharmonicDerivatives {
  RadialField g_r;
  RadialField g_rr;
  RadialField g_rrr;
  RadialField g_rrrr;
  RadialField g1;
  RadialField g_r_over_r;
};

/// Nodes 0..kTaylorNodes-1 use A_k from the Taylor expansion of f at 0
/// instead of the cumulative quadrature, avoiding cancellation in A4/r^5.
inline constexpr std::size_t kTaylorNodes = 3;

BiharmonicDerivatives solve_biharmonic(const RadialField& f);

struct BiharmonicResidual {
  double algebraic = 0.0;  // max |g_rrrr + 4 g_rrr / r - f| / (1 + |f|), interior nodes
  double cross = 0.0;      // max |d/dr g_r - g_rr|
  double value() const { return algebraic > cross ? algebraic : cross; }
};

BiharmonicResidual verify_biharmonic_residual(const BiharmonicDerivatives& d, const RadialField& f);

struct SignReport {
  bool g_r_nonpositive = false;
  bool g_rr_nonpositive = false;
  bool g_rrr_nonnegative = false;
  bool all() const { return g_r_nonpositive && g_rr_nonpositive && g_rrr_nonnegative; }
};

/// Requires f >= 0 at every node (PreconditionError names the first
/// offending node otherwise).
SignReport sign_properties(const RadialField& f);

}  // namespace landau
