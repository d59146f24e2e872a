#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "landau/potentials.hpp"
#include "landau/radial.hpp"
#include "landau/weights.hpp"

namespace landau {

struct FormReport {
  double value = 0.0;
  double damping = 0.0;  // nonpositive contributions (or the square part)
  double loss = 0.0;     // remaining contributions
  double constraint_r2 = 0.0;  // int f r^2 dr
  double constraint_r4 = 0.0;  // int f r^4 dr
};

/// J_rho = int (-gbar_rr r^2)(f_r + 2 r f)(f_r rho + f rho_r) dr.
FormReport form_jrho(const RadialField& f, const WeightFamily& family);

/// J~_rho = int (-gbar_rr r^2)(f_r + lambda f)^2 rho dr.
FormReport form_jrho_tilde(const RadialField& f, const WeightFamily& family);

/// <-L_loc f, f rho> / 4 pi computed from the operator, the second path to J_rho.
double jrho_from_operator(const RadialField& f, const WeightFamily& family);

/// J(rho2) = int L1 f . f rho2 dr.
FormReport form_jrho2(const RadialField& f, const RadialField& rho2);

/// Pieces of the upper bound
///   J(rho2) <= int (-c1 (k2-2) <r>^{-3} + C <r>^{-5}) f^2 rho2 - c4 int <r>^{-3} f_r^2 rho2.
struct Jrho2Terms {
  double j = 0.0;
  double a3 = 0.0;  // int <r>^{-3} f^2 rho2
  double a5 = 0.0;  // int <r>^{-5} f^2 rho2
  double d3 = 0.0;  // int <r>^{-3} f_r^2 rho2
};

Jrho2Terms jrho2_terms(const RadialField& f, const RadialField& rho2);

struct Jrho2Constants {
  double c1 = 0.0;
  double c4 = 0.0;
  double big_c = 0.0;
  double k2 = 12.5;
  /// R0* beyond which -c1 (k2-2) <r>^{-3} + C <r>^{-5} < -c1 (k2-2) <r>^{-3} / 2.
  double r0_star() const;
  double bound(const Jrho2Terms& t) const;
};

/// Fit c1, c4, C so the bound holds on every sample with the largest damping
/// constants. Throws NumericalError when no positive fit exists.
Jrho2Constants fit_jrho2_constants(const std::vector<Jrho2Terms>& samples, double k2);

struct EnergyPair {
  double e2 = 0.0;
  double d2 = 0.0;
};

/// E2 = K1 4 pi int f^2 rho r^2 + int f^2 rho2,
/// D2 = int (f^2 + f_r^2) r^2 <r>^{k2-5}.
EnergyPair energy_functionals(const RadialField& f, const WeightFamily& family);

/// D2 through int <r>^{-3} (f^2 + f_r^2) rho2, the dual quadrature path.
double d2_via_rho2(const RadialField& f, const WeightFamily& family);

struct CoercivityReport {
  double form = 0.0;       // 4 pi int L_alpha f . f W r^2
  double reference = 0.0;  // 4 pi int <r>^{-3} (f^2 + f_r^2) W r^2
  double ratio = 0.0;
  double constraint_r2 = 0.0;
  double constraint_r4 = 0.0;
};

/// Requires |int f r^2|, |int f r^4| below 1e-10 ||f||.
CoercivityReport coercivity_form(const RadialField& f, const WeightFamily& family, double alpha);

enum class Denominator { d2, e2, theorem };

std::string_view to_string(Denominator d);
Denominator parse_denominator(std::string_view text);

/// Ritz basis: even cubic B-splines on uniform knots j * R_max / (n_modes + 1),
/// phi_0 = B(u), phi_j = B(u - j) + B(u + j), u = r / spacing. Every phi_j
/// vanishes to second order at R_max. Knot halving gives nested spans.
struct BasisSpec {
  std::size_t n_modes = 120;
};

std::vector<RadialField> ritz_basis(const GridPtr& grid, const BasisSpec& spec);

/// b - a mu - c r^2 mu with a, c chosen so int b r^2 = int b r^4 = 0.
RadialField project_constraints(const RadialField& b);

/// Largest lambda with A - lambda B singular, B symmetric positive definite.
/// Bisection on positive definiteness of the diagonally scaled lambda B - A
/// (Cholesky test), which keeps its accuracy when the quotients of
/// individual basis functions span many orders of magnitude.
double top_generalized_eigenvalue(const std::vector<double>& a, const std::vector<double>& b,
                                  std::size_t n);

struct GapOptions {
  double alpha = 1.0;
  Denominator denominator = Denominator::d2;
  BasisSpec basis;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct GapEstimate {
  double alpha = 1.0;
  double top_rayleigh = 0.0;
  Denominator denominator = Denominator::d2;
  std::size_t n_modes = 0;
  std::size_t grid_intervals = 0;
  double r_max = 0.0;
  double best_single = 0.0;  // max_i A_ii / B_ii, a lower bound for top_rayleigh
  double asymmetry = 0.0;    // max |A_ij - A_ji| / sqrt(|A_ii A_jj|)
};

GapEstimate constrained_gap(const WeightFamily& family, const GapOptions& options);

/// Raw matrices of the Ritz problem before the constraint reduction.
struct RitzMatrices {
  std::vector<double> a;  // n x n row-major, <L_alpha b_i, b_j W>
  std::vector<double> b;  // n x n denominator Gram
  std::size_t n = 0;
};

RitzMatrices assemble_ritz(const WeightFamily& family, const GapOptions& options);

struct SurrogateGap {
  int n = 0;
  double delta = 0.0;
  std::size_t modes = 0;
  std::string label = "surrogate";
};

inline constexpr std::size_t kSurrogateModes = 24;

/// delta_n: minimum over h of the localized Dirichlet form of -L1^(n) at
/// f = h mu^{1/2} against |h|^2_{sigma,n} = 4 pi int (-gbar_rr)(h_r^2 + r^2 h^2) r^2,
/// both restricted to [0, n] with gbar from mu 1_{r<=n}. h ranges over even
/// cubic B-splines on knots j n / (modes - 2), projected L2(r^2)-orthogonally
/// to {1, r^2} mu^{1/2}.
SurrogateGap local_gap_surrogate(int n, std::size_t intervals = 512,
                                 std::size_t modes = kSurrogateModes);

/// Quotient of the localized form for a single h on a grid over [0, n],
/// after the same projection.
double surrogate_quotient(const RadialField& h);

}  // namespace landau
