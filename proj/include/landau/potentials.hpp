#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "landau/radial.hpp"

namespace landau {

/// Interaction exponent gamma in [-3, -2). gamma = -3 is the Coulomb case,
/// where c(f) = f; otherwise c(f) = c_gamma |v|^gamma * f with c_gamma = 1.
/// Every downstream quantity (C1, C2, sigma) is a ratio or a sign, so the
/// normalisation of c_gamma never enters.
struct PotentialSpec {
  double gamma = -3.0;

  bool coulomb() const { return gamma == -3.0; }
  void validate() const;
};

/// Lemma constants at the Maxwellian for the Coulomb potential.
inline const double kCoulombC1 = -7.0 / (8.0 * std::sqrt(2.0));
inline const double kCoulombC2 = 1.0 / (8.0 * std::sqrt(2.0));

enum class ExecPolicy { serial, parallel };

/// Radial reduction of the 3D convolution |v|^gamma * f for gamma in (-3, -2):
///   K(r) = 2 pi / (r (gamma+2)) int_0^inf s f(s) [(r+s)^{gamma+2} - |r-s|^{gamma+2}] ds,
///   K(0) = 4 pi int_0^inf s^{gamma+2} f(s) ds.
/// Cells touching the kink s = r use exact power-law moments of the local
/// cubic interpolant; all other cells use 4-point Gauss-Legendre.
std::vector<double> soft_convolution(const RadialGrid& grid, std::span<const double> f,
                                     double gamma, ExecPolicy policy = ExecPolicy::parallel);

/// c(f): identity for gamma = -3, the convolution above otherwise.
RadialField c_of_f(const RadialField& f, const PotentialSpec& spec,
                   ExecPolicy policy = ExecPolicy::parallel);

/// r * d/dr c(mu) for gamma in (-3, -2). Throws ConfigurationError for -3.
RadialField maxwellian_monotonicity(const GridPtr& grid, double gamma);

struct NormalizationConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double sigma = 0.0;    // |C1 / C2|
  double k_gamma = 0.0;  // 2 + sigma
  // Intermediate ratios int c(f) f |v|^k / int f |v|^k for k = 0, 2.
  double ratio0 = 0.0;
  double ratio2 = 0.0;
};

/// C1, C2 of the normalization conditions:
///   C1 = (-5 R0 + 3 R2) / 2,  C2 = (R0 - R2) / 2,  Rk = int c(f) f |v|^k / int f |v|^k.
/// Throws DegenerateFieldError when int f or int f |v|^2 vanishes.
NormalizationConstants normalization_constants(const RadialField& f, double gamma,
                                               ExecPolicy policy = ExecPolicy::parallel);

/// Same, with c(f) supplied (used to check invariance under scaling of c).
NormalizationConstants normalization_constants_from(const RadialField& f, const RadialField& cf);

struct SigmaRow {
  double gamma = 0.0;
  double sigma = 0.0;
  double k_gamma = 0.0;
  bool feasible = false;  // 7 < k_gamma < 2 sigma - 3
};

std::vector<SigmaRow> sigma_table(const GridPtr& grid, std::span<const double> gammas);

}  // namespace landau
