#pragma once

#include <string>
#include <vector>

#include "landau/radial.hpp"

namespace landau {

/// The cutoff profile eta built from
///   F(r) = e^{r^2/2} int_{R1}^r e^{-5 s^2/2} ds,   F(R2) = 1,
///   eta0 = 1 on [0, R1],  1 - F on [R1, R2],
///   eta  = eta0 up to R1*, (k-2)/(2 r^2) beyond,
/// with R1* the smallest root of eta0(r) = (k-2)/(2 r^2).
struct EtaProfile {
  int r1 = 4;
  double k = 2.5;
  double r2 = 0.0;
  double r1_star = 0.0;

  double big_f(double r) const;
  double eta0(double r) const;
  double operator()(double r) const;
  double derivative(double r) const;
};

/// Throws ConfigurationError for R1 < 4, k outside (2, 20), or
/// (k-2)/(2 R1^2) >= 1/2; ConstructionError if no R1* is found.
EtaProfile build_eta_profile(int r1, double k);

struct EtaResult {
  RadialField eta;
  double r2;
  double r1_star;
};

EtaResult build_eta(const GridPtr& grid, int r1, double k);

/// q = rho_r / r and rho solve q' = 2 r eta q, rho' = r q outward from
/// q(R1) = 2 e^{R1^2}, rho(R1) = e^{R1^2}; inside R1 they are closed form.
/// The integration runs on log q and log rho (RK4, four substeps per cell).
struct RhoResult {
  RadialField log_q;
  RadialField log_rho;
  RadialField q;
  RadialField rho;
  RadialField lambda;  // q r / rho
};

RhoResult build_rho(const GridPtr& grid, const EtaProfile& eta);

/// rho2 = r^2 <r>^{k2-2}, k2 in (3, 13).
RadialField build_rho2(const GridPtr& grid, double k2);
void validate_k2(double k2);

struct WeightParams {
  int r1 = 4;
  double k = 2.5;
  double k2 = 12.5;
  double k1 = 1.0;
  void validate() const;
};

struct WeightFamily {
  WeightParams params;
  EtaProfile profile;
  double eps2 = 0.0;  // 2 (R2 - R1) e^{-R1^2}
  RadialField eta;
  RadialField log_q;
  RadialField log_rho;
  RadialField q;
  RadialField rho;
  RadialField lambda;
  RadialField rho2;
  RadialField w;

  const GridPtr& grid() const { return eta.grid_ptr(); }
};

WeightFamily build_weight_family(const GridPtr& grid, const WeightParams& params);

/// W = K1 rho + rho2 / (4 pi r^2), with W(0) = K1 + 1/(4 pi).
RadialField assemble_w(const RadialField& rho, double k1, double k2);

struct CertificateCheck {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;  // most adverse value of (bound - quantity), scaled
  std::size_t worst_node = 0;
  std::string detail;
};

struct WeightCertificate {
  std::vector<CertificateCheck> checks;
  double eps2 = 0.0;
  double r2 = 0.0;
  double r1_star = 0.0;
  bool all_passed() const;
  const CertificateCheck& find(const std::string& name) const;
};

/// Fraction of [0, R_max] treated as the far field for the rho r^{-k} and
/// q r^{2-k} constancy checks.
inline constexpr double kFarFieldStart = 0.9;

WeightCertificate weight_certificate(const WeightFamily& family);

}  // namespace landau
