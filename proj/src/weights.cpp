#include "landau/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

CertificateCheck make_check(std::string name) {
  CertificateCheck c;
  c.name = std::move(name);
  c.passed = true;
  c.worst_margin = std::numeric_limits<double>::infinity();
  return c;
}

// Record margin = bound - value (scaled); negative margins fail.
void observe(CertificateCheck& c, double margin, std::size_t node) {
  if (margin < c.worst_margin) {
    c.worst_margin = margin;
    c.worst_node = node;
  }
  if (margin < 0.0) c.passed = false;
}

}  // namespace

double EtaProfile::big_f(double r) const {
  if (r <= r1) return 0.0;
  const double a = std::sqrt(2.5);
  const double half = 0.5 * r * r;
  if (half > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(half) * std::sqrt(kPi / 10.0) * (std::erfc(a * r1) - std::erfc(a * r));
}

double EtaProfile::eta0(double r) const {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  return 1.0 - big_f(r);
}

double EtaProfile::operator()(double r) const {
  if (r <= r1) return 1.0;
  if (r < r1_star) return 1.0 - big_f(r);
  return 0.5 * (k - 2.0) / (r * r);
}

double EtaProfile::derivative(double r) const {
  if (r <= r1) return 0.0;
  if (r < r1_star) return -(r * big_f(r) + std::exp(-2.0 * r * r));
  return -(k - 2.0) / (r * r * r);
}

EtaProfile build_eta_profile(int r1, double k) {
  if (r1 < 4) throw ConfigurationError("R1 must be an integer >= 4, got " + std::to_string(r1));
  if (!(k > 2.0 && k < 20.0)) {
    throw ConfigurationError("weight exponent k must lie in (2, 20), got " + std::to_string(k));
  }
  if (!(0.5 * (k - 2.0) / (r1 * r1) < 0.5)) {
    throw ConfigurationError("(k-2)/(2 R1^2) must be below 1/2");
  }
  EtaProfile p;
  p.r1 = r1;
  p.k = k;

  // F is increasing from F(R1) = 0: bracket F = 1 by doubling the step, then bisect.
  double lo = r1;
  double step = 1.0;
  double hi = lo + step;
  while (p.big_f(hi) < 1.0) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (p.big_f(mid) < 1.0 ? lo : hi) = mid;
  }
  p.r2 = 0.5 * (lo + hi);

  const double c = 0.5 * (k - 2.0);
  auto gap = [&](double r) { return 1.0 - p.big_f(r) - c / (r * r); };
  constexpr int kScan = 20000;
  double a = r1;
  double b = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double r = r1 + (p.r2 - r1) * i / kScan;
    if (gap(r) <= 0.0) {
      b = r;
      break;
    }
    a = r;
  }
  if (b < 0.0) {
    std::ostringstream os;
    os << "no root of eta0 = (k-2)/(2r^2) on [R1, R2] = [" << r1 << ", " << p.r2
       << "]; eta0 - (k-2)/(2r^2) at R1, midpoint, R2: " << gap(r1) << ", "
       << gap(0.5 * (r1 + p.r2)) << ", " << gap(p.r2);
    throw ConstructionError(os.str());
  }
  while (b - a > 1e-14 * b) {
    const double mid = 0.5 * (a + b);
    (gap(mid) > 0.0 ? a : b) = mid;
  }
  p.r1_star = 0.5 * (a + b);
  return p;
}

EtaResult build_eta(const GridPtr& grid, int r1, double k) {
  const auto p = build_eta_profile(r1, k);
  auto eta = RadialField::sample(grid, [&](double r) { return p(r); });
  const double jump = std::abs(p.eta0(p.r1_star) - 0.5 * (k - 2.0) / (p.r1_star * p.r1_star));
  if (jump > 1e-8) {
    throw ConstructionError("eta is discontinuous at R1* (jump " + std::to_string(jump) + ")");
  }
  return {std::move(eta), p.r2, p.r1_star};
}

RhoResult build_rho(const GridPtr& grid, const EtaProfile& eta) {
  const auto& g = *grid;
  const std::size_t n = g.size();
  std::vector<double> lq(n), lr(n);
  const double r1 = eta.r1;
  auto rhs = [&](double r, double u, double v, double& du, double& dv) {
    du = 2.0 * r * eta(r);
    dv = r * std::exp(u - v);
  };
  auto advance = [&](double r0, double r_end, double& u, double& v) {
    constexpr int kSub = 4;
    const double h = (r_end - r0) / kSub;
    for (int s = 0; s < kSub; ++s) {
      const double r = r0 + s * h;
      double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      rhs(r, u, v, k1u, k1v);
      rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
      rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
      rhs(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (!std::isfinite(u) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "weight ODE integration diverged near r = " << r;
        throw ConstructionError(os.str());
      }
    }
  };
  double u = std::log(2.0) + r1 * r1;
  double v = r1 * r1;
  double r_prev = r1;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i];
    if (r <= r1) {
      lq[i] = std::log(2.0) + r * r;
      lr[i] = r * r;
      continue;
    }
    advance(r_prev, r, u, v);
    r_prev = r;
    lq[i] = u;
    lr[i] = v;
  }
  std::vector<double> q(n), rho(n), lam(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::exp(lq[i]);
    rho[i] = std::exp(lr[i]);
    lam[i] = g[i] <= r1 ? 2.0 * g[i] : g[i] * std::exp(lq[i] - lr[i]);
  }
  return {RadialField(grid, std::move(lq)), RadialField(grid, std::move(lr)),
          RadialField(grid, std::move(q)), RadialField(grid, std::move(rho)),
          RadialField(grid, std::move(lam), Parity::none)};
}

void validate_k2(double k2) {
  if (!(k2 > 3.0 && k2 < 13.0)) {
    std::ostringstream os;
    os << "k2 must lie in (3, 13), got " << k2;
    throw ConfigurationError(os.str());
  }
}

RadialField build_rho2(const GridPtr& grid, double k2) {
  validate_k2(k2);
  return RadialField::sample(grid, [&](double r) {
    return r * r * std::pow(1.0 + r * r, 0.5 * (k2 - 2.0));
  });
}

void WeightParams::validate() const {
  if (!(k1 > 0.0) || !std::isfinite(k1)) {
    throw ConfigurationError("K1 must be positive, got " + std::to_string(k1));
  }
  validate_k2(k2);
  build_eta_profile(r1, k);
}

RadialField assemble_w(const RadialField& rho, double k1, double k2) {
  if (!(k1 > 0.0)) throw ConfigurationError("K1 must be positive, got " + std::to_string(k1));
  validate_k2(k2);
  const auto& g = rho.grid();
  std::vector<double> w(rho.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = g[i];
    w[i] = k1 * rho[i] + std::pow(1.0 + r * r, 0.5 * (k2 - 2.0)) / (4.0 * kPi);
  }
  return RadialField(rho.grid_ptr(), std::move(w));
}

WeightFamily build_weight_family(const GridPtr& grid, const WeightParams& params) {
  params.validate();
  auto eta = build_eta(grid, params.r1, params.k);
  const auto profile = build_eta_profile(params.r1, params.k);
  auto rho = build_rho(grid, profile);
  auto rho2 = build_rho2(grid, params.k2);
  auto w = assemble_w(rho.rho, params.k1, params.k2);
  const double eps2 = 2.0 * (profile.r2 - params.r1) * std::exp(-double(params.r1 * params.r1));
  return WeightFamily{params,       profile,          eps2,
                      eta.eta,      rho.log_q,        rho.log_rho,
                      rho.q,        rho.rho,          rho.lambda,
                      std::move(rho2), std::move(w)};
}

bool WeightCertificate::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CertificateCheck& WeightCertificate::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ConfigurationError("no certificate check named '" + name + "'");
}

WeightCertificate weight_certificate(const WeightFamily& fam) {
  const auto& g = *fam.grid();
  const std::size_t n = g.size();
  const auto& p = fam.profile;
  const double r1 = p.r1;
  const double k = p.k;
  WeightCertificate cert;
  cert.eps2 = fam.eps2;
  cert.r2 = p.r2;
  cert.r1_star = p.r1_star;

  std::vector<double> lrho(n), lq(n);
  for (std::size_t i = 0; i < n; ++i) {
    lrho[i] = std::log(fam.rho[i]);
    lq[i] = std::log(fam.q[i]);
  }

  auto rho_inner = make_check("rho_inner");
  auto eta_range = make_check("eta_range");
  auto eta_inner = make_check("eta_inner");
  auto q_le_2rho = make_check("q_le_2rho");
  auto rho_mu = make_check("rho_mu_le_1");
  auto rho_mu_mono = make_check("rho_mu_nonincreasing");
  auto lower = make_check("rho_lower_bound");
  auto ode = make_check("ode_residual");
  auto eta_ineq = make_check("eta_inequality");
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i];
    const double e = fam.eta[i];
    observe(eta_range, std::min(e, 1.0 - e), i);
    if (r <= r1) {
      const double exact = std::exp(r * r);
      observe(rho_inner, 8.0 * std::numeric_limits<double>::epsilon() -
                             std::abs(fam.rho[i] - exact) / exact, i);
      observe(eta_inner, e == 1.0 ? 0.0 : -std::abs(e - 1.0), i);
    }
    observe(q_le_2rho, std::log(2.0) + 1e-12 - (lq[i] - lrho[i]), i);
    observe(rho_mu, 1e-12 - (lrho[i] - r * r), i);
    if (i > 0) {
      const double prev = lrho[i - 1] - g[i - 1] * g[i - 1];
      observe(rho_mu_mono, 1e-12 * (1.0 + std::abs(prev)) - ((lrho[i] - r * r) - prev), i);
    }
    if (r >= r1) {
      const double bound = r1 * r1 + std::log1p(2.0 * (std::pow(r, k) - std::pow(r1, k)) /
                                                    (k * std::pow(r1, k - 2.0)));
      observe(lower, lrho[i] - bound + 1e-10 * bound, i);
    }
    // r q + q'/2 - q^2 r / rho >= -8 r eps2 1_{r >= R1}, divided by q, with q' = 2 r eta q.
    if (r > 0.0) {
      const double lhs = r * (1.0 + e) - r * std::exp(lq[i] - lrho[i]);
      const double rhs = r >= r1 ? -8.0 * r * fam.eps2 * std::exp(-lq[i]) : 0.0;
      observe(ode, lhs - rhs + 1e-10 * r * (1.0 + e), i);
    }
    const double src = (r >= r1 && r <= p.r2) ? std::exp(-2.0 * r * r) : 0.0;
    const double target = r * (e * e - 1.0) - src;
    const double deta = p.derivative(r);
    observe(eta_ineq, deta - target + 1e-12 * (1.0 + std::abs(target)), i);
  }

  auto eta_cont = make_check("eta_continuity");
  observe(eta_cont,
          1e-8 - std::abs(p.eta0(p.r1_star) - 0.5 * (k - 2.0) / (p.r1_star * p.r1_star)), 0);

  auto r2_bound = make_check("r2_bound");
  observe(r2_bound, std::sqrt(5.0) * (r1 + 1.0) - p.r2, 0);

  // lambda against the numerical derivative of log rho.
  auto lam = make_check("lambda_consistency");
  {
    std::vector<double> d(n);
    first_derivative(g, lrho, Parity::even, d);
    // Stencils straddling R1 or R1* see a derivative jump in eta and are skipped.
    std::size_t skipped = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const auto& s = g.stencil(1, i, true);
      const double lo = g[s.first];
      const double hi = g[s.first + s.w.size() - 1];
      if ((lo < r1 && r1 < hi) || (lo < p.r1_star && p.r1_star < hi)) {
        ++skipped;
        continue;
      }
      observe(lam, 1e-3 * (1.0 + fam.lambda[i]) - std::abs(d[i] - fam.lambda[i]), i);
    }
    lam.detail = std::to_string(skipped) + " nodes next to R1 / R1* skipped";
  }

  auto spread = [&](const std::string& name, double exponent, double tol) {
    auto c = make_check(name);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t first = g.locate(kFarFieldStart * g.r_max());
    for (std::size_t i = first; i < n; ++i) {
      const double v = (name == "far_field_rho" ? lrho[i] : lq[i]) - exponent * std::log(g[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double rel = std::expm1(hi - lo);
    observe(c, tol - rel, first);
    std::ostringstream os;
    os << "relative spread " << rel << " over r >= " << g[first];
    c.detail = os.str();
    return c;
  };
  auto far_rho = spread("far_field_rho", k, 0.05);
  auto far_q = spread("far_field_q", k - 2.0, 0.01);

  auto w_lower = make_check("w_lower");
  const double wmin = std::min(fam.params.k1, 1.0 / (4.0 * kPi));
  for (std::size_t i = 0; i < n; ++i) observe(w_lower, fam.w[i] / wmin - 1.0 + 1e-12, i);

  auto w_far = make_check("w_far_field");
  {
    const double r = g.r_max();
    const double scaled =
        4.0 * kPi * fam.w[n - 1] * std::pow(1.0 + r * r, -0.5 * (fam.params.k2 - 2.0));
    observe(w_far, 0.02 - std::abs(scaled - 1.0), n - 1);
    std::ostringstream os;
    os << "4 pi W <r>^{-(k2-2)} at R_max = " << scaled;
    w_far.detail = os.str();
  }

  cert.checks = {rho_inner, eta_range, eta_inner, eta_cont, q_le_2rho, rho_mu, rho_mu_mono,
                 r2_bound, lower, ode, eta_ineq, lam, far_rho, far_q, w_lower, w_far};
  return cert;
}

}  // namespace landau
