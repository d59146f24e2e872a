#include "landau/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "landau/biharmonic.hpp"
#include "landau/collision.hpp"
#include "landau/errors.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> deriv(const RadialField& f) {
  std::vector<double> d(f.size());
  first_derivative(f.grid(), f.values(), Parity::even, d);
  return d;
}

double quad(const RadialGrid& g, const std::vector<double>& v) { return integrate_values(g, v, 0); }

double bracket(double r) { return std::sqrt(1.0 + r * r); }

void require_family_grid(const RadialField& f, const WeightFamily& fam) {
  require_same_grid(f, fam.eta);
}

using Mat = Eigen::MatrixXd;

bool scaled_positive_definite(const Mat& h) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(h(i, i) > 0.0)) return false;
    d(i) = 1.0 / std::sqrt(h(i, i));
  }
  const Mat s = d.asDiagonal() * h * d.asDiagonal();
  Eigen::LLT<Mat> llt(s);
  return llt.info() == Eigen::Success;
}

Mat to_matrix(const std::vector<double>& v, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Mat m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), k, k);
  return m;
}

double top_eigenvalue(const Mat& a_raw, const Mat& b_raw) {
  const Mat a = 0.5 * (a_raw + a_raw.transpose());
  const Mat b = 0.5 * (b_raw + b_raw.transpose());
  const Eigen::Index n = a.rows();
  double lo = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(b(i, i) > 0.0)) throw NumericalError("denominator Gram matrix has a nonpositive diagonal");
    lo = std::max(lo, a(i, i) / b(i, i));
  }
  if (!scaled_positive_definite(b)) {
    Eigen::VectorXd d = b.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::SelfAdjointEigenSolver<Mat> es(d.asDiagonal() * b * d.asDiagonal(), Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os << "denominator Gram matrix is not positive definite: scaled eigenvalues in ["
       << es.eigenvalues().minCoeff() << ", " << es.eigenvalues().maxCoeff() << "]";
    throw NumericalError(os.str());
  }
  double step = std::max(std::abs(lo), 1e-12);
  double hi = lo + step;
  int guard = 0;
  while (!scaled_positive_definite(hi * b - a)) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
    if (++guard > 200) throw NumericalError("top eigenvalue bracket did not close");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(std::abs(hi), std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (scaled_positive_definite(mid * b - a) ? hi : lo) = mid;
  }
  return hi;
}

double cubic_bspline(double u) {
  const double x = std::abs(u);
  if (x >= 2.0) return 0.0;
  if (x >= 1.0) {
    const double t = 2.0 - x;
    return t * t * t / 6.0;
  }
  return (4.0 - 6.0 * x * x + 3.0 * x * x * x) / 6.0;
}

}  // namespace

FormReport form_jrho(const RadialField& f, const WeightFamily& fam) {
  require_family_grid(f, fam);
  const auto& g = f.grid();
  const auto bg = maxwellian_background(fam.grid());
  const auto fr = deriv(f);
  std::vector<double> full(f.size()), square(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g[i];
    const double coef = -bg->gbar.g_rr[i] * r * r;
    const double rho_r = r * fam.q[i];
    full[i] = coef * (fr[i] + 2.0 * r * f[i]) * (fr[i] * fam.rho[i] + f[i] * rho_r);
    const double s = fr[i] + fam.lambda[i] * f[i];
    square[i] = coef * s * s * fam.rho[i];
  }
  FormReport rep;
  rep.value = quad(g, full);
  rep.damping = quad(g, square);
  rep.loss = rep.value - rep.damping;
  rep.constraint_r2 = integrate_values(g, f.values(), 2);
  rep.constraint_r4 = integrate_values(g, f.values(), 4);
  return rep;
}

FormReport form_jrho_tilde(const RadialField& f, const WeightFamily& fam) {
  require_family_grid(f, fam);
  const auto& g = f.grid();
  const auto bg = maxwellian_background(fam.grid());
  const auto fr = deriv(f);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g[i];
    const double s = fr[i] + fam.lambda[i] * f[i];
    v[i] = -bg->gbar.g_rr[i] * r * r * s * s * fam.rho[i];
  }
  FormReport rep;
  rep.value = quad(g, v);
  rep.damping = rep.value;
  rep.constraint_r2 = integrate_values(g, f.values(), 2);
  rep.constraint_r4 = integrate_values(g, f.values(), 4);
  return rep;
}

double jrho_from_operator(const RadialField& f, const WeightFamily& fam) {
  require_family_grid(f, fam);
  const auto loc = linearized_l1(f).loc;
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = -loc[i] * f[i] * fam.rho[i];
  return integrate_values(f.grid(), v, 2);
}

FormReport form_jrho2(const RadialField& f, const RadialField& rho2) {
  require_same_grid(f, rho2);
  const auto pieces = linearized_l1(f);
  const auto& g = f.grid();
  std::vector<double> loc(f.size()), nloc(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    loc[i] = pieces.loc[i] * f[i] * rho2[i];
    nloc[i] = pieces.nloc[i] * f[i] * rho2[i];
  }
  FormReport rep;
  rep.damping = quad(g, loc);
  rep.loss = quad(g, nloc);
  rep.value = rep.damping + rep.loss;
  rep.constraint_r2 = integrate_values(g, f.values(), 2);
  rep.constraint_r4 = integrate_values(g, f.values(), 4);
  return rep;
}

Jrho2Terms jrho2_terms(const RadialField& f, const RadialField& rho2) {
  const auto& g = f.grid();
  const auto fr = deriv(f);
  std::vector<double> a3(f.size()), a5(f.size()), d3(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double b = bracket(g[i]);
    const double w3 = rho2[i] / (b * b * b);
    a3[i] = w3 * f[i] * f[i];
    a5[i] = a3[i] / (b * b);
    d3[i] = w3 * fr[i] * fr[i];
  }
  return {form_jrho2(f, rho2).value, quad(g, a3), quad(g, a5), quad(g, d3)};
}

double Jrho2Constants::r0_star() const {
  const double t = 2.0 * big_c / (c1 * (k2 - 2.0)) - 1.0;
  return t > 0.0 ? std::sqrt(t) : 0.0;
}

double Jrho2Constants::bound(const Jrho2Terms& t) const {
  return -c1 * (k2 - 2.0) * t.a3 + big_c * t.a5 - c4 * t.d3;
}

Jrho2Constants fit_jrho2_constants(const std::vector<Jrho2Terms>& samples, double k2) {
  if (samples.empty()) throw ConfigurationError("fit_jrho2_constants needs samples");
  validate_k2(k2);
  // Equal damping constants c1 = c4 = c, halved from 1 until C is finite and
  // the far-field radius R0* is below 10; C is the tightest value for that c.
  for (double c = 1.0; c > 1e-6; c *= 0.5) {
    Jrho2Constants k{c, c, 0.0, k2};
    bool ok = true;
    for (const auto& s : samples) {
      if (!(s.a5 > 0.0)) {
        ok = false;
        break;
      }
      k.big_c = std::max(k.big_c, (s.j + c * (k2 - 2.0) * s.a3 + c * s.d3) / s.a5);
    }
    if (ok && k.r0_star() < 10.0) {
      k.big_c *= 1.0 + 1e-9;
      return k;
    }
  }
  throw NumericalError("no positive damping constants fit the J(rho2) samples");
}

EnergyPair energy_functionals(const RadialField& f, const WeightFamily& fam) {
  require_family_grid(f, fam);
  const auto& g = f.grid();
  const auto fr = deriv(f);
  const double k1 = fam.params.k1;
  const double k2 = fam.params.k2;
  std::vector<double> e(f.size()), d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g[i];
    const double f2 = f[i] * f[i];
    e[i] = k1 * 4.0 * kPi * f2 * fam.rho[i] * r * r + f2 * fam.rho2[i];
    d[i] = (f2 + fr[i] * fr[i]) * r * r * std::pow(1.0 + r * r, 0.5 * (k2 - 5.0));
  }
  return {quad(g, e), quad(g, d)};
}

double d2_via_rho2(const RadialField& f, const WeightFamily& fam) {
  require_family_grid(f, fam);
  const auto& g = f.grid();
  const auto fr = deriv(f);
  std::vector<double> d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double b = bracket(g[i]);
    d[i] = (f[i] * f[i] + fr[i] * fr[i]) * fam.rho2[i] / (b * b * b);
  }
  return quad(g, d);
}

CoercivityReport coercivity_form(const RadialField& f, const WeightFamily& fam, double alpha) {
  require_family_grid(f, fam);
  const auto& g = f.grid();
  CoercivityReport rep;
  rep.constraint_r2 = integrate_values(g, f.values(), 2);
  rep.constraint_r4 = integrate_values(g, f.values(), 4);
  std::vector<double> af(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) af[i] = std::abs(f[i]);
  const double s2 = integrate_values(g, af, 2);
  const double s4 = integrate_values(g, af, 4);
  if (std::abs(rep.constraint_r2) > 1e-10 * s2 || std::abs(rep.constraint_r4) > 1e-10 * s4) {
    std::ostringstream os;
    os << "coercivity_form needs int f r^2 = int f r^4 = 0; residuals " << rep.constraint_r2
       << ", " << rep.constraint_r4;
    throw PreconditionError(os.str());
  }
  const auto lf = l_alpha(f, alpha).alpha;
  const auto fr = deriv(f);
  std::vector<double> num(f.size()), ref(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g[i];
    const double b = bracket(r);
    num[i] = lf[i] * f[i] * fam.w[i];
    ref[i] = (f[i] * f[i] + fr[i] * fr[i]) * fam.w[i] / (b * b * b);
  }
  rep.form = 4.0 * kPi * integrate_values(g, num, 2);
  rep.reference = 4.0 * kPi * integrate_values(g, ref, 2);
  rep.ratio = rep.reference > 0.0 ? rep.form / rep.reference : 0.0;
  return rep;
}

std::string_view to_string(Denominator d) {
  switch (d) {
    case Denominator::d2:
      return "D2";
    case Denominator::e2:
      return "E2";
    case Denominator::theorem:
      return "theorem";
  }
  return "?";
}

Denominator parse_denominator(std::string_view text) {
  if (text == "D2" || text == "d2") return Denominator::d2;
  if (text == "E2" || text == "e2") return Denominator::e2;
  if (text == "theorem") return Denominator::theorem;
  throw ConfigurationError("unknown denominator '" + std::string(text) + "'");
}

std::vector<RadialField> ritz_basis(const GridPtr& grid, const BasisSpec& spec) {
  if (spec.n_modes < 3) throw ConfigurationError("Ritz basis needs at least 3 modes");
  if (spec.n_modes > grid->intervals() / 2) {
    throw ConfigurationError("n_modes must not exceed N/2");
  }
  const double spacing = grid->r_max() / static_cast<double>(spec.n_modes + 1);
  std::vector<RadialField> out;
  out.reserve(spec.n_modes);
  for (std::size_t j = 0; j < spec.n_modes; ++j) {
    const double c = static_cast<double>(j);
    out.push_back(RadialField::sample(grid, [&](double r) {
      const double u = r / spacing;
      return j == 0 ? cubic_bspline(u) : cubic_bspline(u - c) + cubic_bspline(u + c);
    }));
  }
  return out;
}

RadialField project_constraints(const RadialField& b) {
  const auto bg = maxwellian_background(b.grid_ptr());
  const auto& g = b.grid();
  const double m2 = integrate_values(g, bg->mu.values(), 2);
  const double m4 = integrate_values(g, bg->mu.values(), 4);
  const double m6 = integrate_values(g, bg->mu.values(), 6);
  const double b2 = integrate_values(g, b.values(), 2);
  const double b4 = integrate_values(g, b.values(), 4);
  // [m2 m4; m4 m6] [a; c] = [b2; b4]
  const double det = m2 * m6 - m4 * m4;
  const double a = (b2 * m6 - b4 * m4) / det;
  const double c = (m2 * b4 - m4 * b2) / det;
  std::vector<double> v(b.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = g[i];
    v[i] = b[i] - (a + c * r * r) * bg->mu[i];
  }
  return RadialField(b.grid_ptr(), std::move(v));
}

double top_generalized_eigenvalue(const std::vector<double>& a, const std::vector<double>& b,
                                  std::size_t n) {
  return top_eigenvalue(to_matrix(a, n), to_matrix(b, n));
}

RitzMatrices assemble_ritz(const WeightFamily& fam, const GapOptions& opt) {
  validate_alpha(opt.alpha);
  const auto& grid = fam.grid();
  const auto& g = *grid;
  const auto raw = ritz_basis(grid, opt.basis);
  const std::size_t n = raw.size();
  const std::size_t m = g.size();
  (void)maxwellian_background(grid);

  std::vector<std::vector<double>> basis(n), lb(n), db(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  auto build = [&](std::size_t i) {
    const auto f = project_constraints(raw[i]);
    lb[i] = l_alpha(f, opt.alpha).alpha.data();
    db[i] = deriv(f);
    basis[i] = f.data();
  };
  if (opt.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) build(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) build(i);
  }

  const auto w = quadrature_weights(g);
  const double k1 = fam.params.k1;
  const double k2 = fam.params.k2;
  std::vector<double> num_w(m), mass_w(m), grad_w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double r = g[k];
    const double b = bracket(r);
    num_w[k] = 4.0 * kPi * w[k] * fam.w[k] * r * r;
    switch (opt.denominator) {
      case Denominator::d2:
        mass_w[k] = w[k] * r * r * std::pow(1.0 + r * r, 0.5 * (k2 - 5.0));
        grad_w[k] = mass_w[k];
        break;
      case Denominator::e2:
        mass_w[k] = w[k] * (k1 * 4.0 * kPi * fam.rho[k] * r * r + fam.rho2[k]);
        grad_w[k] = 0.0;
        break;
      case Denominator::theorem:
        mass_w[k] = 4.0 * kPi * w[k] * fam.w[k] * r * r / (b * b * b);
        grad_w[k] = mass_w[k];
        break;
    }
  }

  RitzMatrices out;
  out.n = n;
  out.a.assign(n * n, 0.0);
  out.b.assign(n * n, 0.0);
  auto row = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      double a = 0.0;
      double bb = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        a += num_w[k] * lb[i][k] * basis[j][k];
        bb += mass_w[k] * basis[i][k] * basis[j][k] + grad_w[k] * db[i][k] * db[j][k];
      }
      out.a[i * n + j] = a;
      out.b[i * n + j] = bb;
    }
  };
  if (opt.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) row(i);
  }
  return out;
}

GapEstimate constrained_gap(const WeightFamily& fam, const GapOptions& opt) {
  const auto mats = assemble_ritz(fam, opt);
  const Mat a = to_matrix(mats.a, mats.n);
  const Mat b = to_matrix(mats.b, mats.n);
  GapEstimate est;
  est.alpha = opt.alpha;
  est.denominator = opt.denominator;
  est.n_modes = mats.n;
  est.grid_intervals = fam.grid()->intervals();
  est.r_max = fam.grid()->r_max();
  est.best_single = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    est.best_single = std::max(est.best_single, a(i, i) / b(i, i));
    for (Eigen::Index j = 0; j < i; ++j) {
      const double scale = std::sqrt(std::abs(a(i, i) * a(j, j)));
      if (scale > 0.0) est.asymmetry = std::max(est.asymmetry, std::abs(a(i, j) - a(j, i)) / scale);
    }
  }
  est.top_rayleigh = top_eigenvalue(a, b);
  return est;
}

namespace {

// h - a mu^{1/2} - c r^2 mu^{1/2}, orthogonal to both in L2(r^2).
RadialField project_local_kernel(const RadialField& h) {
  const auto& g = h.grid();
  const std::size_t m = g.size();
  std::vector<double> e0(m), e1(m);
  for (std::size_t k = 0; k < m; ++k) {
    e0[k] = std::exp(-0.5 * g[k] * g[k]);
    e1[k] = g[k] * g[k] * e0[k];
  }
  auto dot = [&](const std::vector<double>& u, std::span<const double> v) {
    std::vector<double> t(m);
    for (std::size_t k = 0; k < m; ++k) t[k] = u[k] * v[k];
    return integrate_values(g, t, 2);
  };
  const double g00 = dot(e0, e0), g01 = dot(e0, e1), g11 = dot(e1, e1);
  const double b0 = dot(e0, h.values()), b1 = dot(e1, h.values());
  const double det = g00 * g11 - g01 * g01;
  const double a = (b0 * g11 - b1 * g01) / det;
  const double c = (g00 * b1 - g01 * b0) / det;
  std::vector<double> v(m);
  for (std::size_t k = 0; k < m; ++k) v[k] = h[k] - a * e0[k] - c * e1[k];
  return RadialField(h.grid_ptr(), std::move(v));
}

struct SurrogateTerms {
  std::vector<double> grad;   // h_r + r h = p_r mu^{1/2}
  std::vector<double> h;
  std::vector<double> hr;
  std::vector<double> flux;   // (2 r g_rr[f] + (lap g[f])_r) mu^{1/2}
};

SurrogateTerms surrogate_terms(const RadialField& h) {
  const auto& g = h.grid();
  const std::size_t m = g.size();
  SurrogateTerms t;
  t.h = h.data();
  t.hr = deriv(h);
  t.grad.resize(m);
  std::vector<double> f(m);
  for (std::size_t k = 0; k < m; ++k) {
    t.grad[k] = t.hr[k] + g[k] * h[k];
    f[k] = h[k] * std::exp(-0.5 * g[k] * g[k]);
  }
  const RadialField ff(h.grid_ptr(), f);
  const auto gd = solve_biharmonic(ff);
  const auto a2 = cumulative_integral(g, f, 2);
  t.flux.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double r = g[k];
    const double lap_r = r > 0.0 ? a2[k] / (r * r) : 0.0;
    t.flux[k] = (2.0 * r * gd.g_rr[k] + lap_r) * std::exp(-0.5 * r * r);
  }
  return t;
}

// Dirichlet form and sigma norm for a pair of test functions.
std::pair<double, double> surrogate_pair(const RadialGrid& g, const std::vector<double>& w,
                                         const std::vector<double>& neg_grr,
                                         const SurrogateTerms& u, const SurrogateTerms& v) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double r2 = g[k] * g[k];
    num += w[k] * r2 * (neg_grr[k] * u.grad[k] * v.grad[k] + u.flux[k] * v.grad[k]);
    den += w[k] * r2 * neg_grr[k] * (u.hr[k] * v.hr[k] + r2 * u.h[k] * v.h[k]);
  }
  return {4.0 * kPi * num, 4.0 * kPi * den};
}

std::vector<double> negated_grr(const GridPtr& grid) {
  const auto bg = maxwellian_background(grid);
  std::vector<double> out(grid->size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -bg->gbar.g_rr[k];
  return out;
}

}  // namespace

double surrogate_quotient(const RadialField& h) {
  if (h.parity() != Parity::even) throw PreconditionError("surrogate_quotient requires an even-parity field");
  const auto p = project_local_kernel(h);
  const auto t = surrogate_terms(p);
  const auto t0 = surrogate_terms(h);
  const auto w = quadrature_weights(p.grid());
  const auto neg = negated_grr(p.grid_ptr());
  const auto [num, den] = surrogate_pair(p.grid(), w, neg, t, t);
  const double den0 = surrogate_pair(p.grid(), w, neg, t0, t0).second;
  if (!(den > 1e-20 * den0)) throw DegenerateFieldError("surrogate quotient of a field in the local kernel");
  return num / den;
}

SurrogateGap local_gap_surrogate(int n, std::size_t intervals, std::size_t modes) {
  if (n < 2) {
    throw NumericalError("localized gap on [0, " + std::to_string(n) +
                         "] is too coarse: the ball must have radius >= 2");
  }
  if (modes < 6) throw ConfigurationError("local gap surrogate needs at least 6 modes");
  const auto grid = build_grid(static_cast<double>(n), intervals, GridScheme::graded);
  const auto& g = *grid;
  const double spacing = static_cast<double>(n) / static_cast<double>(modes - 2);
  const auto w = quadrature_weights(g);
  const auto neg_grr = negated_grr(grid);

  std::vector<SurrogateTerms> terms(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    const double c = static_cast<double>(j);
    const auto h = RadialField::sample(grid, [&](double r) {
      const double u = r / spacing;
      return j == 0 ? cubic_bspline(u) : cubic_bspline(u - c) + cubic_bspline(u + c);
    });
    terms[j] = surrogate_terms(project_local_kernel(h));
  }
  const auto mm = static_cast<Eigen::Index>(modes);
  Mat num(mm, mm), den(mm, mm);
  for (std::size_t i = 0; i < modes; ++i) {
    for (std::size_t j = 0; j < modes; ++j) {
      const auto [a, b] = surrogate_pair(g, w, neg_grr, terms[i], terms[j]);
      num(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
      den(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b;
    }
  }
  // The projection leaves two dependent directions; remove them through the
  // eigenbasis of the scaled Gram matrix.
  Eigen::VectorXd d = den.diagonal().cwiseSqrt().cwiseInverse();
  const Mat ds = d.asDiagonal() * den * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ds + ds.transpose()));
  const double top = es.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < mm; ++i) {
    if (es.eigenvalues()(i) > 1e-10 * top) keep.push_back(i);
  }
  Mat z(mm, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    z.col(static_cast<Eigen::Index>(c)) = d.asDiagonal() * es.eigenvectors().col(keep[c]);
  }
  const Mat nz = z.transpose() * num * z;
  const Mat dz = z.transpose() * den * z;
  SurrogateGap out;
  out.n = n;
  out.delta = -top_eigenvalue(-nz, dz);
  out.modes = keep.size();
  return out;
}

}  // namespace landau
