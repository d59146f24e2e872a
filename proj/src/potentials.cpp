#include "landau/potentials.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

void PotentialSpec::validate() const {
  if (!(gamma >= -3.0 && gamma < -2.0)) {
    std::ostringstream os;
    os << "gamma must lie in [-3, -2), got " << gamma;
    throw ConfigurationError(os.str());
  }
}

namespace {

constexpr double kPi = std::numbers::pi;

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563,
                                        0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461,
                                        0.6521451548625461, 0.3478548451374538};

// (r + s)^p - |r - s|^p without cancellation when r << s or s << r.
double kernel_difference(double r, double s, double p) {
  if (s > r) {
    const double x = r / s;
    return std::pow(s, p) * (std::expm1(p * std::log1p(x)) - std::expm1(p * std::log1p(-x)));
  }
  const double y = s / r;
  return std::pow(r, p) * (std::expm1(p * std::log1p(y)) - std::expm1(p * std::log1p(-y)));
}

// Monomial coefficients in t = s - a of the cubic through the cell's stencil.
std::array<double, 4> cell_cubic(const RadialGrid& grid, std::size_t cell,
                                 std::span<const double> h) {
  const auto& rule = grid.cell_rules()[cell];
  const double a = grid[cell];
  Eigen::Matrix4d v;
  Eigen::Vector4d rhs;
  for (int k = 0; k < 4; ++k) {
    const double t = grid[rule.first + static_cast<std::size_t>(k)] - a;
    double pw = 1.0;
    for (int m = 0; m < 4; ++m) {
      v(k, m) = pw;
      pw *= t;
    }
    rhs(k) = h[rule.first + static_cast<std::size_t>(k)];
  }
  const Eigen::Vector4d c = v.partialPivLu().solve(rhs);
  return {c(0), c(1), c(2), c(3)};
}

double eval_cubic(const std::array<double, 4>& c, double t) {
  return ((c[3] * t + c[2]) * t + c[1]) * t + c[0];
}

// int_0^H t^m (H - t)^p dt = H^{m+p+1} B(m+1, p+1).
double beta_moment(int m, double p, double len) {
  const double beta = std::exp(std::lgamma(m + 1.0) + std::lgamma(p + 1.0) - std::lgamma(m + p + 2.0));
  return std::pow(len, m + p + 1.0) * beta;
}

double tip_moment(int m, double p, double len) { return std::pow(len, m + p + 1.0) / (m + p + 1.0); }

// int_a^b s^p (s - a)^m ds by binomial expansion; used where b / a is large
// enough that s^p is poorly resolved by Gauss-Legendre.
double shifted_moment(int m, double p, double a, double b) {
  static constexpr int kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  double out = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double e = p + k + 1.0;
    out += kBinom[m][k] * std::pow(-a, m - k) * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  return out;
}

// Contribution of one cell to the bracket integral for target r > 0.
double cell_contribution(const RadialGrid& grid, std::size_t j, double r,
                         const std::array<double, 4>& c, double p) {
  const double a = grid[j];
  const double b = grid[j + 1];
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const bool touches = (a == r) || (b == r);
  double acc = 0.0;
  if (!touches) {
    for (std::size_t g = 0; g < 4; ++g) {
      const double s = mid + half * kGaussX[g];
      acc += kGaussW[g] * eval_cubic(c, s - a) * kernel_difference(r, s, p);
    }
    return half * acc;
  }
  for (std::size_t g = 0; g < 4; ++g) {
    const double s = mid + half * kGaussX[g];
    acc += kGaussW[g] * eval_cubic(c, s - a) * std::pow(r + s, p);
  }
  acc *= half;
  const double len = b - a;
  double sing = 0.0;
  for (int m = 0; m < 4; ++m) {
    sing += c[static_cast<std::size_t>(m)] * (a == r ? tip_moment(m, p, len) : beta_moment(m, p, len));
  }
  return acc - sing;
}

double origin_value(const RadialGrid& grid, std::span<const double> f, double p,
                    const std::vector<std::array<double, 4>>* fcoef) {
  double total = 0.0;
  for (std::size_t j = 0; j < grid.intervals(); ++j) {
    const auto c = fcoef ? (*fcoef)[j] : cell_cubic(grid, j, f);
    const double a = grid[j];
    const double b = grid[j + 1];
    if (j == 0) {
      for (int m = 0; m < 4; ++m) total += c[static_cast<std::size_t>(m)] * tip_moment(m, p, b - a);
      continue;
    }
    if (b > 1.2 * a) {
      for (int m = 0; m < 4; ++m) total += c[static_cast<std::size_t>(m)] * shifted_moment(m, p, a, b);
      continue;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t g = 0; g < 4; ++g) {
      const double s = mid + half * kGaussX[g];
      acc += kGaussW[g] * eval_cubic(c, s - a) * std::pow(s, p);
    }
    total += half * acc;
  }
  return 4.0 * kPi * total;
}

}  // namespace

std::vector<double> soft_convolution(const RadialGrid& grid, std::span<const double> f,
                                     double gamma, ExecPolicy policy) {
  if (!(gamma > -3.0 && gamma < -2.0)) {
    throw ConfigurationError("soft_convolution needs gamma in (-3, -2)");
  }
  const double p = gamma + 2.0;
  const std::size_t n = grid.size();
  const std::size_t cells = grid.intervals();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = grid[i] * f[i];
  std::vector<double> out(n, 0.0);

  if (policy == ExecPolicy::serial) {
    // Reference path: interpolation coefficients rebuilt for every (target, cell) pair.
    out[0] = origin_value(grid, f, p, nullptr);
    for (std::size_t i = 1; i < n; ++i) {
      const double r = grid[i];
      double sum = 0.0;
      for (std::size_t j = 0; j < cells; ++j) {
        sum += cell_contribution(grid, j, r, cell_cubic(grid, j, h), p);
      }
      out[i] = 2.0 * kPi / (r * p) * sum;
    }
    return out;
  }

  std::vector<std::array<double, 4>> hcoef(cells), fcoef(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    hcoef[j] = cell_cubic(grid, j, h);
    fcoef[j] = cell_cubic(grid, j, f);
  }
  out[0] = origin_value(grid, f, p, &fcoef);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 1; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double r = grid[i];
    double sum = 0.0;
    for (std::size_t j = 0; j < cells; ++j) sum += cell_contribution(grid, j, r, hcoef[j], p);
    out[i] = 2.0 * kPi / (r * p) * sum;
  }
  return out;
}

RadialField c_of_f(const RadialField& f, const PotentialSpec& spec, ExecPolicy policy) {
  spec.validate();
  if (spec.coulomb()) return f;
  return RadialField(f.grid_ptr(), soft_convolution(f.grid(), f.values(), spec.gamma, policy));
}

RadialField maxwellian_monotonicity(const GridPtr& grid, double gamma) {
  if (gamma == -3.0) {
    throw ConfigurationError(
        "maxwellian_monotonicity: gamma = -3 is the identity branch c(mu) = mu, whose "
        "r d/dr mu = -2 r^2 mu is trivially non-positive");
  }
  PotentialSpec{gamma}.validate();
  const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  const auto cmu = c_of_f(mu, PotentialSpec{gamma});
  const auto d = differentiate(cmu, 1);
  std::vector<double> out(grid->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*grid)[i] * d[i];
  return RadialField(grid, std::move(out), Parity::none);
}

NormalizationConstants normalization_constants_from(const RadialField& f, const RadialField& cf) {
  require_same_grid(f, cf);
  const auto& grid = f.grid();
  const double p0 = integrate_values(grid, f.values(), 2);
  const double p2 = integrate_values(grid, f.values(), 4);
  std::vector<double> abs_f(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) abs_f[i] = std::abs(f[i]);
  const double s0 = integrate_values(grid, abs_f, 2);
  const double s2 = integrate_values(grid, abs_f, 4);
  if (!(std::abs(p0) > 1e-14 * s0) || !(std::abs(p2) > 1e-14 * s2)) {
    std::ostringstream os;
    os << "normalization constants undefined: int f r^2 dr = " << p0 << ", int f r^4 dr = " << p2;
    throw DegenerateFieldError(os.str());
  }
  const auto prod = cf * f;
  const double q0 = integrate_values(grid, prod.values(), 2);
  const double q2 = integrate_values(grid, prod.values(), 4);
  NormalizationConstants out;
  out.ratio0 = q0 / p0;
  out.ratio2 = q2 / p2;
  out.c1 = 0.5 * (-5.0 * out.ratio0 + 3.0 * out.ratio2);
  out.c2 = 0.5 * (out.ratio0 - out.ratio2);
  out.sigma = std::abs(out.c1 / out.c2);
  out.k_gamma = 2.0 + out.sigma;
  return out;
}

NormalizationConstants normalization_constants(const RadialField& f, double gamma,
                                               ExecPolicy policy) {
  return normalization_constants_from(f, c_of_f(f, PotentialSpec{gamma}, policy));
}

std::vector<SigmaRow> sigma_table(const GridPtr& grid, std::span<const double> gammas) {
  std::vector<SigmaRow> rows;
  rows.reserve(gammas.size());
  const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  for (double g : gammas) {
    const auto nc = normalization_constants(mu, g);
    SigmaRow row{g, nc.sigma, nc.k_gamma, false};
    row.feasible = 7.0 < row.k_gamma && row.k_gamma < 2.0 * row.sigma - 3.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace landau
