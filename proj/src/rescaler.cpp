#include "landau/rescaler.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "landau/biharmonic.hpp"
#include "landau/collision.hpp"
#include "landau/errors.hpp"
#include "landau/potentials.hpp"
#include "landau/spectral.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

using SpMat = Eigen::SparseMatrix<double>;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Explicit part: alpha f^2 + c_omega f.
std::vector<double> explicit_part(const RadialField& f, double alpha, double c_omega) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * f[i] * f[i] + c_omega * f[i];
  return out;
}

// Rows of J f = -g_rr f_rr - 2 (g_r / r)(f_r / r) - c_l r f_r, with
// f_r / r -> f_rr at the origin. Row N is left empty for the boundary.
std::vector<Eigen::Triplet<double>> local_operator(const RadialGrid& g,
                                                   const BiharmonicDerivatives& gd, double c_l,
                                                   double scale) {
  std::vector<Eigen::Triplet<double>> t;
  const std::size_t n = g.size();
  t.reserve(12 * n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& s2 = g.stencil(2, i, true);
    const double c2 = i == 0 ? -(gd.g_rr[0] + 2.0 * gd.g_r_over_r[0]) : -gd.g_rr[i];
    for (std::size_t m = 0; m < s2.w.size(); ++m) {
      if (s2.w[m] != 0.0) t.emplace_back(i, s2.first + m, scale * c2 * s2.w[m]);
    }
    if (i == 0) continue;
    const auto& s1 = g.stencil(1, i, true);
    const double c1 = -2.0 * gd.g_r_over_r[i] / g[i] - c_l * g[i];
    for (std::size_t m = 0; m < s1.w.size(); ++m) {
      if (s1.w[m] != 0.0) t.emplace_back(i, s1.first + m, scale * c1 * s1.w[m]);
    }
  }
  return t;
}

double boundary_decay(const RadialGrid& g, double c_l, double c_omega) {
  if (c_l == 0.0) return 2.0 * g.r_max() * g.r_max();
  return std::abs(c_omega / c_l);
}

// Solve (I - theta dt J) u = rhs on rows 0..N-1 with the Robin row
// u_r(R) + lambda u(R) / R = 0 in place of row N.
std::vector<double> implicit_solve(const RadialGrid& g, const BiharmonicDerivatives& gd,
                                   double c_l, double theta_dt, double lambda,
                                   std::vector<double> rhs) {
  const std::size_t n = g.size();
  auto trip = local_operator(g, gd, c_l, -theta_dt);
  for (std::size_t i = 0; i + 1 < n; ++i) trip.emplace_back(i, i, 1.0);
  const auto& s1 = g.stencil(1, n - 1, true);
  for (std::size_t m = 0; m < s1.w.size(); ++m) {
    trip.emplace_back(n - 1, s1.first + m, s1.w[m]);
  }
  trip.emplace_back(n - 1, n - 1, lambda / g.r_max());
  rhs[n - 1] = 0.0;
  SpMat a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw StepError("implicit system is singular");
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw StepError("implicit solve failed");
  return {x.data(), x.data() + x.size()};
}

std::vector<double> apply_local(const RadialField& f, const BiharmonicDerivatives& gd,
                                double c_l) {
  const auto& g = f.grid();
  std::vector<double> d1(f.size()), d2(f.size()), out(f.size());
  first_derivative(g, f.values(), Parity::even, d1);
  second_derivative(g, f.values(), Parity::even, d2);
  out[0] = -(gd.g_rr[0] + 2.0 * gd.g_r_over_r[0]) * d2[0];
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = -gd.g_rr[i] * d2[i] - 2.0 * gd.g_r_over_r[i] * d1[i] / g[i] - c_l * g[i] * d1[i];
  }
  return out;
}

RadialField imex_update(const RadialField& f, double alpha, double dt, const ScalingRates& rates) {
  const auto& g = f.grid();
  const auto gd = solve_biharmonic(f);
  const auto ex = explicit_part(f, alpha, rates.c_omega);
  std::vector<double> rhs(f.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = f[i] + dt * ex[i];
  auto next = implicit_solve(g, gd, rates.c_l, dt, boundary_decay(g, rates.c_l, rates.c_omega),
                             rhs);
  if (!all_finite(next)) throw StepError("non-finite values after the implicit solve");
  return RadialField(f.grid_ptr(), std::move(next));
}

RadialField strang_update(const RadialField& f, double alpha, double dt, const ScalingRates& rates) {
  const auto& g = f.grid();
  // Exact flow of u' = alpha u^2 + c_omega u over dt / 2.
  const double h = 0.5 * dt, c = rates.c_omega;
  const double growth = c != 0.0 ? std::expm1(c * h) / c : h;
  auto half = [&](const RadialField& u) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double den = 1.0 - alpha * u[i] * growth;
      if (!(den > 0.0)) throw StepError("explicit half step blows up");
      v[i] = std::exp(c * h) * u[i] / den;
    }
    return RadialField(u.grid_ptr(), std::move(v));
  };
  const auto a = half(f);
  const double lambda = boundary_decay(g, rates.c_l, rates.c_omega);
  auto crank_nicolson = [&](const BiharmonicDerivatives& gd) {
    const auto ja = apply_local(a, gd, rates.c_l);
    std::vector<double> rhs(a.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = a[i] + 0.5 * dt * ja[i];
    auto u = implicit_solve(g, gd, rates.c_l, 0.5 * dt, lambda, rhs);
    if (!all_finite(u)) throw StepError("non-finite values after the implicit solve");
    return RadialField(f.grid_ptr(), std::move(u));
  };
  // Predictor with g[a], corrector with g at the midpoint of the stage.
  const auto pred = crank_nicolson(solve_biharmonic(a));
  return half(crank_nicolson(solve_biharmonic(0.5 * (a + pred))));
}

}  // namespace

ScalingRates compute_scaling(const RadialField& f, double alpha) {
  validate_alpha(alpha);
  if (alpha == 1.0) return {};
  const auto nc = normalization_constants(f, -3.0);
  return {nc.c2 * (alpha - 1.0), nc.c1 * (alpha - 1.0)};
}

RescaleState initial_state(const RadialField& f0, double alpha) {
  RescaleState s{0.0, f0, 0.0, 0.0, 0.0, 0.0, 0.0, integrate(f0, 2), integrate(f0, 4)};
  const auto rates = compute_scaling(f0, alpha);
  s.c_l = rates.c_l;
  s.c_omega = rates.c_omega;
  return s;
}

std::string_view to_string(TimeScheme scheme) {
  return scheme == TimeScheme::imex ? "imex" : "strang";
}

TimeScheme parse_time_scheme(std::string_view text) {
  if (text == "imex") return TimeScheme::imex;
  if (text == "strang") return TimeScheme::strang;
  throw ConfigurationError("unknown time scheme '" + std::string(text) + "' (imex, strang)");
}

namespace {

Reprojection add_moment_correction(const RadialField& f, double m0, double m2) {
  const auto& g = f.grid();
  const auto bg = maxwellian_background(f.grid_ptr());
  const std::size_t n = f.size();
  std::vector<double> e0 = bg->mu.data(), e1(n);
  for (std::size_t i = 0; i < n; ++i) e1[i] = (g[i] * g[i] - 1.5) * e0[i];
  const double d0 = m0 - integrate(f, 2);
  const double d2 = m2 - integrate(f, 4);
  const double a00 = integrate_values(g, e0, 2), a01 = integrate_values(g, e1, 2);
  const double a10 = integrate_values(g, e0, 4), a11 = integrate_values(g, e1, 4);
  const double det = a00 * a11 - a01 * a10;
  if (!(std::abs(det) > 1e-300)) throw StepError("singular reprojection system");
  Reprojection out{f, (d0 * a11 - a01 * d2) / det, (a00 * d2 - a10 * d0) / det, 0.0};
  std::vector<double> v = f.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = out.a * e0[i] + out.b * e1[i];
    v[i] += c;
    out.magnitude = std::max(out.magnitude, std::abs(c));
  }
  out.f = RadialField(f.grid_ptr(), std::move(v));
  return out;
}

}  // namespace

Reprojection reproject(const RadialField& f, double m0, double m2) {
  const double drift = std::max(std::abs(m0 - integrate(f, 2)) / std::abs(m0),
                                std::abs(m2 - integrate(f, 4)) / std::abs(m2));
  if (!(drift < kMaxReprojectionDrift)) {
    std::ostringstream os;
    os << "moment drift " << drift << " exceeds " << kMaxReprojectionDrift
       << ": normalization has failed structurally";
    throw StepError(os.str());
  }
  return add_moment_correction(f, m0, m2);
}

RescaleState step(const RescaleState& state, double alpha, double dt, TimeScheme scheme,
                  StepInfo* info) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError("dt must be positive");
  validate_alpha(alpha);
  const ScalingRates rates{state.c_l, state.c_omega};
  const auto raw = scheme == TimeScheme::imex ? imex_update(state.f, alpha, dt, rates)
                                              : strang_update(state.f, alpha, dt, rates);
  const double fmax = raw.max_abs();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < -1e-10 * fmax) {
      std::ostringstream os;
      os << "negative value " << raw[i] << " at r = " << raw.grid()[i] << " (tau = " << state.tau
         << ")";
      throw StepError(os.str());
    }
  }
  const double mass_before = integrate(raw, 2);
  const auto rp = reproject(raw, state.m0, state.m2);
  const auto next_rates = compute_scaling(rp.f, alpha);

  RescaleState out = state;
  out.f = rp.f;
  out.tau = state.tau + dt;
  out.c_l = next_rates.c_l;
  out.c_omega = next_rates.c_omega;
  out.log_cl = state.log_cl - 0.5 * dt * (state.c_l + next_rates.c_l);
  out.log_cw = state.log_cw + 0.5 * dt * (state.c_omega + next_rates.c_omega);
  out.t_phys = state.t_phys + 0.5 * dt * (std::exp(state.log_cw) + std::exp(out.log_cw));
  if (info) {
    info->reprojection = rp.magnitude;
    info->mass_rate = (mass_before - state.m0) / (dt * state.m0);
  }
  return out;
}

PhysicalMoment physical_moment(const RescaleState& state, int k) {
  const double m = 4.0 * kPi * integrate(state.f, k + 2);
  PhysicalMoment out;
  const double log_factor = -state.log_cw + (k + 3) * state.log_cl;
  out.log_value = log_factor + std::log(std::abs(m));
  out.value = std::exp(log_factor) * m;
  out.overflow = !std::isfinite(out.value);
  return out;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::blowup: return "blowup";
    case Verdict::relaxation: return "relaxation";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::maxwellian: return "maxwellian";
    case InitialKind::perturbed: return "perturbed";
    case InitialKind::truncated: return "truncated";
  }
  return "maxwellian";
}

InitialKind parse_initial_kind(std::string_view text) {
  if (text == "maxwellian") return InitialKind::maxwellian;
  if (text == "perturbed") return InitialKind::perturbed;
  if (text == "truncated") return InitialKind::truncated;
  throw ConfigurationError("unknown initial data '" + std::string(text) +
                           "' (maxwellian, perturbed, truncated)");
}

void RunConfig::validate() const {
  validate_alpha(alpha);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError("dt must be positive");
  if (!(tau_max >= dt)) throw ConfigurationError("tau_max must be at least dt");
  if (!(r_max > 0.0)) throw ConfigurationError("r_max must be positive");
  if (intervals < kMinIntervals) throw ConfigurationError("N must be at least 64");
  weights.validate();
  if (!(perturbation > 0.0 && perturbation < 1.0)) {
    throw ConfigurationError("perturbation must lie in (0, 1)");
  }
  if (!(truncation > 1.0 && truncation < r_max)) {
    throw ConfigurationError("truncation radius must lie in (1, r_max)");
  }
  if (!(burn_in >= 0.0 && burn_in < 1.0)) throw ConfigurationError("burn_in must lie in [0, 1)");
  if (!(relax_fraction > 0.0 && relax_fraction < 1.0)) {
    throw ConfigurationError("relax_fraction must lie in (0, 1)");
  }
  if (record_every == 0) throw ConfigurationError("record_every must be positive");
}

RadialField initial_data(const RunConfig& config, const WeightFamily& family) {
  const auto& grid = family.grid();
  const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  switch (config.initial) {
    case InitialKind::maxwellian:
      return mu;
    case InitialKind::truncated: {
      const double rc = config.truncation;
      const auto cut = RadialField::sample(grid, [&](double r) {
        const double x = (r - (rc - 1.0));
        if (x <= 0.0) return std::exp(-r * r);
        if (x >= 1.0) return 0.0;
        const double s = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
        return (1.0 - s) * std::exp(-r * r);
      });
      return add_moment_correction(cut, integrate(mu, 2), integrate(mu, 4)).f;
    }
    case InitialKind::perturbed: {
      std::mt19937_64 rng(config.seed);
      std::uniform_real_distribution<double> coef(-1.0, 1.0);
      const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
      // Polynomial in r^2 times e^{-2 r^2}, with the two constraints enforced
      // inside the same family so f0 / mu stays bounded.
      auto piece = [&](int j) {
        return RadialField::sample(grid, [j](double r) {
          return std::pow(r * r, j) * std::exp(-2.0 * r * r);
        });
      };
      const auto p0 = piece(0), p1 = piece(1);
      const auto raw = c1 * piece(1) + (c2 / 2.0) * piece(2) + (c3 / 6.0) * piece(3);
      const double a00 = integrate(p0, 2), a01 = integrate(p1, 2);
      const double a10 = integrate(p0, 4), a11 = integrate(p1, 4);
      const double b0 = integrate(raw, 2), b1 = integrate(raw, 4);
      const double det = a00 * a11 - a01 * a10;
      const double u = (b0 * a11 - a01 * b1) / det;
      const double w = (a00 * b1 - a10 * b0) / det;
      const auto shape = raw - u * p0 - w * p1;
      const double e_mu = energy_functionals(mu, family).e2;
      const double e_shape = energy_functionals(shape, family).e2;
      if (!(e_shape > 0.0)) throw DegenerateFieldError("perturbation shape has zero energy");
      const double eps = std::sqrt(config.perturbation * e_mu / e_shape);
      auto f0 = mu + eps * shape;
      for (std::size_t i = 0; i < f0.size(); ++i) {
        if (f0[i] < 0.0) {
          throw ConfigurationError("perturbation too large: initial data is negative");
        }
      }
      return f0;
    }
  }
  return mu;
}

Extrapolation extrapolate_blowup_time(const std::vector<StepRecord>& records, double tau_from) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.tau < tau_from) continue;
    sx += r.tau;
    sy += r.log_cw;
    sxx += r.tau * r.tau;
    sxy += r.tau * r.log_cw;
    ++n;
  }
  Extrapolation out;
  if (n < 3 || records.empty()) return out;
  const double nn = static_cast<double>(n);
  const double den = nn * sxx - sx * sx;
  if (!(den > 0.0)) return out;
  const double slope = (nn * sxy - sx * sy) / den;
  out.lambda = -slope;
  if (!(out.lambda > 0.0)) return out;
  const auto& last = records.back();
  out.t_infinity = last.t_phys + std::exp(last.log_cw) / out.lambda;
  out.valid = true;
  return out;
}

RunResult run(const RunConfig& config) {
  config.validate();
  RunResult res;
  res.config = config;
  const auto grid = build_grid(config.r_max, config.intervals, config.grid);
  const auto family = build_weight_family(grid, config.weights);
  const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  auto state = initial_state(initial_data(config, family), config.alpha);
  const double m0 = state.m0, m2 = state.m2;
  const bool blowup_case = config.alpha > 1.0;

  auto record = [&](const RescaleState& s, const StepInfo& info) {
    StepRecord r;
    r.tau = s.tau;
    r.t_phys = s.t_phys;
    r.c_l = s.c_l;
    r.c_omega = s.c_omega;
    r.ratio = s.c_l != 0.0 ? std::abs(s.c_omega) / std::abs(s.c_l) : 0.0;
    const auto ed = energy_functionals(s.f - mu, family);
    r.e2 = ed.e2;
    r.d2 = ed.d2;
    r.e2_over_alpha_minus_1 = blowup_case ? ed.e2 / (config.alpha - 1.0) : 0.0;
    r.mass_phys = physical_moment(s, 0).value;
    r.energy_phys = physical_moment(s, 2).value;
    r.reprojection_magnitude = info.reprojection;
    r.mass_rate = info.mass_rate;
    r.log_cl = s.log_cl;
    r.log_cw = s.log_cw;
    res.records.push_back(r);
    res.max_moment_drift = std::max(
        {res.max_moment_drift, std::abs(integrate(s.f, 2) - m0) / std::abs(m0),
         std::abs(integrate(s.f, 4) - m2) / std::abs(m2)});
  };

  record(state, StepInfo{});
  const double e2_initial = res.records.front().e2;
  const auto steps = static_cast<std::size_t>(std::llround(config.tau_max / config.dt));
  for (std::size_t k = 1; k <= steps; ++k) {
    StepInfo info;
    try {
      state = step(state, config.alpha, config.dt, config.scheme, &info);
    } catch (const StepError& e) {
      res.failure = e.what();
      break;
    }
    if (k % config.record_every == 0 || k == steps) record(state, info);
    if (config.stop_when_relaxed && e2_initial > 0.0 &&
        res.records.back().e2 <= config.relax_fraction * e2_initial) {
      break;
    }
  }
  res.final_state = state;

  // Verdict.
  const double tau_end = state.tau;
  const double burn = config.burn_in * config.tau_max;
  res.min_ratio = std::numeric_limits<double>::infinity();
  bool omega_negative = true;
  for (const auto& r : res.records) {
    if (r.tau < burn) continue;
    res.min_ratio = std::min(res.min_ratio, r.ratio);
    if (!(r.c_omega < 0.0)) omega_negative = false;
  }
  if (!std::isfinite(res.min_ratio)) res.min_ratio = 0.0;
  const auto ex = extrapolate_blowup_time(res.records, 0.5 * tau_end);
  res.decay_rate = ex.lambda;
  if (blowup_case && res.failure.empty() && omega_negative && res.min_ratio > 5.0 && ex.valid) {
    // Cauchy test: the remaining physical time is a small fraction of the total.
    const double remainder = ex.t_infinity - res.records.back().t_phys;
    if (remainder < 0.05 * ex.t_infinity) {
      res.verdict = Verdict::blowup;
      res.blowup_time = ex.t_infinity;
    }
  } else if (!blowup_case && res.failure.empty() && e2_initial > 0.0) {
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& r : res.records) {
      if (r.tau < burn) continue;
      if (r.e2 > prev) decreasing = false;
      prev = r.e2;
    }
    if (decreasing && res.records.back().e2 <= config.relax_fraction * e2_initial) {
      res.verdict = Verdict::relaxation;
    }
  }
  return res;
}

std::vector<RunResult> sweep(const std::vector<RunConfig>& configs, unsigned threads) {
  if (threads == 0) {
    if (const char* env = std::getenv("LANDAU_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v <= 0) {
        throw ConfigurationError("LANDAU_THREADS must be a positive integer");
      }
      threads = static_cast<unsigned>(v);
    } else {
      threads = std::max(1u, std::thread::hardware_concurrency());
    }
  }
  for (const auto& c : configs) c.validate();
  std::vector<RunResult> results(configs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(configs.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace landau
