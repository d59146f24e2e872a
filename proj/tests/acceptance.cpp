// Acceptance criteria 1-10. One PASS/FAIL line per criterion.
//
//   acceptance [--known-failures 5,7,9]
//
// Exit status is 0 when the failing set equals the --known-failures list
// (empty by default), 1 otherwise. The PASS/FAIL lines never depend on it.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landau/biharmonic.hpp"
#include "landau/collision.hpp"
#include "landau/log.hpp"
#include "landau/potentials.hpp"
#include "landau/rescaler.hpp"
#include "landau/spectral.hpp"
#include "landau/weights.hpp"

using namespace landau;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RadialField maxwellian(const GridPtr& g) {
  return RadialField::sample(g, [](double r) { return std::exp(-r * r); });
}

// Nonnegative even mixture sum a_j (1 + b_j r^2) exp(-r^2 / s_j^2), s_j in [0.6, 1.6].
RadialField random_field(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a[3], s[3], b[3];
  for (int j = 0; j < 3; ++j) {
    a[j] = 0.1 + u(rng);
    s[j] = 0.6 + u(rng);
    b[j] = u(rng);
  }
  return RadialField::sample(g, [&](double r) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += a[j] * (1.0 + b[j] * r * r) * std::exp(-r * r / (s[j] * s[j]));
    return v;
  });
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

Outcome criterion1() {
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  const auto nc = normalization_constants(maxwellian(g), -3.0);
  const double e1 = std::abs(nc.c1 - kCoulombC1), e2 = std::abs(nc.c2 - kCoulombC2);
  const double es = std::abs(nc.sigma - 7.0);
  return {std::max({e1, e2, es}) <= 1e-9,
          fmt("|dC1| = %.2e, |dC2| = %.2e, |sigma - 7| = %.2e (tol 1e-9)", e1, e2, es)};
}

Outcome criterion2() {
  bool ok = true;
  std::ostringstream os;
  for (double gamma : {-2.9, -2.5, -2.1}) {
    double sig[2];
    int idx = 0;
    for (std::size_t n : {512, 1024}) {
      const auto g = build_grid(30.0, n, GridScheme::graded);
      const auto nc = normalization_constants(maxwellian(g), gamma);
      ok = ok && nc.c1 < 0.0 && nc.c2 > 0.0 && nc.c1 + 5.0 * nc.c2 < 0.0 && nc.sigma > 5.0;
      sig[idx++] = nc.sigma;
    }
    const double dsig = std::abs(sig[1] - sig[0]);
    ok = ok && dsig <= 1e-4;
    const auto g = build_grid(30.0, 1024, GridScheme::graded);
    const auto m = maxwellian_monotonicity(g, gamma);
    const double scale = m.max_abs();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < m.size(); ++i) {
      if (g->operator[](i) >= 0.1 && g->operator[](i) <= 10.0) worst = std::max(worst, m[i] / scale);
    }
    ok = ok && std::abs(m[0]) < 1e-8 && worst < -1e-10;
    os << fmt("gamma=%.1f sigma=%.6f |dsigma|=%.1e m(0)=%.1e max m/|m| on [0.1,10]=%.2e; ", gamma,
              sig[1], dsig, m[0], worst);
  }
  return {ok, os.str()};
}

Outcome criterion3() {
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  const auto mu = maxwellian(g);
  const double alg = verify_biharmonic_residual(solve_biharmonic(mu), mu).algebraic;
  std::vector<double> cross;
  for (std::size_t n : {256, 512, 1024}) {
    const auto gn = build_grid(30.0, n, GridScheme::graded);
    const auto f = maxwellian(gn);
    cross.push_back(verify_biharmonic_residual(solve_biharmonic(f), f).cross);
  }
  const double p = std::min(order(cross[0], cross[1]), order(cross[1], cross[2]));
  std::mt19937_64 rng(3);
  int signs = 0;
  for (int s = 0; s < 100; ++s) signs += sign_properties(random_field(g, rng)).all() ? 1 : 0;
  return {alg <= 1e-8 && p >= 1.8 && signs == 100,
          fmt("algebraic %.2e (tol 1e-8); cross %.2e, %.2e, %.2e, order %.2f (>= 1.8); "
              "signs %d/100",
              alg, cross[0], cross[1], cross[2], p, signs)};
}

Outcome criterion4() {
  std::vector<double> err;
  for (std::size_t n : {256, 512, 1024}) {
    const auto g = build_grid(30.0, n, GridScheme::graded);
    err.push_back(collision_q(maxwellian(g)).max_abs());
  }
  const double p = std::min(order(err[0], err[1]), order(err[1], err[2]));
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto q = collision_q(random_field(g, rng));
    std::vector<double> a(q.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(q[i]);
    const double l1 = integrate_values(*g, a, 2);
    worst = std::max({worst, std::abs(integrate(q, 2)) / l1, std::abs(integrate(q, 4)) / l1});
  }
  return {p >= 1.8 && worst <= 1e-6,
          fmt("|Q(mu,mu)|_inf %.2e, %.2e, %.2e (order %.2f, >= 1.8); invariants %.2e (tol 1e-6)",
              err[0], err[1], err[2], p, worst)};
}

Outcome criterion5() {
  const std::vector<std::string> names{"rho_inner",   "eta_range",     "q_le_2rho",
                                       "rho_mu_le_1", "r2_bound",      "far_field_rho",
                                       "w_far_field"};
  bool ok = true;
  std::ostringstream os;
  const auto g = build_grid(30.0, 1024, GridScheme::graded);
  for (int r1 : {4, 6}) {
    WeightParams p;
    p.r1 = r1;
    const auto cert = weight_certificate(build_weight_family(g, p));
    os << "R1=" << r1 << ":";
    for (const auto& name : names) {
      const auto& c = cert.find(name);
      ok = ok && c.passed;
      if (!c.passed) os << " " << name << " FAIL (" << c.detail << ")";
    }
    os << "; ";
  }
  return {ok, os.str()};
}

double gap(std::size_t n, std::size_t modes, double alpha, Denominator d) {
  const auto g = build_grid(30.0, n, GridScheme::graded);
  const auto fam = build_weight_family(g, WeightParams{});
  GapOptions o;
  o.alpha = alpha;
  o.denominator = d;
  o.basis.n_modes = modes;
  return constrained_gap(fam, o).top_rayleigh;
}

Outcome criterion6() {
  const double a = gap(1024, 120, 1.0, Denominator::d2);
  const double b = gap(1024, 80, 1.0, Denominator::d2);
  const double c = gap(512, 120, 1.0, Denominator::d2);
  const double rel_modes = std::abs(a - b) / std::abs(a);
  const double rel_grid = std::abs(a - c) / std::abs(a);
  return {a < 0.0 && b < 0.0 && c < 0.0 && rel_modes <= 0.2 && rel_grid <= 0.2,
          fmt("c* = %.5f; n_modes 80 vs 120: %.2e, N 512 vs 1024: %.2e (tol 0.2)", -a, rel_modes,
              rel_grid)};
}

Outcome criterion7() {
  std::vector<double> kappa;
  std::ostringstream os;
  for (double alpha : {1.01, 1.02, 1.04}) {
    const double top = gap(1024, 120, alpha, Denominator::e2);
    kappa.push_back(-top / (alpha - 1.0));
    os << fmt("alpha=%.2f top=%+.4e kappa=%.3f; ", alpha, top, kappa.back());
  }
  const double lo = *std::min_element(kappa.begin(), kappa.end());
  const double hi = *std::max_element(kappa.begin(), kappa.end());
  const bool ok = lo > 0.0 && hi <= 1.25 * lo;
  os << fmt("max/min kappa %.3f (need all > 0, <= 1.25)", lo > 0.0 ? hi / lo : NAN);
  return {ok, os.str()};
}

Outcome criterion8() {
  RunConfig c;
  c.alpha = 1.0;
  c.initial = InitialKind::perturbed;
  c.stop_when_relaxed = true;
  const auto res = run(c);
  const auto& rec = res.records;
  bool mono = true;
  for (std::size_t i = 6; i < rec.size(); ++i) mono = mono && rec[i].e2 <= rec[i - 1].e2;
  const double ratio = rec.back().e2 / rec.front().e2;
  const bool ok = res.failure.empty() && mono && ratio <= 1e-6 && res.max_moment_drift <= 1e-6;
  return {ok, fmt("E2 %.3e -> %.3e (ratio %.2e, tol 1e-6) at tau=%.2f, monotone after 5 steps: "
                  "%s, moment drift %.1e (tol 1e-6)%s",
                  rec.front().e2, rec.back().e2, ratio, rec.back().tau, mono ? "yes" : "no",
                  res.max_moment_drift, res.failure.empty() ? "" : (" failure: " + res.failure).c_str())};
}

Outcome criterion9() {
  RunConfig c;
  c.alpha = 1.05;
  const auto res = run(c);
  const auto& rec = res.records;
  bool omega_neg = true;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rec.size(); ++i) {
    omega_neg = omega_neg && rec[i].c_omega < 0.0;
    min_ratio = std::min(min_ratio, rec[i].ratio);
  }
  const double tau_end = rec.back().tau;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rec) {
    if (r.tau < 0.5 * tau_end) continue;
    lo = std::min(lo, r.e2_over_alpha_minus_1);
    hi = std::max(hi, r.e2_over_alpha_minus_1);
  }
  const double spread = hi / lo;
  const auto ex = extrapolate_blowup_time(rec, 0.5 * tau_end);
  const double oracle = 1.0 / std::abs(c_omega_bar(1.05));
  const double t_err = ex.valid ? std::abs(ex.t_infinity - oracle) / oracle : INFINITY;
  const double mass = rec.back().mass_phys / rec.front().mass_phys;
  const double energy = rec.back().energy_phys / rec.front().energy_phys;
  const bool ok = res.failure.empty() && omega_neg && min_ratio > 5.0 && spread <= 3.0 &&
                  t_err <= 0.2 && mass >= 10.0 && energy >= 10.0;
  return {ok, fmt("c_omega < 0: %s; min ratio %.3f (> 5); E2/(alpha-1) max/min over second half "
                  "%.2e (<= 3); T = %.3f vs %.3f (err %.3f, tol 0.2); mass x%.1f, energy x%.1f "
                  "(>= 10)%s",
                  omega_neg ? "yes" : "no", min_ratio, spread, ex.t_infinity, oracle, t_err, mass,
                  energy, res.failure.empty() ? "" : (" failure: " + res.failure).c_str())};
}

Outcome criterion10() {
  std::vector<double> d;
  for (int n : {2, 3, 4}) d.push_back(local_gap_surrogate(n).delta);
  const bool ok = d[0] > 0.0 && d[1] > 0.0 && d[2] > 0.0 && d[2] >= 0.5 * std::max(d[0], d[1]);
  return {ok, fmt("surrogate delta_2 = %.4f, delta_3 = %.4f, delta_4 = %.4f "
                  "(need > 0, delta_4 >= 0.5 max(delta_2, delta_3))",
                  d[0], d[1], d[2])};
}

std::set<int> parse_list(const char* text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failures") == 0 && i + 1 < argc) {
      known = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failures 5,7,9]\n");
      return 2;
    }
  }
  log::set_quiet(true);
  const std::vector<std::pair<double, std::function<Outcome()>>> criteria{
      {1.0, criterion1},   {30.0, criterion2},  {10.0, criterion3},  {10.0, criterion4},
      {5.0, criterion5},   {120.0, criterion6}, {180.0, criterion7}, {60.0, criterion8},
      {120.0, criterion9}, {120.0, criterion10}};
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < criteria[i].first;
    const bool pass = o.pass && in_time;
    if (!pass) failed.insert(id);
    std::printf("criterion %2d: %s  %s [%.2f s, budget %.0f s]\n", id, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, criteria[i].first);
    std::fflush(stdout);
  }
  std::printf("%zu/10 passed\n", 10 - failed.size());
  if (failed == known) return 0;
  if (!known.empty()) std::printf("failing set differs from --known-failures\n");
  return 1;
}
