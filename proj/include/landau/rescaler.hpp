#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landau/radial.hpp"
#include "landau/weights.hpp"

namespace landau {

/// Rates from the normalization conditions: c_omega = C1(f)(alpha-1),
/// c_l = C2(f)(alpha-1). Coulomb interaction only.
struct ScalingRates {
  double c_l = 0.0;
  double c_omega = 0.0;
};

ScalingRates compute_scaling(const RadialField& f, double alpha);

struct RescaleState {
  double tau = 0.0;
  RadialField f;
  double c_l = 0.0;
  double c_omega = 0.0;
  double log_cl = 0.0;  // -int c_l dtau
  double log_cw = 0.0;  //  int c_omega dtau
  double t_phys = 0.0;
  double m0 = 0.0;  // int f0 r^2 dr
  double m2 = 0.0;  // int f0 r^4 dr
};

RescaleState initial_state(const RadialField& f0, double alpha);

enum class TimeScheme { imex, strang };

std::string_view to_string(TimeScheme scheme);
TimeScheme parse_time_scheme(std::string_view text);

/// Moment drift beyond this fraction is a structural failure, not integrator drift.
inline constexpr double kMaxReprojectionDrift = 1e-2;

struct Reprojection {
  RadialField f;
  double a = 0.0;
  double b = 0.0;
  double magnitude = 0.0;  // max |a mu + b (r^2 - 3/2) mu|
};

/// f + a mu + b (r^2 - 3/2) mu with int f r^2 = m0 and int f r^4 = m2.
Reprojection reproject(const RadialField& f, double m0, double m2);

struct StepInfo {
  double reprojection = 0.0;
  double mass_rate = 0.0;  // (int f r^2 before reprojection - m0) / (dt m0)
};

/// One linearized-implicit step of
///   f_tau + c_l r f_r = Q(f, f) + (alpha-1) f^2 + c_omega f.
/// The local Coulomb part -g_rr f_rr - 2 g_r f_r / r^2 and the transport
/// -c_l r f_r are implicit with g and c_l frozen at the step start; alpha f^2
/// and c_omega f are explicit. The strang scheme wraps a Crank-Nicolson
/// implicit step in two explicit half steps. At R_max f_r = -lambda f / r with lambda = |c_omega / c_l|
/// (Gaussian decay, lambda = 2 R_max^2, when c_l = 0).
RescaleState step(const RescaleState& state, double alpha, double dt, TimeScheme scheme,
                  StepInfo* info = nullptr);

struct PhysicalMoment {
  double value = 0.0;
  double log_value = 0.0;
  bool overflow = false;
};

/// exp(-log C_omega + (k+3) log C_l) 4 pi int f r^{k+2} dr.
PhysicalMoment physical_moment(const RescaleState& state, int k);

enum class Verdict { blowup, relaxation, inconclusive };

std::string_view to_string(Verdict verdict);

struct StepRecord {
  double tau = 0.0;
  double t_phys = 0.0;
  double c_l = 0.0;
  double c_omega = 0.0;
  double ratio = 0.0;  // |c_omega| / |c_l|, 0 when c_l = 0
  double e2 = 0.0;
  double d2 = 0.0;
  double e2_over_alpha_minus_1 = 0.0;  // 0 at alpha = 1
  double mass_phys = 0.0;
  double energy_phys = 0.0;
  double reprojection_magnitude = 0.0;
  double mass_rate = 0.0;
  double log_cl = 0.0;
  double log_cw = 0.0;
};

enum class InitialKind { maxwellian, perturbed, truncated };

std::string_view to_string(InitialKind kind);
InitialKind parse_initial_kind(std::string_view text);

struct RunConfig {
  double alpha = 1.05;
  double dt = 0.05;
  double tau_max = 300.0;
  TimeScheme scheme = TimeScheme::imex;
  double r_max = 30.0;
  std::size_t intervals = 1024;
  GridScheme grid = GridScheme::graded;
  WeightParams weights;
  InitialKind initial = InitialKind::maxwellian;
  double perturbation = 1e-2;  // E2(f0 - mu) / E2(mu) for the perturbed start
  double truncation = 6.0;     // cutoff radius for the truncated start
  std::uint64_t seed = 1;
  double burn_in = 0.1;          // fraction of tau_max
  double relax_fraction = 1e-6;  // E2 target for the relaxation verdict
  bool stop_when_relaxed = false;
  std::size_t record_every = 1;
  void validate() const;
};

struct RunResult {
  RunConfig config;
  std::vector<StepRecord> records;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> blowup_time;  // extrapolated T
  double decay_rate = 0.0;            // fitted rate of C_omega over the second half
  double min_ratio = 0.0;
  double max_moment_drift = 0.0;  // relative, after reprojection
  std::string failure;            // step error text when the run aborted
  std::optional<RescaleState> final_state;
};

/// Initial data for a run: mu, mu plus a constrained even perturbation with
/// the requested E2 ratio (random polynomial times mu, from the seed), or mu
/// with a smooth cutoff at the truncation radius, reprojected to the moments
/// of mu.
RadialField initial_data(const RunConfig& config, const WeightFamily& family);

/// Sequential in tau. Step errors end the run; the records so far are kept
/// and the error text lands in RunResult::failure.
RunResult run(const RunConfig& config);

/// Independent runs in parallel, at most `threads` at a time (0: the
/// LANDAU_THREADS environment variable, else hardware concurrency). Results
/// are in input order.
std::vector<RunResult> sweep(const std::vector<RunConfig>& configs, unsigned threads = 0);

/// Fit log C_omega = a - lambda tau over the records with tau >= tau_from and
/// extrapolate t_phys(infinity) = t_phys(end) + C_omega(end) / lambda.
struct Extrapolation {
  double lambda = 0.0;
  double t_infinity = 0.0;
  bool valid = false;
};

Extrapolation extrapolate_blowup_time(const std::vector<StepRecord>& records, double tau_from);

}  // namespace landau
