#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "landau/radial.hpp"
#include "landau/rescaler.hpp"
#include "landau/spectral.hpp"

namespace landau::cli {

enum class Command { constants, weights, coercivity, evolve, sweep };

std::string_view to_string(Command command);

struct Config {
  Command command = Command::constants;
  double gamma = -3.0;
  std::vector<double> alpha{1.0};
  int r1 = 4;
  double k = 2.5;
  double k2 = 12.5;
  double k1 = 1.0;
  double r_max = 30.0;
  std::size_t n = 1024;
  GridScheme grid = GridScheme::graded;
  double dt = 0.05;
  double tau_max = 300.0;
  TimeScheme time_scheme = TimeScheme::imex;
  std::size_t n_modes = 120;
  InitialKind initial = InitialKind::maxwellian;
  double perturbation = 1e-2;
  double truncation = 6.0;
  std::size_t record_every = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";

  WeightParams weight_params() const;
  RunConfig run_config(double alpha) const;
  void validate() const;
};

/// Config keys in file order; flags are --key with '_' spelled '-'.
const std::vector<std::string>& config_keys();

/// Apply one `key = value` setting. Throws ConfigurationError naming the key.
void apply_setting(Config& config, const std::string& key, const std::string& value);

/// Parse `key = value` lines; '#' starts a comment. Unknown keys are rejected.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// argv[1] is the subcommand. Precedence: flag > --config file > default.
/// Returns nullopt when help was printed.
std::optional<Config> parse_config(int argc, const char* const* argv, std::ostream& out);

struct RunSummary {
  double alpha = 0.0;
  std::string verdict;
  std::optional<double> blowup_time;
  double decay_rate = 0.0;
  double min_ratio = 0.0;
  double max_moment_drift = 0.0;
  double tau_end = 0.0;
  double t_phys_end = 0.0;
  double e2_end = 0.0;
  std::size_t records = 0;
  std::string failure;
  bool operator==(const RunSummary&) const = default;
};

RunSummary summarize(const RunResult& result);
std::string summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const std::string& text);

/// Run CSV: tau, t_phys, c_l, c_omega, ratio, E2, D2, E2_over_alpha_minus_1,
/// mass_phys, energy_phys, reprojection_magnitude; 17 significant digits.
void write_run_csv(std::ostream& os, const std::vector<StepRecord>& records);

/// Runs the subcommand. Exit codes: 0 success, 1 failed check, 2 configuration error.
int dispatch(const Config& config, std::ostream& out, std::ostream& err);

/// parse_config + dispatch with error mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace landau::cli
