#include "landau/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "landau/collision.hpp"
#include "landau/errors.hpp"
#include "landau/potentials.hpp"
#include "landau/weights.hpp"

namespace landau::cli {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto t = trim(v);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc{} || p != t.data() + t.size() || !std::isfinite(x)) {
    throw ConfigurationError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto t = trim(v);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw ConfigurationError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigurationError(key + ": empty list");
  return out;
}

template <class F>
auto keyed(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigurationError& e) {
    const std::string what = e.what();
    if (what.rfind(key + ":", 0) == 0) throw;
    throw ConfigurationError(key + ": " + what);
  }
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"gamma", [](Config& c, const auto& k, const auto& v) { c.gamma = parse_double(k, v); }},
      {"alpha", [](Config& c, const auto& k, const auto& v) { c.alpha = parse_list(k, v); }},
      {"r1",
       [](Config& c, const auto& k, const auto& v) {
         c.r1 = static_cast<int>(parse_unsigned(k, v));
       }},
      {"k", [](Config& c, const auto& k, const auto& v) { c.k = parse_double(k, v); }},
      {"k2", [](Config& c, const auto& k, const auto& v) { c.k2 = parse_double(k, v); }},
      {"k1", [](Config& c, const auto& k, const auto& v) { c.k1 = parse_double(k, v); }},
      {"r_max", [](Config& c, const auto& k, const auto& v) { c.r_max = parse_double(k, v); }},
      {"n", [](Config& c, const auto& k, const auto& v) { c.n = parse_unsigned(k, v); }},
      {"grid",
       [](Config& c, const auto& k, const auto& v) {
         c.grid = keyed(k, [&] { return parse_grid_scheme(trim(v)); });
       }},
      {"dt", [](Config& c, const auto& k, const auto& v) { c.dt = parse_double(k, v); }},
      {"tau_max", [](Config& c, const auto& k, const auto& v) { c.tau_max = parse_double(k, v); }},
      {"time_scheme",
       [](Config& c, const auto& k, const auto& v) {
         c.time_scheme = keyed(k, [&] { return parse_time_scheme(trim(v)); });
       }},
      {"n_modes", [](Config& c, const auto& k, const auto& v) { c.n_modes = parse_unsigned(k, v); }},
      {"initial",
       [](Config& c, const auto& k, const auto& v) {
         c.initial = keyed(k, [&] { return parse_initial_kind(trim(v)); });
       }},
      {"perturbation",
       [](Config& c, const auto& k, const auto& v) { c.perturbation = parse_double(k, v); }},
      {"truncation",
       [](Config& c, const auto& k, const auto& v) { c.truncation = parse_double(k, v); }},
      {"record_every",
       [](Config& c, const auto& k, const auto& v) { c.record_every = parse_unsigned(k, v); }},
      {"seed", [](Config& c, const auto& k, const auto& v) { c.seed = parse_unsigned(k, v); }},
      {"out", [](Config& c, const auto&, const auto& v) { c.out = trim(v); }},
  };
  return table;
}

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

std::string fmt17(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int run_constants(const Config& c, std::ostream& out) {
  const auto grid = build_grid(c.r_max, c.n, c.grid);
  const auto mu = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  const auto nc = normalization_constants(mu, c.gamma);
  const bool signs = nc.c1 < 0.0 && nc.c2 > 0.0 && nc.c1 + 5.0 * nc.c2 < 0.0 && nc.sigma > 5.0;
  out << std::setprecision(17) << "gamma = " << c.gamma << "\nC1 = " << nc.c1 << "\nC2 = " << nc.c2
      << "\nsigma = " << nc.sigma << "\nk_gamma = " << nc.k_gamma << "\n";
  json j{{"gamma", c.gamma}, {"C1", nc.c1},      {"C2", nc.c2},
         {"sigma", nc.sigma}, {"k_gamma", nc.k_gamma}, {"signs_ok", signs}};
  if (c.gamma == -3.0) {
    j["C1_exact"] = kCoulombC1;
    j["C2_exact"] = kCoulombC2;
  }
  write_file(c.out / "constants.json", j.dump(2) + "\n");
  return signs ? 0 : 1;
}

int run_weights(const Config& c, std::ostream& out) {
  const auto grid = build_grid(c.r_max, c.n, c.grid);
  const auto fam = build_weight_family(grid, c.weight_params());
  const auto cert = weight_certificate(fam);
  std::ostringstream csv;
  csv << "r,eta,rho,q,lambda,rho2,w\n";
  for (std::size_t i = 0; i < grid->size(); ++i) {
    csv << fmt17((*grid)[i]) << ',' << fmt17(fam.eta[i]) << ',' << fmt17(fam.rho[i]) << ','
        << fmt17(fam.q[i]) << ',' << fmt17(fam.lambda[i]) << ',' << fmt17(fam.rho2[i]) << ','
        << fmt17(fam.w[i]) << '\n';
  }
  write_file(c.out / "weights.csv", csv.str());
  json checks = json::array();
  for (const auto& ch : cert.checks) {
    checks.push_back({{"name", ch.name},
                      {"passed", ch.passed},
                      {"worst_margin", number_or_null(ch.worst_margin)},
                      {"worst_r", (*grid)[ch.worst_node]},
                      {"detail", ch.detail}});
    out << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  " << ch.detail << "\n";
  }
  json j{{"r1", c.r1},     {"k", c.k},           {"k2", c.k2},
         {"k1", c.k1},     {"r2", cert.r2},      {"r1_star", cert.r1_star},
         {"eps2", cert.eps2}, {"all_passed", cert.all_passed()}, {"checks", checks}};
  write_file(c.out / "weights_certificate.json", j.dump(2) + "\n");
  return cert.all_passed() ? 0 : 1;
}

int run_coercivity(const Config& c, std::ostream& out) {
  const auto grid = build_grid(c.r_max, c.n, c.grid);
  const auto fam = build_weight_family(grid, c.weight_params());
  json rows = json::array();
  std::ostringstream csv;
  csv << "alpha,denominator,n_modes,top_rayleigh,best_single,asymmetry\n";
  bool ok = true;
  std::optional<double> c_star;
  std::vector<std::pair<double, double>> kappa_points;
  for (double a : c.alpha) {
    GapOptions opt;
    opt.alpha = a;
    opt.basis.n_modes = c.n_modes;
    opt.denominator = a == 1.0 ? Denominator::d2 : Denominator::e2;
    const auto est = constrained_gap(fam, opt);
    csv << fmt17(a) << ',' << to_string(est.denominator) << ',' << est.n_modes << ','
        << fmt17(est.top_rayleigh) << ',' << fmt17(est.best_single) << ','
        << fmt17(est.asymmetry) << '\n';
    out << std::setprecision(10) << "alpha = " << a << "  " << to_string(est.denominator)
        << "  top = " << est.top_rayleigh << "\n";
    if (!(est.top_rayleigh < 0.0)) ok = false;
    if (a == 1.0) {
      c_star = -est.top_rayleigh;
    } else {
      kappa_points.emplace_back(a - 1.0, est.top_rayleigh);
    }
    rows.push_back({{"alpha", a},
                    {"denominator", to_string(est.denominator)},
                    {"n_modes", est.n_modes},
                    {"top_rayleigh", est.top_rayleigh}});
  }
  json j{{"gaps", rows}};
  j["c_star"] = c_star ? json(*c_star) : json(nullptr);
  if (!kappa_points.empty()) {
    // Least-squares slope through the origin: top = -kappa (alpha - 1).
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : kappa_points) {
      sxx += x * x;
      sxy += x * y;
    }
    j["kappa_fit"] = -sxy / sxx;
    out << "kappa_fit = " << -sxy / sxx << "\n";
  } else {
    j["kappa_fit"] = nullptr;
  }
  json sur = json::array();
  for (int n = 2; n <= c.r1; ++n) {
    const auto s = local_gap_surrogate(n);
    sur.push_back({{"n", n}, {"delta", s.delta}, {"label", s.label}});
    out << "surrogate delta_" << n << " = " << s.delta << "\n";
  }
  j["local_gap_surrogate"] = sur;
  write_file(c.out / "coercivity.json", j.dump(2) + "\n");
  write_file(c.out / "coercivity_spectra.csv", csv.str());
  return ok ? 0 : 1;
}

std::string run_csv_text(const RunResult& r) {
  std::ostringstream os;
  write_run_csv(os, r.records);
  return os.str();
}

int run_evolve(const Config& c, std::ostream& out) {
  const auto res = run(c.run_config(c.alpha.front()));
  const auto s = summarize(res);
  write_file(c.out / "evolve.csv", run_csv_text(res));
  write_file(c.out / "evolve.json", summary_to_json(s) + "\n");
  out << std::setprecision(10) << "verdict = " << s.verdict << "\n";
  if (s.blowup_time) out << "extrapolated T = " << *s.blowup_time << "\n";
  if (!s.failure.empty()) out << "failure: " << s.failure << "\n";
  return s.failure.empty() ? 0 : 1;
}

int run_sweep(const Config& c, std::ostream& out) {
  std::vector<RunConfig> configs;
  for (double a : c.alpha) configs.push_back(c.run_config(a));
  const auto results = sweep(configs);
  json all = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto s = summarize(results[i]);
    write_file(c.out / ("sweep_" + std::to_string(i) + ".csv"), run_csv_text(results[i]));
    all.push_back(json::parse(summary_to_json(s)));
    out << std::setprecision(10) << "alpha = " << s.alpha << "  verdict = " << s.verdict << "\n";
    if (!s.failure.empty()) ok = false;
  }
  write_file(c.out / "sweep.json", all.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::constants: return "constants";
    case Command::weights: return "weights";
    case Command::coercivity: return "coercivity";
    case Command::evolve: return "evolve";
    case Command::sweep: return "sweep";
  }
  return "constants";
}

WeightParams Config::weight_params() const {
  WeightParams p;
  p.r1 = r1;
  p.k = k;
  p.k2 = k2;
  p.k1 = k1;
  return p;
}

RunConfig Config::run_config(double a) const {
  RunConfig rc;
  rc.alpha = a;
  rc.dt = dt;
  rc.tau_max = tau_max;
  rc.scheme = time_scheme;
  rc.r_max = r_max;
  rc.intervals = n;
  rc.grid = grid;
  rc.weights = weight_params();
  rc.initial = initial;
  rc.perturbation = perturbation;
  rc.truncation = truncation;
  rc.seed = seed;
  rc.record_every = record_every;
  rc.stop_when_relaxed = false;
  return rc;
}

void Config::validate() const {
  keyed("gamma", [&] { PotentialSpec{gamma}.validate(); });
  if (command == Command::evolve || command == Command::sweep) {
    if (gamma != -3.0) throw ConfigurationError("gamma: evolution supports only gamma = -3");
  }
  for (double a : alpha) keyed("alpha", [&] { validate_alpha(a); });
  if (!(k2 > 3.0 && k2 < 13.0)) {
    throw ConfigurationError("k2: must lie in (3, 13), got " + fmt17(k2));
  }
  keyed("r1", [&] { weight_params().validate(); });
  if (!(r_max > 0.0)) throw ConfigurationError("r_max: must be positive");
  if (n < kMinIntervals) throw ConfigurationError("n: must be at least 64");
  if (n_modes < 3 || n_modes > n / 2) {
    throw ConfigurationError("n_modes: must lie in [3, n/2]");
  }
  if (command == Command::evolve || command == Command::sweep) {
    for (double a : alpha) keyed("dt", [&] { run_config(a).validate(); });
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(Config& config, const std::string& key, const std::string& value) {
  for (const auto& [name, set] : setters()) {
    if (name == key) {
      set(config, key, value);
      return;
    }
  }
  throw ConfigurationError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigurationError("config: cannot open " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  const auto& keys = config_keys();
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError(path.string() + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigurationError(path.string() + ":" + std::to_string(lineno) +
                               ": unknown config key '" + key + "'");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::optional<Config> parse_config(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Radial Landau-Coulomb lab under dynamic rescaling"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::constants, "Normalization constants C1, C2 and sigma at the Maxwellian"},
      {Command::weights, "Weight family (eta, rho, q, rho2, W) and its certificate"},
      {Command::coercivity, "Constrained Rayleigh-Ritz gaps and the local gap surrogate"},
      {Command::evolve, "One rescaled run for the first alpha"},
      {Command::sweep,
       "Concurrent runs over the alpha list (LANDAU_THREADS caps concurrency). Verdicts: "
       "blowup needs c_omega < 0 and ratio > 5 after a burn-in of 10% of tau_max, and an "
       "extrapolated remainder of t_phys below 5%; relaxation needs E2 non-increasing "
       "after burn-in and a final E2 at most 1e-6 of the initial value"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), help);
    sub->add_option("--config", config_path, "File of 'key = value' lines");
    for (const auto& key : config_keys()) {
      sub->add_option(flag_name(key), flag_values[key], key);
    }
    subs.push_back(sub);
  }
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigurationError(e.what());
  }
  Config config;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) config.command = commands[i].first;
  }
  CLI::App* active = subs[static_cast<std::size_t>(config.command)];
  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config_file(config_path)) {
      apply_setting(config, key, value);
    }
  }
  for (const auto& key : config_keys()) {
    if (active->get_option(flag_name(key))->count() > 0) {
      apply_setting(config, key, flag_values[key]);
    }
  }
  config.validate();
  return config;
}

RunSummary summarize(const RunResult& r) {
  RunSummary s;
  s.alpha = r.config.alpha;
  s.verdict = std::string(to_string(r.verdict));
  s.blowup_time = r.blowup_time;
  s.decay_rate = r.decay_rate;
  s.min_ratio = r.min_ratio;
  s.max_moment_drift = r.max_moment_drift;
  if (!r.records.empty()) {
    s.tau_end = r.records.back().tau;
    s.t_phys_end = r.records.back().t_phys;
    s.e2_end = r.records.back().e2;
  }
  s.records = r.records.size();
  s.failure = r.failure;
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  json j{{"alpha", s.alpha},
         {"verdict", s.verdict},
         {"decay_rate", s.decay_rate},
         {"min_ratio", s.min_ratio},
         {"max_moment_drift", s.max_moment_drift},
         {"tau_end", s.tau_end},
         {"t_phys_end", s.t_phys_end},
         {"e2_end", number_or_null(s.e2_end)},
         {"records", s.records},
         {"failure", s.failure}};
  j["extrapolated_T"] = s.blowup_time ? json(*s.blowup_time) : json(nullptr);
  return j.dump(2);
}

RunSummary summary_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("summary JSON: ") + e.what());
  }
  RunSummary s;
  try {
    s.alpha = j.at("alpha").get<double>();
    s.verdict = j.at("verdict").get<std::string>();
    if (!j.at("extrapolated_T").is_null()) s.blowup_time = j.at("extrapolated_T").get<double>();
    s.decay_rate = j.at("decay_rate").get<double>();
    s.min_ratio = j.at("min_ratio").get<double>();
    s.max_moment_drift = j.at("max_moment_drift").get<double>();
    s.tau_end = j.at("tau_end").get<double>();
    s.t_phys_end = j.at("t_phys_end").get<double>();
    s.e2_end = j.at("e2_end").is_null() ? std::nan("") : j.at("e2_end").get<double>();
    s.records = j.at("records").get<std::size_t>();
    s.failure = j.at("failure").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("summary JSON: ") + e.what());
  }
  return s;
}

void write_run_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "tau,t_phys,c_l,c_omega,ratio,E2,D2,E2_over_alpha_minus_1,mass_phys,energy_phys,"
        "reprojection_magnitude\n";
  for (const auto& r : records) {
    os << fmt17(r.tau) << ',' << fmt17(r.t_phys) << ',' << fmt17(r.c_l) << ','
       << fmt17(r.c_omega) << ',' << fmt17(r.ratio) << ',' << fmt17(r.e2) << ',' << fmt17(r.d2)
       << ',' << fmt17(r.e2_over_alpha_minus_1) << ',' << fmt17(r.mass_phys) << ','
       << fmt17(r.energy_phys) << ',' << fmt17(r.reprojection_magnitude) << '\n';
  }
}

int dispatch(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::constants: return run_constants(config, out);
      case Command::weights: return run_weights(config, out);
      case Command::coercivity: return run_coercivity(config, out);
      case Command::evolve: return run_evolve(config, out);
      case Command::sweep: return run_sweep(config, out);
    }
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<Config> config;
  try {
    config = parse_config(argc, argv, out);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  }
  if (!config) return 0;
  return dispatch(*config, out, err);
}

}  // namespace landau::cli
