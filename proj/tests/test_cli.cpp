#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "landau/cli.hpp"
#include "landau/errors.hpp"

using namespace landau;
using namespace landau::cli;
namespace fs = std::filesystem;

namespace {

struct Args {
  std::vector<std::string> items;
  std::vector<const char*> ptrs;
  explicit Args(std::vector<std::string> v) : items(std::move(v)) {
    ptrs.push_back("landau");
    for (const auto& s : items) ptrs.push_back(s.c_str());
  }
  int argc() const { return static_cast<int>(ptrs.size()); }
  const char* const* argv() const { return ptrs.data(); }
};

Config parse(std::vector<std::string> v) {
  Args a(std::move(v));
  std::ostringstream out;
  auto c = parse_config(a.argc(), a.argv(), out);
  REQUIRE(c.has_value());
  return *c;
}

int run_main(std::vector<std::string> v, std::string* err_text = nullptr) {
  Args a(std::move(v));
  std::ostringstream out, err;
  const int code = main_entry(a.argc(), a.argv(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("landau_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("defaults and subcommand selection") {
  const auto c = parse({"weights"});
  CHECK(c.command == Command::weights);
  CHECK(c.r1 == 4);
  CHECK(c.k2 == 12.5);
  CHECK(c.n == 1024);
  CHECK(c.alpha == std::vector<double>{1.0});
  for (auto cmd : {Command::constants, Command::weights, Command::coercivity, Command::evolve,
                   Command::sweep}) {
    CHECK(parse({std::string(to_string(cmd))}).command == cmd);
  }
}

TEST_CASE("flag beats file beats default") {
  const auto dir = scratch("precedence");
  const auto cfg = write_config(dir, "# run\nr1 = 6\nk2 = 10  # inline\n\nn = 512\n");
  const auto from_file = parse({"weights", "--config", cfg.string()});
  CHECK(from_file.r1 == 6);
  CHECK(from_file.k2 == 10.0);
  CHECK(from_file.n == 512);
  CHECK(from_file.k == 2.5);
  const auto flagged = parse({"weights", "--config", cfg.string(), "--r1", "5", "--n-modes", "40"});
  CHECK(flagged.r1 == 5);
  CHECK(flagged.k2 == 10.0);
  CHECK(flagged.n_modes == 40);
}

TEST_CASE("config file errors name the line") {
  const auto dir = scratch("badfile");
  const auto cfg = write_config(dir, "r1 = 4\n\nbogus = 3\n");
  try {
    read_config_file(cfg);
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(cfg.string() + ":3") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }
  const auto cfg2 = write_config(dir, "r1 4\n");
  CHECK_THROWS_AS(read_config_file(cfg2), ConfigurationError);
  CHECK_THROWS_AS(read_config_file(dir / "missing.cfg"), ConfigurationError);
}

TEST_CASE("setting validation") {
  Config c;
  CHECK_THROWS_AS(apply_setting(c, "nope", "1"), ConfigurationError);
  CHECK_THROWS_AS(apply_setting(c, "k2", "abc"), ConfigurationError);
  CHECK_THROWS_AS(apply_setting(c, "n", "-4"), ConfigurationError);
  apply_setting(c, "alpha", "1.01, 1.02,1.04");
  CHECK(c.alpha == std::vector<double>{1.01, 1.02, 1.04});
  apply_setting(c, "time_scheme", "strang");
  CHECK(c.time_scheme == TimeScheme::strang);
  c.k2 = 13.0;
  try {
    c.validate();
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).rfind("k2: must lie in (3, 13)", 0) == 0);
  }
  for (const auto& key : config_keys()) CHECK(key.find('-') == std::string::npos);
}

TEST_CASE("exit codes") {
  std::string err;
  CHECK(run_main({"weights", "--k2", "14"}, &err) == 2);
  CHECK(err.find("k2: must lie in (3, 13)") != std::string::npos);
  CHECK(run_main({"frobnicate"}) == 2);
  CHECK(run_main({"weights", "--unknown-flag", "1"}) == 2);
  CHECK(run_main({"weights", "--help"}) == 0);
  const auto dir = scratch("constants");
  CHECK(run_main({"constants", "--n", "256", "--out", dir.string()}) == 0);
  REQUIRE(fs::exists(dir / "constants.json"));
  const auto j = nlohmann::json::parse(std::ifstream(dir / "constants.json"));
  CHECK(j.contains("C1"));
  // The default certificate fails its far-field W check.
  CHECK(run_main({"weights", "--n", "256", "--out", dir.string()}) == 1);
  CHECK(fs::exists(dir / "weights_certificate.json"));
}

TEST_CASE("summary JSON round trip") {
  RunSummary s;
  s.alpha = 1.05;
  s.verdict = "blowup";
  s.blowup_time = 31.25;
  s.decay_rate = 0.0123456789012345;
  s.min_ratio = 6.875;
  s.max_moment_drift = 3.5e-15;
  s.tau_end = 300.0;
  s.t_phys_end = 31.2;
  s.e2_end = 1.5e20;
  s.records = 6001;
  s.failure = "";
  CHECK(summary_from_json(summary_to_json(s)) == s);
  s.blowup_time.reset();
  s.failure = "negative value";
  CHECK(summary_from_json(summary_to_json(s)) == s);
  CHECK_THROWS_AS(summary_from_json("{"), DataError);
  CHECK_THROWS_AS(summary_from_json("{\"alpha\": 1}"), DataError);
}

TEST_CASE("run CSV layout") {
  StepRecord r;
  r.tau = 0.1;
  r.e2 = 1.0 / 3.0;
  std::ostringstream os;
  write_run_csv(os, {r, r});
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  CHECK(header ==
        "tau,t_phys,c_l,c_omega,ratio,E2,D2,E2_over_alpha_minus_1,mass_phys,energy_phys,"
        "reprojection_magnitude");
  std::getline(is, row);
  CHECK(std::count(row.begin(), row.end(), ',') == 10);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("evolve writes identical output on repeat") {
  const auto a = scratch("evolve_a"), b = scratch("evolve_b");
  const std::vector<std::string> common{"evolve", "--alpha", "1.05", "--n", "256", "--dt", "0.1",
                                        "--tau-max", "0.5"};
  auto with_out = [&](const fs::path& p) {
    auto v = common;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(run_main(with_out(a)) == 0);
  REQUIRE(run_main(with_out(b)) == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(a / "evolve.csv") == slurp(b / "evolve.csv"));
  CHECK(slurp(a / "evolve.json") == slurp(b / "evolve.json"));
  const auto s = summary_from_json(slurp(a / "evolve.json"));
  CHECK(s.records == 6);
  CHECK(s.alpha == 1.05);
}
