#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mlh/commands.hpp"
#include "mlh/errors.hpp"
#include "mlh/expansion.hpp"
#include "mlh/medium_json.hpp"

using namespace mlh;
using nlohmann::json;

namespace {

const std::string kData = MLH_TEST_DATA;

json load(const std::string& name) {
  std::ifstream in(kData + "/" + name);
  return json::parse(in);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MLH_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mlh_test_commands";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_job_config(load("brownian.json"));
  CHECK(cfg.seed == 42);
  CHECK(cfg.initial_data->order() == 3);
  CHECK(cfg.compare->routes.size() == 3);
  CHECK(parse_job_config(load("brownian.json"), 9).seed == 9);
  CHECK(parse_job_config(load("brownian.json"), 9).config_hash() != cfg.config_hash());
  CHECK(parse_job_config(load("brownian.json")).config_hash() == cfg.config_hash());
  CHECK(cfg.metadata_line().rfind("# mlh ", 0) == 0);
  CHECK(cfg.metadata_line().find("seed=42") != std::string::npos);

  auto j = load("brownian.json");
  j["typo"] = 1;
  CHECK_THROWS_AS(parse_job_config(j), ConfigError);
  j = load("brownian.json");
  j["simulate"]["n_pathz"] = 1;
  CHECK_THROWS_AS(parse_job_config(j), ConfigError);
  j = load("brownian.json");
  j["simulate"]["n_paths"] = 0;
  CHECK_THROWS_AS(parse_job_config(j), ConfigError);
  j = load("brownian.json");
  j["initial_data"]["pieces"][1] = {1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(parse_job_config(j), ConfigError);
  j = load("generic.json");
  j["kernel"]["form"] = "two_interface";
  CHECK_THROWS_AS(parse_job_config(j), MatchingConditionError);
  CHECK_THROWS_AS(load_job_config(kData + "/malformed.json"), ConfigError);
}

TEST_CASE("kernel table on the Brownian medium is Gaussian") {
  const auto cfg = parse_job_config(load("brownian.json"));
  std::ostringstream os;
  CHECK(cmd_kernel(cfg, os) == kExitOk);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == cfg.metadata_line());
  std::getline(in, line);
  CHECK(line == "t,x,y,density,form");
  int rows = 0;
  while (std::getline(in, line)) {
    double t, x, y, d;
    char form[64];
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%63s", &t, &x, &y, &d, form) == 5);
    CHECK(d == doctest::Approx(std::exp(-(x - y) * (x - y) / (2 * t)) / std::sqrt(2 * std::numbers::pi * t)).epsilon(1e-14));
    CHECK(std::string(form) == "two_interface_special");
    ++rows;
  }
  CHECK(rows == 2 * 3 * 5);
}

TEST_CASE("expand table matches the library bit for bit") {
  const auto cfg = parse_job_config(load("generic.json"));
  std::ostringstream coeffs, sums;
  CHECK(cmd_expand(cfg, coeffs, sums) == kExitOk);
  const auto params = to_sde_params(cfg.medium);
  const auto r = expand_u(params, *cfg.initial_data, 1.0, 1e-4);
  CHECK(coeffs.str().find("1,xa,2," + format_double(r.coefficients[2]) + "\n") != std::string::npos);
  CHECK(coeffs.str().find("0,x0,0,") != std::string::npos);
  CHECK(sums.str().find("1,0.001," + format_double(r.partial_sum_at(1e-3)) + "\n") != std::string::npos);

  auto j = load("generic.json");
  j["initial_data"]["pieces"] = {{1}, {1}, {1}};
  const auto one = parse_job_config(j);
  std::ostringstream c1, s1;
  cmd_expand(one, c1, s1);
  CHECK(c1.str().find("-0.5,interior_left,0,1\n-0.5,interior_left,1,0\n") != std::string::npos);
}

TEST_CASE("simulate summary") {
  const auto cfg = parse_job_config(load("generic.json"));
  std::ostringstream a, b, paths;
  cmd_simulate(cfg, a, &paths);
  cmd_simulate(cfg, b, nullptr);
  CHECK(a.str() == b.str());
  const auto s = json::parse(a.str());
  CHECK(s["seed"] == 3);
  CHECK(s["n_paths"] == 20000);
  CHECK(paths.str().find("path_id,t,x,scheme\n") != std::string::npos);

  auto j = load("generic.json");
  j["initial_data"]["pieces"] = {{1}, {1}, {1}};
  std::ostringstream c;
  cmd_simulate(parse_job_config(j), c, nullptr);
  const auto sc = json::parse(c.str());
  CHECK(sc["estimate"] == 1.0);
  CHECK(sc["std_error"] == 0.0);

  // MC within 3 standard errors of the expansion at small T.
  const auto params = to_sde_params(cfg.medium);
  const double e = expand_u(params, *cfg.initial_data, 0.5, 0.01).partial_sum;
  CHECK(std::abs(s["estimate"].get<double>() - e) < 3 * s["std_error"].get<double>());
}

TEST_CASE("solve-pde table") {
  const auto cfg = parse_job_config(load("brownian.json"));
  std::ostringstream out, warn;
  CHECK(cmd_solve_pde(cfg, out, warn) == kExitOk);
  CHECK(warn.str().empty());
  CHECK(out.str().find("\nt,x,u\n") != std::string::npos);
  // A homogeneous medium with one polynomial never warns; the generic medium on a short domain does.
  auto j = load("generic.json");
  j["pde"] = {{"t", {0.5}}, {"domain", {-0.5, 1.5}}, {"n_cells", 100}};
  std::ostringstream o2, w2;
  cmd_solve_pde(parse_job_config(j), o2, w2);
  CHECK(w2.str().find("boundary influence") != std::string::npos);
}

TEST_CASE("compare reports") {
  const auto brownian = parse_job_config(load("brownian.json"));
  std::ostringstream rb;
  CHECK(cmd_compare(brownian, rb) == kExitOk);
  for (const auto& pair : json::parse(rb.str())["pairs"]) CHECK(pair["residual"].get<double>() < 1e-6);

  std::ostringstream rm;
  CHECK(cmd_compare(parse_job_config(load("matched.json")), rm) == kExitOk);
  CHECK(json::parse(rm.str())["pass"] == true);

  auto j = load("brownian.json");
  j["compare"]["floor"] = 0.0;
  j["compare"]["extrapolate"] = false;
  j["compare"]["dx"] = 0.05;
  j["compare"]["routes"] = {"expansion", "closed_form"};
  j["initial_data"]["pieces"] = {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}};
  std::ostringstream rf;
  CHECK(cmd_compare(parse_job_config(j), rf) == kExitTolerance);
  CHECK(json::parse(rf.str())["pass"] == false);
}

TEST_CASE("CLI exit codes and reproducibility") {
  const auto out1 = scratch("compare1.json");
  const auto out2 = scratch("compare2.json");
  CHECK(run_cli("compare --config " + kData + "/generic.json --out " + out1.string()) == 0);
  CHECK(run_cli("compare --config " + kData + "/generic.json --out " + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(run_cli("compare --config " + kData + "/generic.json --seed 4 --quiet --out " + out2.string()) == 0);
  CHECK(slurp(out1) != slurp(out2));

  CHECK(run_cli("kernel --config " + kData + "/malformed.json") == 2);
  CHECK(run_cli("kernel --config " + kData + "/does_not_exist.json") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("kernel") == 2);

  auto j = load("generic.json");
  j["kernel"]["form"] = "two_interface";
  const auto bad = scratch("unmatched.json");
  std::ofstream(bad) << j.dump();
  CHECK(run_cli("kernel --config " + bad.string()) == 2);
  const std::string msg = scratch("msg.txt").string();
  CHECK(std::system((std::string(MLH_CLI_PATH) + " kernel --config " + bad.string() + " 2> " + msg).c_str()) != 0);
  CHECK(slurp(msg).find("rho_2 sqrt(a_2) = rho_3 sqrt(a_3)") != std::string::npos);

  j = load("generic.json");
  j["expand"]["x"] = {0.5};
  j["initial_data"] = {{"order", 3}, {"pieces", {{1}, {1}, {1}}}};
  const auto fine = scratch("fine.json");
  std::ofstream(fine) << j.dump();
  const auto table = scratch("expand.csv");
  CHECK(run_cli("expand --config " + fine.string() + " --out " + table.string()) == 0);
  CHECK(std::filesystem::exists(scratch("expand.partial_sums.csv")));

  const auto simulate_out = scratch("sim.json");
  CHECK(run_cli("simulate --config " + kData + "/generic.json --out " + simulate_out.string()) == 0);
  CHECK(std::filesystem::exists(scratch("sim.paths.csv")));
}
