#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlh/initial_data.hpp"
#include "mlh/kernels.hpp"
#include "mlh/medium.hpp"
#include "mlh/montecarlo.hpp"

namespace mlh {

struct KernelJob {
  KernelForm form = KernelForm::two_interface_special;
  std::optional<double> gamma;  // skew_bm only
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct ExpandJob {
  std::vector<double> xs;
  std::vector<double> times;
};

struct SimulateJob {
  double x0 = 0.0;
  double T = 0.0;
  SamplerConfig sampler;
  std::uint64_t dump_paths = 0;
  std::string paths_file;
};

struct PdeJob {
  std::vector<double> times;
  std::vector<double> xs;  // empty: emit every cell centre
  std::optional<double> dx;
  std::optional<std::uint64_t> n_cells;
  std::optional<std::pair<double, double>> domain;
  double dt = 1e-5;
  bool extrapolate = false;
};

enum class Route { expansion, mc, pde, closed_form };
const char* to_string(Route r);

struct CompareJob {
  std::vector<double> xs;
  double T = 0.0;
  std::vector<Route> routes;
  double mc_sigmas = 3.0;
  double floor = 1e-6;
  SamplerConfig sampler;
  double dx = 1e-3;
  double dt = 1e-5;
  bool extrapolate = false;
};

/**
 * A validated job description. Sections are optional; a command whose section
 * is missing fails with ConfigError. Unknown keys anywhere are rejected.
 */
struct JobConfig {
  nlohmann::json source;  // as parsed, with the effective seed written back
  PhysicalMedium medium;
  std::optional<PiecewiseInitialData> initial_data;
  std::uint64_t seed = 1;
  std::optional<KernelJob> kernel;
  std::optional<ExpandJob> expand;
  std::optional<SimulateJob> simulate;
  std::optional<PdeJob> pde;
  std::optional<CompareJob> compare;

  /// FNV-1a 64 of source.dump().
  std::uint64_t config_hash() const;
  /// "# mlh <version> config_hash=<hex> seed=<seed>"
  std::string metadata_line() const;
};

/// Throws ConfigError (or the module's own validation error) on any invalid field.
JobConfig parse_job_config(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {});
/// Reads and parses a JSON file; JSON syntax errors become ConfigError with the parser diagnostic.
JobConfig load_job_config(const std::string& path, std::optional<std::uint64_t> seed_override = {});

PiecewiseInitialData initial_data_from_json(const nlohmann::json& j);

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitUsage = 2;

/// CSV `t,x,y,density,form`.
int cmd_kernel(const JobConfig& cfg, std::ostream& out);
/// CSV `x,branch,k,b_k` to `coefficients`, CSV `x,t,partial_sum` to `partial_sums`.
int cmd_expand(const JobConfig& cfg, std::ostream& coefficients, std::ostream& partial_sums);
/// Summary JSON; when `paths` is non-null and dump_paths > 0 the first paths go there as CSV.
int cmd_simulate(const JobConfig& cfg, std::ostream& summary, std::ostream* paths);
/// CSV `t,x,u`; boundary-influence warnings go to `warnings`.
int cmd_solve_pde(const JobConfig& cfg, std::ostream& out, std::ostream& warnings);
/// JSON report of per-point route values and pairwise residuals; returns kExitTolerance if any pair fails.
int cmd_compare(const JobConfig& cfg, std::ostream& report);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace mlh
