#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlh/initial_data.hpp"
#include "mlh/medium.hpp"
#include "mlh/rng.hpp"

namespace mlh {

enum class StepScheme { exact_single_0, exact_single_a, two_interface_closed_form };
const char* to_string(StepScheme s);

struct SamplerConfig {
  double dt_max = 1e-3;
  double coupling_eps = 1e-8;
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;
  /// For beta = 1 - q/r, draw the terminal state in one shot from the two-interface kernel.
  bool closed_form_when_matched = false;

  /// Throws std::invalid_argument unless dt_max > 0 and coupling_eps in (0, 1).
  void validate() const;
};

struct PathSample {
  std::vector<double> times;
  std::vector<double> states;
  std::vector<StepScheme> schemes;  // one per step
  std::uint64_t seed;
  std::uint64_t path_id;
};

struct Estimate {
  double mean;
  double std_error;
  std::uint64_t n_paths;
  std::uint64_t seed;
};

/// Exact draw of skew Brownian motion (symmetric-local-time coefficient gamma) after time dt from z0.
double sample_skew_bm(double gamma, double z0, double dt, Rng& rng);

/// Exact draw from the one-interface transition density: skew BM in scale coordinates, mapped back.
double sample_single_interface_step(const SingleInterface& d, double x, double dt, Rng& rng);

/// Same law by inverting the closed-form distribution function with bisection
/// (tolerance 1e-12, at most 200 halvings; throws std::runtime_error otherwise).
double sample_single_interface_by_inversion(const SingleInterface& d, double x, double dt, Rng& rng);

/// Exact one-shot draw from the two-interface kernel; requires beta = 1 - q/r.
double sample_two_interface(const SdeParams& params, double x, double t, Rng& rng);

/// Largest step for which the nearest-interface leak bound exp(-c2 (a/2)^2 / dt) stays below
/// cfg.coupling_eps, with c2 = 1 / (2 max(p, q, r)^2), capped by cfg.dt_max.
double coupling_step(const SdeParams& params, const SamplerConfig& cfg);

/// One trajectory on [0, T]. Steps from x <= a/2 use the interface-at-0 law, others the interface-at-a law.
PathSample simulate_path(const SdeParams& params, double x0, double T, const SamplerConfig& cfg,
                         std::uint64_t path_id = 0);

/// Terminal state of path `path_id`; identical to simulate_path(...).states.back().
double simulate_terminal(const SdeParams& params, double x0, double T, const SamplerConfig& cfg,
                         std::uint64_t path_id);

/// E[h(Y_T^{x0})] over cfg.n_paths paths. OpenMP over paths; the reduction is
/// done in path order so the result is bit-identical to the serial version.
Estimate estimate_expectation(const SdeParams& params, const PiecewiseInitialData& h, double x0, double T,
                              const SamplerConfig& cfg);
Estimate estimate_expectation_serial(const SdeParams& params, const PiecewiseInitialData& h, double x0,
                                     double T, const SamplerConfig& cfg);

/// Frequency of {interface-at-0 diffusion from x0 reaches a before t} for each t; x0 <= a/2.
std::vector<double> coupling_failure_rate(const SdeParams& params, double x0, std::span<const double> t_list,
                                          std::uint64_t n_paths, std::uint64_t seed);
std::vector<double> coupling_failure_rate_serial(const SdeParams& params, double x0,
                                                 std::span<const double> t_list, std::uint64_t n_paths,
                                                 std::uint64_t seed);

/// CSV with header `path_id,t,x,scheme`; the scheme column names the step that ends at that row.
void write_paths_csv(std::ostream& os, std::span<const PathSample> paths);

/// Applies the MLH_THREADS cap to the OpenMP thread count; returns the count in effect.
int apply_thread_cap_from_env();

}  // namespace mlh
