#include "mlh/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mlh/kernels.hpp"

namespace mlh {

namespace {

constexpr int kBisectionMaxSteps = 200;
constexpr double kBisectionTol = 1e-12;
constexpr int kHittingSubsteps = 64;

void check_time(double t, const char* what) {
  if (!(std::isfinite(t) && t > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Number of equal steps covering [0, T] with each step at most dt_cap.
std::uint64_t step_count(double T, double dt_cap) {
  const double n = std::ceil(T / dt_cap - 1e-12);
  return static_cast<std::uint64_t>(std::max(1.0, n));
}

double path_value(const SdeParams& params, const PiecewiseInitialData& h, double x0, double T,
                  const SamplerConfig& cfg, std::uint64_t path) {
  return h.value(simulate_terminal(params, x0, T, cfg, path), params);
}

Estimate summarize(std::span<const double> values, std::uint64_t seed) {
  const auto n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

// Whether the interface-at-0 diffusion started at x0 reaches level a before t.
// Skew BM is stepped exactly in scale coordinates; inside a step the crossing of
// the level uses the Brownian-bridge probability exp(-2 (L - z1)(L - z2) / h).
bool reaches_interface(const SingleInterface& d, double level, double x0, double t, Rng& rng) {
  const double h = t / kHittingSubsteps;
  const double target = d.scale(level);
  const double gamma = d.skew();
  double z = d.scale(x0);
  for (int i = 0; i < kHittingSubsteps; ++i) {
    const double next = sample_skew_bm(gamma, z, h, rng);
    if (next >= target) return true;
    const double cross = std::exp(-2.0 * (target - z) * (target - next) / h);
    if (rng.uniform() < cross) return true;
    z = next;
  }
  return false;
}

std::uint64_t hitting_stream(std::size_t t_index, std::uint64_t path) {
  return (static_cast<std::uint64_t>(t_index) << 40) ^ path;
}

void check_coupling_args(const SdeParams& params, double x0, std::span<const double> t_list,
                         std::uint64_t n_paths) {
  params.validate();
  if (!(x0 <= 0.5 * params.a)) throw std::invalid_argument("coupling_failure_rate needs x0 <= a/2");
  if (n_paths == 0) throw std::invalid_argument("coupling_failure_rate needs n_paths >= 1");
  for (double t : t_list) check_time(t, "coupling time");
}

}  // namespace

const char* to_string(StepScheme s) {
  switch (s) {
    case StepScheme::exact_single_0: return "exact_single_0";
    case StepScheme::exact_single_a: return "exact_single_a";
    case StepScheme::two_interface_closed_form: return "two_interface_closed_form";
  }
  return "?";
}

void SamplerConfig::validate() const {
  if (!(std::isfinite(dt_max) && dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(coupling_eps > 0.0 && coupling_eps < 1.0)) throw std::invalid_argument("coupling_eps must be in (0, 1)");
}

double sample_skew_bm(double gamma, double z0, double dt, Rng& rng) {
  // |Z| is reflected BM. Draw BM from |z0|; the path touched 0 if it ends below 0,
  // otherwise with the bridge probability exp(-2|z0|u/dt). After a touch the
  // excursion sign is + with probability (1 + gamma)/2.
  const double start = std::abs(z0);
  const double w = start + std::sqrt(dt) * rng.normal();
  double u = std::abs(w);
  bool touched = w <= 0.0;
  if (!touched) touched = start == 0.0 || rng.uniform() < std::exp(-2.0 * start * u / dt);
  if (!touched) return z0 > 0.0 ? u : -u;
  return rng.uniform() < 0.5 * (1.0 + gamma) ? u : -u;
}

double sample_single_interface_step(const SingleInterface& d, double x, double dt, Rng& rng) {
  check_time(dt, "step");
  return d.inverse_scale(sample_skew_bm(d.skew(), d.scale(x), dt, rng));
}

double sample_single_interface_by_inversion(const SingleInterface& d, double x, double dt, Rng& rng) {
  check_time(dt, "step");
  d.validate();
  const double target = rng.uniform();
  const double gamma = d.skew();
  const double z0 = d.scale(x);
  const double spread = 40.0 * std::sqrt(dt);
  double lo = z0 - spread;
  double hi = z0 + spread;
  auto cdf = [&](double z) { return skew_bm_cdf(gamma, dt, z0, z); };
  for (int i = 0; i < kBisectionMaxSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kBisectionTol * std::max(1.0, std::abs(mid))) return d.inverse_scale(mid);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  throw std::runtime_error("distribution inversion did not converge in 200 bisection steps");
}

double sample_two_interface(const SdeParams& params, double x, double t, Rng& rng) {
  check_time(t, "time");
  if (!params.matched()) {
    // Let the kernel module produce the diagnostic.
    (void)two_interface_cdf(params, t, x, x);
  }
  const ScaleFunctions sf(params);
  return sf.sigma(sample_skew_bm(params.skew_at_0(), sf.s(x), t, rng));
}

double coupling_step(const SdeParams& params, const SamplerConfig& cfg) {
  cfg.validate();
  const double top = std::max({params.p, params.q, params.r});
  const double c2 = 1.0 / (2.0 * top * top);
  const double half = 0.5 * params.a;
  const double bound = c2 * half * half / std::log(1.0 / cfg.coupling_eps);
  return std::min(cfg.dt_max, bound);
}

PathSample simulate_path(const SdeParams& params, double x0, double T, const SamplerConfig& cfg,
                         std::uint64_t path_id) {
  params.validate();
  check_time(T, "horizon T");
  if (!std::isfinite(x0)) throw std::invalid_argument("start point is not finite");
  Rng rng(cfg.seed, path_id);
  PathSample out{{0.0}, {x0}, {}, cfg.seed, path_id};

  if (cfg.closed_form_when_matched && params.matched()) {
    cfg.validate();
    out.times.push_back(T);
    out.states.push_back(sample_two_interface(params, x0, T, rng));
    out.schemes.push_back(StepScheme::two_interface_closed_form);
    return out;
  }

  const auto n = step_count(T, coupling_step(params, cfg));
  const double dt = T / static_cast<double>(n);
  const auto at0 = SingleInterface::at_zero(params);
  const auto ata = SingleInterface::at_a(params);
  out.times.reserve(n + 1);
  out.states.reserve(n + 1);
  out.schemes.reserve(n);
  double x = x0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const bool near_zero = x <= 0.5 * params.a;
    x = sample_single_interface_step(near_zero ? at0 : ata, x, dt, rng);
    out.times.push_back(i == n ? T : dt * static_cast<double>(i));
    out.states.push_back(x);
    out.schemes.push_back(near_zero ? StepScheme::exact_single_0 : StepScheme::exact_single_a);
  }
  return out;
}

double simulate_terminal(const SdeParams& params, double x0, double T, const SamplerConfig& cfg,
                         std::uint64_t path_id) {
  params.validate();
  check_time(T, "horizon T");
  Rng rng(cfg.seed, path_id);
  if (cfg.closed_form_when_matched && params.matched()) {
    cfg.validate();
    return sample_two_interface(params, x0, T, rng);
  }
  const auto n = step_count(T, coupling_step(params, cfg));
  const double dt = T / static_cast<double>(n);
  const auto at0 = SingleInterface::at_zero(params);
  const auto ata = SingleInterface::at_a(params);
  double x = x0;
  for (std::uint64_t i = 0; i < n; ++i) {
    x = sample_single_interface_step(x <= 0.5 * params.a ? at0 : ata, x, dt, rng);
  }
  return x;
}

Estimate estimate_expectation(const SdeParams& params, const PiecewiseInitialData& h, double x0, double T,
                              const SamplerConfig& cfg) {
  cfg.validate();
  if (cfg.n_paths == 0) throw std::invalid_argument("n_paths must be >= 1");
  std::vector<double> values(cfg.n_paths);
  const auto n = static_cast<std::int64_t>(cfg.n_paths);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    values[i] = path_value(params, h, x0, T, cfg, static_cast<std::uint64_t>(i));
  }
  return summarize(values, cfg.seed);
}

Estimate estimate_expectation_serial(const SdeParams& params, const PiecewiseInitialData& h, double x0,
                                     double T, const SamplerConfig& cfg) {
  cfg.validate();
  if (cfg.n_paths == 0) throw std::invalid_argument("n_paths must be >= 1");
  std::vector<double> values(cfg.n_paths);
  for (std::uint64_t i = 0; i < cfg.n_paths; ++i) values[i] = path_value(params, h, x0, T, cfg, i);
  return summarize(values, cfg.seed);
}

std::vector<double> coupling_failure_rate(const SdeParams& params, double x0, std::span<const double> t_list,
                                          std::uint64_t n_paths, std::uint64_t seed) {
  check_coupling_args(params, x0, t_list, n_paths);
  const auto d = SingleInterface::at_zero(params);
  std::vector<double> out;
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    std::vector<unsigned char> hit(n_paths);
    const auto n = static_cast<std::int64_t>(n_paths);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      Rng rng(seed, hitting_stream(ti, static_cast<std::uint64_t>(i)));
      hit[i] = reaches_interface(d, params.a, x0, t_list[ti], rng) ? 1 : 0;
    }
    std::uint64_t count = 0;
    for (auto v : hit) count += v;
    out.push_back(static_cast<double>(count) / static_cast<double>(n_paths));
  }
  return out;
}

std::vector<double> coupling_failure_rate_serial(const SdeParams& params, double x0,
                                                 std::span<const double> t_list, std::uint64_t n_paths,
                                                 std::uint64_t seed) {
  check_coupling_args(params, x0, t_list, n_paths);
  const auto d = SingleInterface::at_zero(params);
  std::vector<double> out;
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n_paths; ++i) {
      Rng rng(seed, hitting_stream(ti, i));
      if (reaches_interface(d, params.a, x0, t_list[ti], rng)) ++count;
    }
    out.push_back(static_cast<double>(count) / static_cast<double>(n_paths));
  }
  return out;
}

void write_paths_csv(std::ostream& os, std::span<const PathSample> paths) {
  os << "path_id,t,x,scheme\n";
  const auto old_precision = os.precision(17);
  for (const auto& path : paths) {
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      os << path.path_id << ',' << path.times[i] << ',' << path.states[i] << ','
         << (i == 0 ? "initial" : to_string(path.schemes[i - 1])) << '\n';
    }
  }
  os.precision(old_precision);
}

int apply_thread_cap_from_env() {
  if (const char* env = std::getenv("MLH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) omp_set_num_threads(static_cast<int>(std::min<long>(cap, omp_get_max_threads())));
  }
  return omp_get_max_threads();
}

}  // namespace mlh
