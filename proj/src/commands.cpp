#include "mlh/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mlh/errors.hpp"
#include "mlh/expansion.hpp"
#include "mlh/medium_json.hpp"
#include "mlh/pde_oracle.hpp"
#include "mlh/quadrature.hpp"

namespace mlh {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

double number(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": \"" + key + "\" must be finite");
  return d;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

double required_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return number(j, key, where);
}

std::uint64_t count(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(where + ": \"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool flag_or(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + ": \"" + key + "\" must be true or false");
  return j.at(key).get<bool>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where, bool required = true) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(where + ": missing \"" + key + "\"");
    return {};
  }
  const auto& v = j.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where + ": \"" + key + "\" must contain only numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(where + ": \"" + key + "\" must be a number or an array of numbers");
  }
  for (double d : out) {
    if (!std::isfinite(d)) throw ConfigError(where + ": \"" + key + "\" must be finite");
  }
  if (required && out.empty()) throw ConfigError(where + ": \"" + key + "\" must not be empty");
  return out;
}

std::vector<double> positive_times(const json& j, const char* key, const std::string& where) {
  auto t = numbers(j, key, where);
  for (double v : t) {
    if (!(v > 0.0)) throw ConfigError(where + ": times must be positive");
  }
  return t;
}

void read_sampler(const json& j, SamplerConfig& s, std::uint64_t seed, const std::string& where) {
  s.seed = seed;
  s.dt_max = number_or(j, "dt_max", s.dt_max, where);
  s.coupling_eps = number_or(j, "coupling_eps", s.coupling_eps, where);
  if (j.contains("n_paths")) s.n_paths = count(j, "n_paths", where);
  s.closed_form_when_matched = flag_or(j, "closed_form_when_matched", s.closed_form_when_matched, where);
  if (s.n_paths == 0) throw ConfigError(where + ": n_paths must be >= 1");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

KernelJob parse_kernel(const json& j, const PhysicalMedium& m) {
  const std::string where = "kernel";
  reject_unknown_keys(j, {"form", "gamma", "t", "x", "y"}, "kernel");
  KernelJob k;
  if (j.contains("form")) {
    if (!j.at("form").is_string()) throw ConfigError("kernel: \"form\" must be a string");
    try {
      k.form = kernel_form_from_string(j.at("form").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("kernel: ") + e.what());
    }
  }
  if (j.contains("gamma")) k.gamma = number(j, "gamma", where);
  if (k.form == KernelForm::skew_bm && !k.gamma) throw ConfigError("kernel: form skew_bm needs \"gamma\"");
  k.times = positive_times(j, "t", where);
  k.xs = numbers(j, "x", where);
  k.ys = numbers(j, "y", where);
  // The closed-form condition is part of the job's validity.
  if (k.form == KernelForm::two_interface_special || k.form == KernelForm::m_symmetric) {
    if (!m.matched()) {
      const auto p = to_sde_params(m);
      kernel_two_interface(p, k.times.front(), k.xs.front(), k.ys.front());
    }
  }
  return k;
}

ExpandJob parse_expand(const json& j) {
  reject_unknown_keys(j, {"x", "t"}, "expand");
  return {numbers(j, "x", "expand"), positive_times(j, "t", "expand")};
}

SimulateJob parse_simulate(const json& j, std::uint64_t seed) {
  const std::string where = "simulate";
  reject_unknown_keys(j, {"x0", "T", "n_paths", "dt_max", "coupling_eps", "closed_form_when_matched", "dump_paths",
                          "paths_file"},
                      "simulate");
  SimulateJob s;
  s.x0 = required_number(j, "x0", where);
  s.T = required_number(j, "T", where);
  if (!(s.T > 0.0)) throw ConfigError("simulate: T must be positive");
  read_sampler(j, s.sampler, seed, where);
  if (j.contains("dump_paths")) s.dump_paths = count(j, "dump_paths", where);
  if (j.contains("paths_file")) {
    if (!j.at("paths_file").is_string()) throw ConfigError("simulate: \"paths_file\" must be a string");
    s.paths_file = j.at("paths_file").get<std::string>();
  }
  s.dump_paths = std::min(s.dump_paths, s.sampler.n_paths);
  return s;
}

PdeJob parse_pde(const json& j) {
  const std::string where = "pde";
  reject_unknown_keys(j, {"t", "x", "dx", "n_cells", "domain", "dt", "extrapolate"}, "pde");
  PdeJob p;
  p.times = positive_times(j, "t", where);
  if (!std::is_sorted(p.times.begin(), p.times.end())) throw ConfigError("pde: \"t\" must be increasing");
  p.xs = numbers(j, "x", where, false);
  if (j.contains("dx")) {
    p.dx = number(j, "dx", where);
    if (!(*p.dx > 0.0)) throw ConfigError("pde: dx must be positive");
  }
  if (j.contains("n_cells")) {
    p.n_cells = count(j, "n_cells", where);
    if (*p.n_cells < 3) throw ConfigError("pde: n_cells must be >= 3");
  }
  if (p.dx && p.n_cells) throw ConfigError("pde: give either dx or n_cells, not both");
  if (j.contains("domain")) {
    const auto d = numbers(j, "domain", where);
    if (d.size() != 2 || !(d[0] < d[1])) throw ConfigError("pde: \"domain\" must be [lo, hi] with lo < hi");
    p.domain = std::make_pair(d[0], d[1]);
  }
  if (p.xs.empty() && !p.domain) throw ConfigError("pde: need \"x\" or \"domain\"");
  p.dt = number_or(j, "dt", p.dt, where);
  if (!(p.dt > 0.0)) throw ConfigError("pde: dt must be positive");
  p.extrapolate = flag_or(j, "extrapolate", false, where);
  return p;
}

Route route_from_string(const std::string& s) {
  if (s == "expansion") return Route::expansion;
  if (s == "mc") return Route::mc;
  if (s == "pde") return Route::pde;
  if (s == "closed_form") return Route::closed_form;
  throw ConfigError("compare: unknown route \"" + s + "\" (expansion, mc, pde, closed_form)");
}

CompareJob parse_compare(const json& j, const PhysicalMedium& m, std::uint64_t seed) {
  const std::string where = "compare";
  reject_unknown_keys(j, {"x", "T", "routes", "mc_sigmas", "floor", "n_paths", "dt_max", "coupling_eps",
                          "closed_form_when_matched", "dx", "dt", "extrapolate"},
                      "compare");
  CompareJob c;
  c.xs = numbers(j, "x", where);
  c.T = required_number(j, "T", where);
  if (!(c.T > 0.0)) throw ConfigError("compare: T must be positive");
  if (j.contains("routes")) {
    if (!j.at("routes").is_array()) throw ConfigError("compare: \"routes\" must be an array of strings");
    for (const auto& r : j.at("routes")) {
      if (!r.is_string()) throw ConfigError("compare: \"routes\" must be an array of strings");
      c.routes.push_back(route_from_string(r.get<std::string>()));
    }
  } else {
    c.routes = {Route::expansion, Route::mc, Route::pde};
    if (m.matched()) c.routes.push_back(Route::closed_form);
  }
  std::sort(c.routes.begin(), c.routes.end());
  c.routes.erase(std::unique(c.routes.begin(), c.routes.end()), c.routes.end());
  if (c.routes.size() < 2) throw ConfigError("compare: need at least two distinct routes");
  if (std::find(c.routes.begin(), c.routes.end(), Route::closed_form) != c.routes.end() && !m.matched()) {
    const auto p = to_sde_params(m);
    kernel_two_interface(p, c.T, c.xs.front(), c.xs.front());
  }
  c.mc_sigmas = number_or(j, "mc_sigmas", c.mc_sigmas, where);
  c.floor = number_or(j, "floor", c.floor, where);
  if (!(c.mc_sigmas > 0.0) || !(c.floor >= 0.0)) throw ConfigError("compare: mc_sigmas > 0 and floor >= 0 required");
  read_sampler(j, c.sampler, seed, where);
  c.dx = number_or(j, "dx", c.dx, where);
  c.dt = number_or(j, "dt", c.dt, where);
  if (!(c.dx > 0.0) || !(c.dt > 0.0)) throw ConfigError("compare: dx and dt must be positive");
  c.extrapolate = flag_or(j, "extrapolate", false, where);
  return c;
}

void write_meta_line(std::ostream& os, const JobConfig& cfg) { os << cfg.metadata_line() << '\n'; }

json meta_json(const JobConfig& cfg) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, cfg.config_hash());
  return {{"version", MLH_VERSION}, {"config_hash", hash}, {"seed", cfg.seed}};
}

const PiecewiseInitialData& need_initial_data(const JobConfig& cfg, const char* command) {
  if (!cfg.initial_data) throw ConfigError(std::string(command) + ": config has no \"initial_data\"");
  return *cfg.initial_data;
}

template <class T>
const T& need_section(const std::optional<T>& s, const char* name) {
  if (!s) throw ConfigError(std::string("config has no \"") + name + "\" section");
  return *s;
}

Grid pde_grid(const PhysicalMedium& m, const PdeJob& job) {
  const double T = job.times.back();
  double lo = 0.0;
  double hi = 0.0;
  if (job.domain) {
    std::tie(lo, hi) = *job.domain;
  } else {
    double top = 0.0;
    for (const auto& l : m.layers()) top = std::max(top, l.diffusivity);
    const double pad = 12.0 * std::sqrt(top * T);
    const auto [mn, mx] = std::minmax_element(job.xs.begin(), job.xs.end());
    lo = *mn - pad;
    hi = *mx + pad;
  }
  const double dx = job.dx ? *job.dx : job.n_cells ? (hi - lo) / static_cast<double>(*job.n_cells) : 1e-3;
  return Grid::uniform(m, lo, hi, dx);
}

}  // namespace

const char* to_string(Route r) {
  switch (r) {
    case Route::expansion: return "expansion";
    case Route::mc: return "mc";
    case Route::pde: return "pde";
    case Route::closed_form: return "closed_form";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t JobConfig::config_hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : source.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string JobConfig::metadata_line() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# mlh %s config_hash=%016" PRIx64 " seed=%" PRIu64, MLH_VERSION, config_hash(),
                seed);
  return buf;
}

PiecewiseInitialData initial_data_from_json(const json& j) {
  reject_unknown_keys(j, {"pieces", "order", "window"}, "initial_data");
  if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").size() != 3) {
    throw ConfigError("initial_data: \"pieces\" must be an array of 3 coefficient arrays");
  }
  if (!j.contains("order") || !j.at("order").is_number_integer()) {
    throw ConfigError("initial_data: \"order\" must be an integer");
  }
  std::array<Piece, 3> pieces{Piece::polynomial({0.0}), Piece::polynomial({0.0}), Piece::polynomial({0.0})};
  for (int i = 0; i < 3; ++i) {
    const auto& pj = j.at("pieces").at(i);
    const std::string where = "initial_data.pieces[" + std::to_string(i) + "]";
    if (!pj.is_array() || pj.empty()) throw ConfigError(where + ": must be a non-empty array of coefficients");
    std::vector<double> c;
    for (const auto& e : pj) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) throw ConfigError(where + ": coefficients must be finite numbers");
      c.push_back(e.get<double>());
    }
    pieces[i] = Piece::polynomial(std::move(c));
  }
  std::optional<PiecewiseInitialData::Window> window;
  if (j.contains("window")) {
    const auto w = numbers(j, "window", "initial_data");
    if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("initial_data: \"window\" must be [lo, hi] with lo < hi");
    window = PiecewiseInitialData::Window{w[0], w[1]};
  }
  try {
    return PiecewiseInitialData(std::move(pieces), j.at("order").get<int>(), window);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial_data: ") + e.what());
  }
}

JobConfig parse_job_config(const json& j, std::optional<std::uint64_t> seed_override) {
  reject_unknown_keys(j, {"medium", "initial_data", "kernel", "expand", "simulate", "pde", "compare", "seed"}, "config");
  if (!j.contains("medium")) throw ConfigError("config: missing \"medium\"");
  std::uint64_t seed = kDefaultSeed;
  if (j.contains("seed")) seed = count(j, "seed", "config");
  if (seed_override) seed = *seed_override;

  JobConfig cfg{j, medium_from_json(j.at("medium")), std::nullopt, seed, {}, {}, {}, {}, {}};
  cfg.source["seed"] = seed;
  if (j.contains("initial_data")) cfg.initial_data = initial_data_from_json(j.at("initial_data"));
  if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"), cfg.medium);
  if (j.contains("expand")) cfg.expand = parse_expand(j.at("expand"));
  if (j.contains("simulate")) cfg.simulate = parse_simulate(j.at("simulate"), seed);
  if (j.contains("pde")) cfg.pde = parse_pde(j.at("pde"));
  if (j.contains("compare")) cfg.compare = parse_compare(j.at("compare"), cfg.medium, seed);
  return cfg;
}

JobConfig load_job_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in \"" + path + "\": " + e.what());
  }
  return parse_job_config(j, seed_override);
}

int cmd_kernel(const JobConfig& cfg, std::ostream& out) {
  const auto& job = need_section(cfg.kernel, "kernel");
  const auto params = to_sde_params(cfg.medium);
  const auto nx = job.xs.size();
  const auto ny = job.ys.size();
  const auto rows = static_cast<std::int64_t>(job.times.size() * nx * ny);
  std::vector<KernelEval> values(static_cast<std::size_t>(rows));
  auto eval = [&](double t, double x, double y) {
    switch (job.form) {
      case KernelForm::skew_bm: return skew_bm_density(*job.gamma, t, x, y);
      case KernelForm::single_at_0: return kernel_single_0(params, t, x, y);
      case KernelForm::single_at_a: return kernel_single_a(params, t, x, y);
      case KernelForm::two_interface_special: return kernel_two_interface(params, t, x, y);
      case KernelForm::m_symmetric: return kernel_m_symmetric(cfg.medium, t, x, y);
    }
    throw std::logic_error("unhandled kernel form");
  };
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto u = static_cast<std::size_t>(i);
    values[u] = eval(job.times[u / (nx * ny)], job.xs[(u / ny) % nx], job.ys[u % ny]);
  }
  write_meta_line(out, cfg);
  out << "t,x,y,density,form\n";
  for (std::size_t u = 0; u < values.size(); ++u) {
    out << format_double(job.times[u / (nx * ny)]) << ',' << format_double(job.xs[(u / ny) % nx]) << ','
        << format_double(job.ys[u % ny]) << ',' << format_double(values[u].value) << ',' << to_string(values[u].form)
        << '\n';
  }
  return kExitOk;
}

int cmd_expand(const JobConfig& cfg, std::ostream& coefficients, std::ostream& partial_sums) {
  const auto& job = need_section(cfg.expand, "expand");
  const auto& h = need_initial_data(cfg, "expand");
  const auto params = to_sde_params(cfg.medium);
  write_meta_line(coefficients, cfg);
  coefficients << "x,branch,k,b_k\n";
  write_meta_line(partial_sums, cfg);
  partial_sums << "x,t,partial_sum\n";
  for (double x : job.xs) {
    const auto r = expand_u(params, h, x, job.times.front());
    for (std::size_t k = 0; k < r.coefficients.size(); ++k) {
      coefficients << format_double(x) << ',' << to_string(r.branch) << ',' << k << ','
                   << format_double(r.coefficients[k]) << '\n';
    }
    for (double t : job.times) partial_sums << format_double(x) << ',' << format_double(t) << ',' << format_double(r.partial_sum_at(t)) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const JobConfig& cfg, std::ostream& summary, std::ostream* paths) {
  const auto& job = need_section(cfg.simulate, "simulate");
  const auto& h = need_initial_data(cfg, "simulate");
  const auto params = to_sde_params(cfg.medium);
  const auto est = estimate_expectation(params, h, job.x0, job.T, job.sampler);
  const bool one_shot = job.sampler.closed_form_when_matched && params.matched();
  const auto steps = one_shot ? 1.0 : std::ceil(job.T / coupling_step(params, job.sampler) - 1e-12);
  json s = {{"meta", meta_json(cfg)},
            {"x0", job.x0},
            {"T", job.T},
            {"estimate", est.mean},
            {"std_error", est.std_error},
            {"n_paths", est.n_paths},
            {"seed", est.seed},
            {"steps_per_path", static_cast<std::uint64_t>(std::max(1.0, steps))},
            {"scheme", one_shot ? "two_interface_closed_form" : "exact_single_interface_steps"}};
  summary << s.dump(2) << '\n';
  if (paths && job.dump_paths > 0) {
    std::vector<PathSample> dump;
    for (std::uint64_t i = 0; i < job.dump_paths; ++i) dump.push_back(simulate_path(params, job.x0, job.T, job.sampler, i));
    write_meta_line(*paths, cfg);
    write_paths_csv(*paths, dump);
  }
  return kExitOk;
}

int cmd_solve_pde(const JobConfig& cfg, std::ostream& out, std::ostream& warnings) {
  const auto& job = need_section(cfg.pde, "pde");
  const auto& h = need_initial_data(cfg, "solve-pde");
  const Grid grid = pde_grid(cfg.medium, job);
  for (double x : job.xs) {
    if (x < grid.lo() || x > grid.hi()) throw ConfigError("pde: evaluation point " + format_double(x) + " outside the domain");
  }
  std::vector<Field> fields;
  std::optional<Grid> coarse;
  std::vector<Field> coarse_fields;
  fields = solve_times(cfg.medium, h, job.times, grid, job.dt);
  if (job.extrapolate) {
    coarse = Grid::uniform(cfg.medium, grid.lo(), grid.hi(), 2.0 * (grid.hi() - grid.lo()) / static_cast<double>(grid.size()));
    coarse_fields = solve_times(cfg.medium, h, job.times, *coarse, 2.0 * job.dt);
  }
  write_meta_line(out, cfg);
  out << "t,x,u\n";
  for (std::size_t ti = 0; ti < fields.size(); ++ti) {
    const auto& f = fields[ti];
    if (f.boundary_warning()) {
      warnings << "warning: boundary influence " << format_double(f.boundary_deviation) << " at t = "
               << format_double(f.time) << "; enlarge the domain\n";
    }
    auto value_at = [&](double x) {
      const double fine = f.at(grid, cfg.medium, x);
      return job.extrapolate ? (4.0 * fine - coarse_fields[ti].at(*coarse, cfg.medium, x)) / 3.0 : fine;
    };
    if (job.xs.empty()) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(f.time) << ',' << format_double(grid.centers[i]) << ','
            << format_double(job.extrapolate ? value_at(grid.centers[i]) : f.values[i]) << '\n';
      }
    } else {
      for (double x : job.xs) out << format_double(f.time) << ',' << format_double(x) << ',' << format_double(value_at(x)) << '\n';
    }
  }
  return kExitOk;
}

int cmd_compare(const JobConfig& cfg, std::ostream& report) {
  const auto& job = need_section(cfg.compare, "compare");
  const auto& h = need_initial_data(cfg, "compare");
  const auto params = to_sde_params(cfg.medium);
  auto has = [&](Route r) { return std::find(job.routes.begin(), job.routes.end(), r) != job.routes.end(); };

  std::vector<OracleValue> oracle;
  if (has(Route::pde)) oracle = oracle_values(cfg.medium, h, job.T, job.xs, job.dx, job.dt, job.extrapolate);

  json points = json::array();
  json pairs = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < job.xs.size(); ++i) {
    const double x = job.xs[i];
    json values = json::object();
    std::vector<std::pair<Route, double>> v;
    double stderr_mc = 0.0;
    double bound = 0.0;
    for (Route r : job.routes) {
      double value = 0.0;
      switch (r) {
        case Route::expansion: value = expand_u(params, h, x, job.T).partial_sum; break;
        case Route::mc: {
          const auto est = estimate_expectation(params, h, x, job.T, job.sampler);
          value = est.mean;
          stderr_mc = est.std_error;
          values["mc_std_error"] = est.std_error;
          break;
        }
        case Route::pde:
          value = oracle[i].value;
          bound = oracle[i].bound;
          values["pde_bound"] = bound;
          break;
        case Route::closed_form: value = closed_form_expectation(params, h, x, job.T); break;
      }
      values[to_string(r)] = value;
      v.emplace_back(r, value);
    }
    points.push_back({{"x", x}, {"values", values}});
    // One tolerance per point: the widest of the sampling and discretization uncertainties.
    const double tol = std::max({job.mc_sigmas * stderr_mc, bound, job.floor});
    for (std::size_t a = 0; a < v.size(); ++a) {
      for (std::size_t b = a + 1; b < v.size(); ++b) {
        const double residual = std::abs(v[a].second - v[b].second);
        const bool pass = residual <= tol;
        all_pass = all_pass && pass;
        pairs.push_back({{"x", x},
                         {"routes", {to_string(v[a].first), to_string(v[b].first)}},
                         {"residual", residual},
                         {"tolerance", tol},
                         {"pass", pass}});
      }
    }
  }
  json r = {{"meta", meta_json(cfg)}, {"T", job.T}, {"points", points}, {"pairs", pairs}, {"pass", all_pass}};
  report << r.dump(2) << '\n';
  return all_pass ? kExitOk : kExitTolerance;
}

}  // namespace mlh
