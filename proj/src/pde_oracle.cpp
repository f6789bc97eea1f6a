#include "mlh/pde_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mlh/expansion.hpp"

namespace mlh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tridiagonal system  -lower_i u_{i-1} + diag_i u_i - upper_i u_{i+1} = rhs_i, factored once.
class Tridiagonal {
 public:
  Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), pivot_(diag.size()), ratio_(diag.size()) {
    const auto n = diag.size();
    pivot_[0] = diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      ratio_[i] = lower_[i] / pivot_[i - 1];
      pivot_[i] = diag[i] - ratio_[i] * upper_[i - 1];
    }
  }

  void solve(std::vector<double>& rhs) const {
    const auto n = rhs.size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] += ratio_[i] * rhs[i - 1];
    rhs[n - 1] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] + upper_[i] * rhs[i + 1]) / pivot_[i];
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> pivot_;
  std::vector<double> ratio_;
};

struct Discretization {
  std::vector<double> mass;     // rho_i width_i
  std::vector<double> face_g;   // conductance of each face, size n + 1 (boundary faces included)
  double left_value;
  double right_value;
};

double conductivity(const PhysicalMedium& m, double x) { return m.density(x) * m.diffusivity(x); }

Discretization discretize(const PhysicalMedium& m, const PiecewiseInitialData& h, const Grid& grid) {
  const auto n = grid.size();
  Discretization d;
  d.mass.resize(n);
  d.face_g.resize(n + 1);
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = conductivity(m, grid.centers[i]);
    d.mass[i] = m.density(grid.centers[i]) * grid.widths[i];
  }
  d.face_g[0] = k[0] / (0.5 * grid.widths[0]);
  d.face_g[n] = k[n - 1] / (0.5 * grid.widths[n - 1]);
  for (std::size_t i = 1; i < n; ++i) {
    d.face_g[i] = 1.0 / (0.5 * grid.widths[i - 1] / k[i - 1] + 0.5 * grid.widths[i] / k[i]);
  }
  d.left_value = h.value(grid.lo(), m.region(grid.centers.front()));
  d.right_value = h.value(grid.hi(), m.region(grid.centers.back()));
  return d;
}

Tridiagonal implicit_matrix(const Discretization& d, double dt) {
  const auto n = d.mass.size();
  std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = d.mass[i] / dt + 0.5 * (d.face_g[i] + d.face_g[i + 1]);
    if (i > 0) lower[i] = 0.5 * d.face_g[i];
    if (i + 1 < n) upper[i] = 0.5 * d.face_g[i + 1];
  }
  return Tridiagonal(std::move(lower), std::move(diag), std::move(upper));
}

void march(const Discretization& d, Field& u, double t_end, double dt_target) {
  const double span = t_end - u.time;
  if (span <= 0.0) return;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt_target - 1e-9)));
  const double dt = span / static_cast<double>(steps);
  const auto matrix = implicit_matrix(d, dt);
  const auto n = u.values.size();
  std::vector<double> rhs(n);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = d.mass[i] / dt * u.values[i];
    rhs[0] += 0.5 * d.face_g[0] * d.left_value;
    rhs[n - 1] += 0.5 * d.face_g[n] * d.right_value;
    matrix.solve(rhs);
    u.values.swap(rhs);
  }
  for (double v : u.values) {
    if (!std::isfinite(v)) throw std::runtime_error("finite-volume solve produced a non-finite value");
  }
  u.time = t_end;
}

void check_solve_args(const PhysicalMedium& m, const Grid& grid, double dt) {
  grid.validate(m);
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

std::vector<Field> march_all(const PhysicalMedium& m, const PiecewiseInitialData& h, std::span<const double> times,
                             const Grid& grid, double dt) {
  const auto d = discretize(m, h, grid);
  Field u = project_initial(m, h, grid);
  std::vector<Field> out;
  double previous = 0.0;
  for (double t : times) {
    if (!(t >= previous)) throw std::invalid_argument("output times must be non-negative and increasing");
    march(d, u, t, dt);
    out.push_back(u);
    previous = t;
  }
  return out;
}

// The same scheme on a homogeneous medium made of one outer layer, with that layer's piece as data.
// Away from the interfaces the two solutions coincide, so their difference at the edge cell is the
// influence of the interior that has reached the boundary.
std::vector<Field> far_field(const PhysicalMedium& m, const PiecewiseInitialData& h, std::span<const double> times,
                             const Grid& grid, double dt, Region side) {
  const auto& layer = m.layer(static_cast<int>(side));
  const PhysicalMedium outer(m.a(), {layer, layer, layer});
  const auto& piece = h.piece(side);
  const PiecewiseInitialData data({piece, piece, piece}, h.order(), h.window());
  return march_all(outer, data, times, grid, dt);
}

}  // namespace

Grid Grid::uniform(const PhysicalMedium& m, double lo, double hi, double dx) {
  if (!(lo < hi) || !(dx > 0.0)) throw std::invalid_argument("grid needs lo < hi and dx > 0");
  std::vector<double> cuts{lo};
  for (double b : {0.0, m.a()}) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  Grid g;
  g.faces.push_back(lo);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dx - 1e-9)));
    for (std::size_t i = 1; i <= cells; ++i) {
      g.faces.push_back(i == cells ? cuts[s + 1] : cuts[s] + len * static_cast<double>(i) / static_cast<double>(cells));
    }
  }
  for (std::size_t i = 0; i + 1 < g.faces.size(); ++i) {
    g.centers.push_back(0.5 * (g.faces[i] + g.faces[i + 1]));
    g.widths.push_back(g.faces[i + 1] - g.faces[i]);
  }
  return g;
}

Grid Grid::covering(const PhysicalMedium& m, std::span<const double> xs, double T, double dx, double margin) {
  if (xs.empty()) throw std::invalid_argument("grid needs at least one evaluation point");
  double top = 0.0;
  for (const auto& l : m.layers()) top = std::max(top, l.diffusivity);
  const double pad = margin * std::sqrt(top * T);
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  return uniform(m, *mn - pad, *mx + pad, dx);
}

void Grid::validate(const PhysicalMedium& m) const {
  if (faces.size() < 2 || centers.size() + 1 != faces.size() || widths.size() != centers.size()) {
    throw std::invalid_argument("grid arrays are inconsistent");
  }
  for (double w : widths) {
    if (!(w > 0.0)) throw std::invalid_argument("grid cell widths must be positive");
  }
  for (double b : {0.0, m.a()}) {
    if (b > lo() && b < hi() && !std::binary_search(faces.begin(), faces.end(), b)) {
      throw std::invalid_argument("interface point " + std::to_string(b) + " is not a cell face");
    }
  }
}

bool Grid::covers(const PhysicalMedium& m, double x, double T, double margin) const {
  double top = 0.0;
  for (const auto& l : m.layers()) top = std::max(top, l.diffusivity);
  const double pad = margin * std::sqrt(top * T);
  return lo() <= x - pad && hi() >= x + pad;
}

double Field::at(const Grid& grid, const PhysicalMedium& m, double x) const {
  if (x < grid.lo() || x > grid.hi()) throw std::out_of_range("evaluation point outside the grid");
  const auto n = grid.size();
  // Value on face j: Dirichlet data at the ends, flux-continuous average inside.
  auto face_value = [&](std::size_t j) {
    if (j == 0 || j == n) {
      // Linear extrapolation is not needed at the ends; the far field is flat there.
      return values[j == 0 ? 0 : n - 1];
    }
    const double gl = conductivity(m, grid.centers[j - 1]) / grid.widths[j - 1];
    const double gr = conductivity(m, grid.centers[j]) / grid.widths[j];
    return (gl * values[j - 1] + gr * values[j]) / (gl + gr);
  };
  auto it = std::upper_bound(grid.faces.begin(), grid.faces.end(), x);
  std::size_t cell = it == grid.faces.begin() ? 0 : static_cast<std::size_t>(it - grid.faces.begin()) - 1;
  cell = std::min(cell, n - 1);
  const double c = grid.centers[cell];
  if (x == grid.faces[cell]) return face_value(cell);
  if (x < c) {
    const double f = grid.faces[cell];
    return face_value(cell) + (values[cell] - face_value(cell)) * (x - f) / (c - f);
  }
  const double f = grid.faces[cell + 1];
  return values[cell] + (face_value(cell + 1) - values[cell]) * (x - c) / (f - c);
}

Field project_initial(const PhysicalMedium& m, const PiecewiseInitialData& h, const Grid& grid) {
  Field u;
  u.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u.values[i] = h.average(grid.faces[i], grid.faces[i + 1], m.region(grid.centers[i]));
  }
  return u;
}

double discrete_mass(const PhysicalMedium& m, const Grid& grid, const Field& u) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += m.density(grid.centers[i]) * grid.widths[i] * u.values[i];
  return sum;
}

Field solve(const PhysicalMedium& m, const PiecewiseInitialData& h, double T, const Grid& grid, double dt) {
  const double times[] = {T};
  return solve_times(m, h, times, grid, dt).front();
}

std::vector<Field> solve_times(const PhysicalMedium& m, const PiecewiseInitialData& h,
                               std::span<const double> times, const Grid& grid, double dt) {
  check_solve_args(m, grid, dt);
  auto out = march_all(m, h, times, grid, dt);
  const auto left = far_field(m, h, times, grid, dt, Region::left);
  const auto right = far_field(m, h, times, grid, dt, Region::right);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].boundary_deviation = std::max(std::abs(out[i].values.front() - left[i].values.front()),
                                         std::abs(out[i].values.back() - right[i].values.back()));
  }
  return out;
}

std::vector<OracleValue> oracle_values(const PhysicalMedium& m, const PiecewiseInitialData& h, double T,
                                       std::span<const double> xs, double dx, double dt, bool extrapolate) {
  const Grid fine = Grid::covering(m, xs, T, dx);
  const Grid coarse = Grid::covering(m, xs, T, 2.0 * dx);
  const Field uf = solve(m, h, T, fine, dt);
  const Field uc = solve(m, h, T, coarse, 2.0 * dt);
  std::vector<OracleValue> out;
  for (double x : xs) {
    const double f = uf.at(fine, m, x);
    const double c = uc.at(coarse, m, x);
    if (extrapolate) {
      out.push_back({(4.0 * f - c) / 3.0, std::abs(f - c) / 3.0});
    } else {
      out.push_back({f, std::abs(f - c)});
    }
  }
  return out;
}

std::vector<RepresentationResidual> representation_check(const PhysicalMedium& m, const PiecewiseInitialData& h,
                                                         double T, std::span<const double> xs,
                                                         const RepresentationOptions& opts) {
  const SdeParams params = to_sde_params(m);
  const auto oracle = oracle_values(m, h, T, xs, opts.dx, opts.dt, opts.extrapolate);
  std::vector<RepresentationResidual> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    RepresentationResidual r{xs[i], oracle[i].value, oracle[i].bound, kNaN, kNaN, kNaN, kNaN, kNaN};
    if (opts.with_expansion) {
      r.expansion = expand_u(params, h, xs[i], T).partial_sum;
      r.expansion_residual = std::abs(r.expansion - r.pde);
    }
    if (opts.with_monte_carlo) {
      const auto est = estimate_expectation(params, h, xs[i], T, opts.sampler);
      r.mc = est.mean;
      r.mc_std_error = est.std_error;
      r.mc_residual = std::abs(r.mc - r.pde);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace mlh
