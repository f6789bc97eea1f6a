#pragma once

#include <span>
#include <vector>

#include "mlh/initial_data.hpp"
#include "mlh/medium.hpp"
#include "mlh/montecarlo.hpp"

namespace mlh {

/// Cell-centred finite-volume grid whose faces include the interfaces 0 and a.
struct Grid {
  std::vector<double> faces;  // size n + 1, increasing
  std::vector<double> centers;
  std::vector<double> widths;

  std::size_t size() const { return centers.size(); }
  double lo() const { return faces.front(); }
  double hi() const { return faces.back(); }

  /// Uniform cells of width <= dx in each of the segments cut by 0 and a.
  static Grid uniform(const PhysicalMedium& m, double lo, double hi, double dx);
  /// Smallest such grid containing x +- margin sqrt(max a_i T) for every x in xs.
  static Grid covering(const PhysicalMedium& m, std::span<const double> xs, double T, double dx,
                       double margin = 12.0);

  /// Throws std::invalid_argument unless widths are positive and 0, a inside the domain are faces.
  void validate(const PhysicalMedium& m) const;
  bool covers(const PhysicalMedium& m, double x, double T, double margin = 12.0) const;
};

/// Cell averages of u at `time`.
struct Field {
  std::vector<double> values;
  double time = 0.0;
  /// Largest edge-cell gap to the homogeneous outer-layer solution; above 1e-10 the interior reached the boundary.
  double boundary_deviation = 0.0;

  bool boundary_warning() const { return boundary_deviation > 1e-10; }
  /// Piecewise-linear reconstruction; at a material face the flux-continuous face value is used.
  double at(const Grid& grid, const PhysicalMedium& m, double x) const;
};

/// Cell averages of h.
Field project_initial(const PhysicalMedium& m, const PiecewiseInitialData& h, const Grid& grid);

/// sum_i rho_i width_i u_i.
double discrete_mass(const PhysicalMedium& m, const Grid& grid, const Field& u);

/**
 * Implicit Euler for u_t = (1/(2 rho)) (rho A u_x)_x in conservation form with
 * harmonic-mean face conductances and Dirichlet far-field values h(lo), h(hi).
 * The step is shortened so that an integer number of steps reaches T.
 * Throws std::runtime_error if the tridiagonal solve produces non-finite values.
 */
Field solve(const PhysicalMedium& m, const PiecewiseInitialData& h, double T, const Grid& grid, double dt);

/// Solutions at each of the increasing `times`, sharing one time march.
std::vector<Field> solve_times(const PhysicalMedium& m, const PiecewiseInitialData& h,
                               std::span<const double> times, const Grid& grid, double dt);

struct OracleValue {
  double value;
  /// A posteriori bound on the discretization error of `value`, from a coarse companion solve.
  double bound;
};

/**
 * u(T, x) at each x from solves at (dx, dt) and (2dx, 2dt).
 * Plain: value is the fine solve, bound = |fine - coarse|.
 * Extrapolated: value = (4 fine - coarse) / 3, which removes the O(dx^2) term,
 * and bound = |fine - coarse| / 3, the size of the removed correction.
 */
std::vector<OracleValue> oracle_values(const PhysicalMedium& m, const PiecewiseInitialData& h, double T,
                                       std::span<const double> xs, double dx, double dt,
                                       bool extrapolate = false);

struct RepresentationOptions {
  double dx = 1e-3;
  double dt = 1e-5;
  bool extrapolate = false;
  bool with_expansion = true;
  bool with_monte_carlo = true;
  SamplerConfig sampler;
};

struct RepresentationResidual {
  double x;
  double pde;
  double pde_bound;
  double expansion;     // NaN when not requested
  double mc;            // NaN when not requested
  double mc_std_error;  // NaN when not requested
  double expansion_residual;
  double mc_residual;
};

/// Residuals between the PDE solution and the expansion / Monte Carlo estimates of E_x[h(X_T)].
std::vector<RepresentationResidual> representation_check(const PhysicalMedium& m, const PiecewiseInitialData& h,
                                                         double T, std::span<const double> xs,
                                                         const RepresentationOptions& opts = {});

}  // namespace mlh
