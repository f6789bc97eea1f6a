#pragma once

#include <optional>
#include <vector>

#include "mlh/initial_data.hpp"
#include "mlh/medium.hpp"

namespace mlh {

/// Which branch of the coefficient formula applies at x.
enum class ExpansionBranch { interior_left, interior_middle, interior_right, interface_0, interface_a };

/// "interior_left", ..., "x0", "xa".
const char* to_string(ExpansionBranch b);
ExpansionBranch expansion_branch(const SdeParams& params, double x);

/// Limit coefficient of the interior moments:
/// D_k(x) = (1 + (-1)^k) Gamma((k+1)/2)/sqrt(pi) * {p^k, q^k, r^k} on x < 0, 0 < x < a, x > a.
/// Throws std::invalid_argument at x in {0, a}.
double D_k(const SdeParams& params, int k, double x);

/// E[(X_t - x)^k] for the one-interface diffusion d started at x != d.position (exact, erfc_k form).
double moment_single(const SingleInterface& d, int k, double x, double t);

/**
 * E[(Xi_t - x)^k] where Xi is the nearest-interface diffusion: the interface-at-0
 * diffusion for x <= a/2, the interface-at-a diffusion otherwise.
 * Throws std::invalid_argument for x in {0, a}, t <= 0 or k < 1.
 */
double moment_exact(const SdeParams& params, int k, double x, double t);

/// E[(Xi_t - x)^k ; Xi_t in region] for x in {0, a} (exact). Throws std::invalid_argument otherwise.
double moment_interface(const SdeParams& params, int k, double x, double t, Region region);

/// A moment as a function of t at fixed (k, x), optionally restricted to a region.
struct MomentTable {
  SdeParams params;
  int k;
  double x;
  std::optional<Region> region;  // set only for interface points

  double value(double t) const;
};

/// Small-time coefficient b_k(x); k in [0, N]. Throws DerivativeOrderError if a piece cannot supply order k.
double b_k(const SdeParams& params, const PiecewiseInitialData& h, int k, double x);

struct ExpansionResult {
  double x;
  std::vector<double> coefficients;  // b_0 .. b_N
  ExpansionBranch branch;
  double t;
  double partial_sum;

  double partial_sum_at(double time) const;
};

/// E[h(Y_t^x)] ~ sum_{k=0}^N b_k(x) t^{k/2}.
ExpansionResult expand_u(const SdeParams& params, const PiecewiseInitialData& h, double x, double t);

}  // namespace mlh
