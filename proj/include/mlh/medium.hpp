#pragma once

#include <array>

namespace mlh {

/// Closed-left region membership: x <= 0, 0 < x <= a, x > a.
enum class Region { left, middle, right };

const char* to_string(Region r);

struct Layer {
  double diffusivity;
  double density;
};

/**
 * Three-layer medium with interfaces at 0 and a. Layer 0 occupies x <= 0,
 * layer 1 occupies (0, a], layer 2 occupies (a, inf).
 *
 * The densities act only through their ratios; scaling all three by the same
 * positive factor describes the same diffusion.
 */
class PhysicalMedium {
 public:
  /// Throws std::invalid_argument unless a and every coefficient are positive and finite.
  PhysicalMedium(double a, const std::array<Layer, 3>& layers);

  double a() const { return a_; }
  const Layer& layer(int i) const { return layers_.at(i); }
  const std::array<Layer, 3>& layers() const { return layers_; }

  Region region(double x) const;
  double diffusivity(double x) const { return layers_[index(x)].diffusivity; }
  double density(double x) const { return layers_[index(x)].density; }

  /// rho_2 sqrt(a_2) == rho_3 sqrt(a_3) up to a relative tolerance.
  bool matched(double rel_tol = 1e-12) const;

 private:
  int index(double x) const { return static_cast<int>(region(x)); }

  double a_;
  std::array<Layer, 3> layers_;
};

/**
 * Parameters of the interface SDE
 *
 *   dY = (p 1{Y<=0} + q 1{0<Y<=a} + r 1{Y>a}) dB + alpha/2 dL^0(Y) + beta/2 dL^a(Y)
 *
 * with right semimartingale local times L.
 */
struct SdeParams {
  double p;
  double q;
  double r;
  double alpha;
  double beta;
  double a;

  /// Throws std::invalid_argument on p, q, r, a <= 0 or alpha, beta >= 1.
  void validate() const;

  /// Skew coefficient of the interface at 0: (p + q(alpha-1)) / (p - q(alpha-1)).
  double skew_at_0() const { return (p + q * (alpha - 1.0)) / (p - q * (alpha - 1.0)); }
  /// Skew coefficient of the interface at a: (q + r(beta-1)) / (q - r(beta-1)).
  double skew_at_a() const { return (q + r * (beta - 1.0)) / (q - r * (beta - 1.0)); }

  /// beta == 1 - q/r, the condition under which the two-interface kernel is explicit.
  bool matched(double tol = 1e-12) const;

  Region region(double x) const { return x <= 0.0 ? Region::left : (x <= a ? Region::middle : Region::right); }
  double coefficient(double x) const;
};

/// p = sqrt(a1), q = sqrt(a2), r = sqrt(a3), alpha = 1 - rho1 a1/(rho2 a2), beta = 1 - rho2 a2/(rho3 a3).
SdeParams to_sde_params(const PhysicalMedium& m);

/// Inverse of to_sde_params in the gauge rho_2 = 1.
PhysicalMedium from_sde_params(const SdeParams& params);

/**
 * One-interface diffusion
 *
 *   dX = (left 1{X<=w} + right 1{X>w}) dB + alpha/2 dL^w(X).
 *
 * at_zero() is the diffusion of the interface at 0 built from (p, q, alpha);
 * at_a() the one at a built from (q, r, beta).
 */
struct SingleInterface {
  double left;
  double right;
  double alpha;
  double position;

  static SingleInterface at_zero(const SdeParams& params);
  static SingleInterface at_a(const SdeParams& params);

  void validate() const;
  double skew() const { return (left + right * (alpha - 1.0)) / (left - right * (alpha - 1.0)); }
  /// Scale map (x - w)/left for x <= w, (x - w)/right above.
  double scale(double x) const;
  double inverse_scale(double z) const;
  /// Left derivative of inverse_scale at z.
  double inverse_scale_slope(double z) const { return z <= 0.0 ? left : right; }
};

/// The scale map s, its inverse sigma, the single-interface scales f and g, and the transform phi.
class ScaleFunctions {
 public:
  explicit ScaleFunctions(const SdeParams& params);

  /// x/p below 0, x/q on [0, a], (x - a)/r + a/q above a.
  double s(double x) const;
  double sigma(double y) const;
  double s_left_derivative(double x) const;
  double sigma_left_derivative(double y) const;
  /// Scale of the interface-at-0 diffusion: y/p for y <= 0, y/q for y > 0.
  double f(double x) const;
  /// Scale of the interface-at-a diffusion, centred at a.
  double g(double x) const;
  /// phi(x) = a + (r/q)(x - a)^+ - (x - a)^-.
  double phi(double x) const;
  double phi_inverse(double y) const;

  const SdeParams& params() const { return params_; }

 private:
  SdeParams params_;
};

double scale_s(const SdeParams& params, double x);
double scale_sigma(const SdeParams& params, double y);
double phi_transform(const SdeParams& params, double x);

}  // namespace mlh
