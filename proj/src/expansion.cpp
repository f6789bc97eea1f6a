#include "mlh/expansion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mlh/special_functions.hpp"

namespace mlh {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_moment_args(int k, double t) {
  if (k < 1 || k > kMaxErfcOrder) throw std::invalid_argument("moment order must be in [1, 64]");
  if (!(std::isfinite(t) && t > 0.0)) throw std::invalid_argument("moment time must be positive");
}

bool is_interface(const SdeParams& params, double x) { return x == 0.0 || x == params.a; }

}  // namespace

const char* to_string(ExpansionBranch b) {
  switch (b) {
    case ExpansionBranch::interior_left: return "interior_left";
    case ExpansionBranch::interior_middle: return "interior_middle";
    case ExpansionBranch::interior_right: return "interior_right";
    case ExpansionBranch::interface_0: return "x0";
    case ExpansionBranch::interface_a: return "xa";
  }
  return "?";
}

ExpansionBranch expansion_branch(const SdeParams& params, double x) {
  if (x == 0.0) return ExpansionBranch::interface_0;
  if (x == params.a) return ExpansionBranch::interface_a;
  if (x < 0.0) return ExpansionBranch::interior_left;
  return x < params.a ? ExpansionBranch::interior_middle : ExpansionBranch::interior_right;
}

double D_k(const SdeParams& params, int k, double x) {
  if (is_interface(params, x)) throw std::invalid_argument("D_k is undefined at an interface point");
  if (k % 2 == 1) return 0.0;
  return erfc_k_limit_neg(k) * ipow(params.coefficient(x), k);
}

double moment_single(const SingleInterface& d, int k, double x, double t) {
  check_moment_args(k, t);
  d.validate();
  const double L = d.left;
  const double R = d.right;
  const double denom = L - R * (d.alpha - 1.0);
  const double skew_num = L + R * (d.alpha - 1.0);
  const double xs = x - d.position;
  if (xs == 0.0) throw std::invalid_argument("moment_single needs x away from the interface");
  const double root = std::sqrt(2.0 * t);

  double sum = 0.0;
  if (xs < 0.0) {
    // Started on the left: direct Gaussian tail plus the reflected/transmitted terms A_j.
    const double lead = ipow(-1.0, k) * ipow(L, k) * std::pow(2.0, 0.5 * k - 1.0) * std::pow(t, 0.5 * k) *
                        erfc_k(k, xs / (L * root));
    const double arg = -xs / (L * root);
    for (int j = 0; j <= k; ++j) {
      const double Aj = ipow(xs, k - j) / denom *
                        (skew_num * ipow(L, j) * ipow(-1.0, k + 1) * ipow(2.0, k - j) +
                         2.0 * L * ipow(R, j) * ipow(R / L - 1.0, k - j));
      sum += static_cast<double>(binomial(k, j)) * std::pow(2.0, 0.5 * j - 1.0) * std::pow(t, 0.5 * j) * Aj *
             erfc_k(j, arg);
    }
    return lead + sum;
  }
  const double lead = std::pow(2.0, 0.5 * k - 1.0) * ipow(R, k) * std::pow(t, 0.5 * k) * erfc_k(k, -xs / (R * root));
  const double arg = xs / (R * root);
  for (int j = 0; j <= k; ++j) {
    const double Bj = ipow(xs, k - j) / denom *
                      (-2.0 * R * (d.alpha - 1.0) * ipow(-L, j) * ipow(L / R - 1.0, k - j) +
                       skew_num * ipow(R, j) * ipow(-2.0, k - j));
    sum += static_cast<double>(binomial(k, j)) * std::pow(2.0, 0.5 * j - 1.0) * std::pow(t, 0.5 * j) * Bj *
           erfc_k(j, arg);
  }
  return lead + sum;
}

double moment_exact(const SdeParams& params, int k, double x, double t) {
  params.validate();
  if (is_interface(params, x)) {
    throw std::invalid_argument("moment_exact: x is an interface point, use moment_interface");
  }
  const auto d = x <= 0.5 * params.a ? SingleInterface::at_zero(params) : SingleInterface::at_a(params);
  return moment_single(d, k, x, t);
}

double moment_interface(const SdeParams& params, int k, double x, double t, Region region) {
  params.validate();
  check_moment_args(k, t);
  if (!is_interface(params, x)) throw std::invalid_argument("moment_interface: x must be 0 or a");
  const auto& [p, q, r, alpha, beta, a] = params;
  const double two_t_k = std::pow(2.0 * t, 0.5 * k);
  const double half_moment = gamma_half(k) * kInvSqrtPi;  // erfc_k(0)
  const double far_tail = erfc_k(k, a / (q * std::sqrt(2.0 * t)));
  const double sgn = ipow(-1.0, k);

  if (x == 0.0) {
    const double denom = p - q * (alpha - 1.0);
    switch (region) {
      case Region::left: return q * (1.0 - alpha) / denom * sgn * ipow(p, k) * two_t_k * half_moment;
      case Region::middle: return p / denom * ipow(q, k) * two_t_k * (half_moment - far_tail);
      case Region::right: return p / denom * ipow(q, k) * two_t_k * far_tail;
    }
  }
  const double denom = q - r * (beta - 1.0);
  switch (region) {
    case Region::left: return r * (1.0 - beta) / denom * sgn * ipow(q, k) * two_t_k * far_tail;
    case Region::middle: return r * (1.0 - beta) * sgn / denom * ipow(q, k) * two_t_k * (half_moment - far_tail);
    case Region::right: return q / denom * ipow(r, k) * two_t_k * half_moment;
  }
  return 0.0;
}

double MomentTable::value(double t) const {
  if (region) return moment_interface(params, k, x, t, *region);
  return moment_exact(params, k, x, t);
}

double b_k(const SdeParams& params, const PiecewiseInitialData& h, int k, double x) {
  params.validate();
  if (k < 0 || k > h.order()) {
    throw std::invalid_argument("b_k: k = " + std::to_string(k) + " outside [0, N = " + std::to_string(h.order()) + "]");
  }
  const auto& [p, q, r, alpha, beta, a] = params;
  const double scale = std::pow(2.0, 0.5 * k) * gamma_half(k) / (factorial(k) * std::sqrt(std::numbers::pi));
  const double sgn = ipow(-1.0, k);
  if (x == 0.0) {
    const double dh1 = h.piece(Region::left).derivative(k, 0.0);
    const double dh2 = h.piece(Region::middle).derivative(k, 0.0);
    return scale / (p - q * (alpha - 1.0)) * (dh1 * q * (1.0 - alpha) * sgn * ipow(p, k) + dh2 * p * ipow(q, k));
  }
  if (x == a) {
    const double dh2 = h.piece(Region::middle).derivative(k, a);
    const double dh3 = h.piece(Region::right).derivative(k, a);
    return scale / (q - r * (beta - 1.0)) * (dh2 * r * (1.0 - beta) * sgn * ipow(q, k) + dh3 * q * ipow(r, k));
  }
  if (k % 2 == 1) return 0.0;
  const double dh = h.piece(params.region(x)).derivative(k, x);
  return std::pow(2.0, 0.5 * k - 1.0) * D_k(params, k, x) * dh / factorial(k);
}

double ExpansionResult::partial_sum_at(double time) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) acc += coefficients[k] * std::pow(time, 0.5 * k);
  return acc;
}

ExpansionResult expand_u(const SdeParams& params, const PiecewiseInitialData& h, double x, double t) {
  if (!(std::isfinite(t) && t > 0.0)) throw std::invalid_argument("expand_u: t must be positive");
  ExpansionResult out{x, {}, expansion_branch(params, x), t, 0.0};
  out.coefficients.reserve(h.order() + 1);
  for (int k = 0; k <= h.order(); ++k) out.coefficients.push_back(b_k(params, h, k, x));
  out.partial_sum = out.partial_sum_at(t);
  return out;
}

}  // namespace mlh
