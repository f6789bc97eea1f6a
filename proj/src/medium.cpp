#include "mlh/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mlh {

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite, got " +
                                std::to_string(v));
  }
}

void require_below_one(double v, const char* name) {
  if (!(std::isfinite(v) && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be finite and < 1, got " +
                                std::to_string(v));
  }
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::left: return "left";
    case Region::middle: return "middle";
    case Region::right: return "right";
  }
  return "?";
}

PhysicalMedium::PhysicalMedium(double a, const std::array<Layer, 3>& layers)
    : a_(a), layers_(layers) {
  require_positive(a, "interface position a");
  for (const auto& l : layers_) {
    require_positive(l.diffusivity, "diffusivity");
    require_positive(l.density, "density");
  }
}

Region PhysicalMedium::region(double x) const {
  if (x <= 0.0) return Region::left;
  return x <= a_ ? Region::middle : Region::right;
}

bool PhysicalMedium::matched(double rel_tol) const {
  const double lhs = layers_[1].density * std::sqrt(layers_[1].diffusivity);
  const double rhs = layers_[2].density * std::sqrt(layers_[2].diffusivity);
  return std::abs(lhs - rhs) <= rel_tol * std::max(lhs, rhs);
}

void SdeParams::validate() const {
  require_positive(p, "p");
  require_positive(q, "q");
  require_positive(r, "r");
  require_positive(a, "a");
  require_below_one(alpha, "alpha");
  require_below_one(beta, "beta");
  // Both are automatic from the checks above.
  if (!(p - q * (alpha - 1.0) > 0.0) || !(q - r * (beta - 1.0) > 0.0)) {
    throw std::logic_error("skew denominators must be positive");
  }
}

bool SdeParams::matched(double tol) const { return std::abs(beta - (1.0 - q / r)) < tol; }

double SdeParams::coefficient(double x) const {
  switch (region(x)) {
    case Region::left: return p;
    case Region::middle: return q;
    case Region::right: return r;
  }
  return q;
}

SdeParams to_sde_params(const PhysicalMedium& m) {
  const auto& [l1, l2, l3] = m.layers();
  const double flux1 = l1.density * l1.diffusivity;
  const double flux2 = l2.density * l2.diffusivity;
  const double flux3 = l3.density * l3.diffusivity;
  SdeParams out{std::sqrt(l1.diffusivity), std::sqrt(l2.diffusivity), std::sqrt(l3.diffusivity),
                1.0 - flux1 / flux2,        1.0 - flux2 / flux3,        m.a()};
  out.validate();
  return out;
}

PhysicalMedium from_sde_params(const SdeParams& params) {
  params.validate();
  const double a1 = params.p * params.p;
  const double a2 = params.q * params.q;
  const double a3 = params.r * params.r;
  const double rho2 = 1.0;
  const double rho1 = (1.0 - params.alpha) * rho2 * a2 / a1;
  const double rho3 = rho2 * a2 / ((1.0 - params.beta) * a3);
  return PhysicalMedium(params.a, {{{a1, rho1}, {a2, rho2}, {a3, rho3}}});
}

SingleInterface SingleInterface::at_zero(const SdeParams& params) {
  return {params.p, params.q, params.alpha, 0.0};
}

SingleInterface SingleInterface::at_a(const SdeParams& params) {
  return {params.q, params.r, params.beta, params.a};
}

void SingleInterface::validate() const {
  require_positive(left, "left diffusion coefficient");
  require_positive(right, "right diffusion coefficient");
  require_below_one(alpha, "skew weight");
  if (!std::isfinite(position)) throw std::invalid_argument("interface position is not finite");
}

double SingleInterface::scale(double x) const {
  const double d = x - position;
  return d <= 0.0 ? d / left : d / right;
}

double SingleInterface::inverse_scale(double z) const {
  return position + (z <= 0.0 ? left * z : right * z);
}

ScaleFunctions::ScaleFunctions(const SdeParams& params) : params_(params) { params_.validate(); }

double ScaleFunctions::s(double x) const {
  const auto& [p, q, r, alpha, beta, a] = params_;
  if (x < 0.0) return x / p;
  if (x <= a) return x / q;
  return (x - a) / r + a / q;
}

double ScaleFunctions::sigma(double y) const {
  const auto& [p, q, r, alpha, beta, a] = params_;
  const double sa = a / q;
  if (y < 0.0) return p * y;
  if (y <= sa) return q * y;
  return r * (y - sa) + sa * q;
}

double ScaleFunctions::s_left_derivative(double x) const {
  return 1.0 / params_.coefficient(x);
}

double ScaleFunctions::sigma_left_derivative(double y) const {
  const double sa = params_.a / params_.q;
  if (y <= 0.0) return params_.p;
  return y <= sa ? params_.q : params_.r;
}

double ScaleFunctions::f(double x) const { return x <= 0.0 ? x / params_.p : x / params_.q; }

double ScaleFunctions::g(double x) const {
  const double d = x - params_.a;
  return d <= 0.0 ? d / params_.q : d / params_.r;
}

double ScaleFunctions::phi(double x) const {
  const double a = params_.a;
  return x <= a ? x : a + (params_.r / params_.q) * (x - a);
}

double ScaleFunctions::phi_inverse(double y) const {
  const double a = params_.a;
  return y <= a ? y : a + (params_.q / params_.r) * (y - a);
}

double scale_s(const SdeParams& params, double x) { return ScaleFunctions(params).s(x); }
double scale_sigma(const SdeParams& params, double y) { return ScaleFunctions(params).sigma(y); }
double phi_transform(const SdeParams& params, double x) { return ScaleFunctions(params).phi(x); }

}  // namespace mlh
