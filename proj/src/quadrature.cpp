#include "mlh/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "mlh/kernels.hpp"

namespace mlh {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

double l1_estimate(const std::function<double(double)>& f, double lo, double hi) {
  double l1 = 0.0;
  Kronrod::integrate(f, lo, hi, 4, 1e-3, nullptr, &l1);
  return l1;
}

// Adaptive pass whose error target is tol * max(own L1, scale); a segment carrying a negligible
// share of the total stops early instead of chasing relative accuracy in round-off.
double integrate_scaled(const std::function<double(double)>& f, double lo, double hi, double tol, double scale) {
  const double own = l1_estimate(f, lo, hi);
  if (own == 0.0) return 0.0;
  const double eff = std::min(1.0, tol * std::max(1.0, scale / own));
  return Kronrod::integrate(f, lo, hi, 25, eff);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol, double scale) {
  if (hi <= lo) return 0.0;
  return integrate_scaled(f, lo, hi, tol, scale);
}

double integrate_split(const std::function<double(double)>& f, double lo, double hi,
                       const std::vector<double>& breaks, double tol) {
  std::vector<double> pts{lo};
  for (double b : breaks) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  double total_l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total_l1 += l1_estimate(f, pts[i], pts[i + 1]);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate_scaled(f, pts[i], pts[i + 1], tol, total_l1);
  return sum;
}

Window kernel_window(const SdeParams& params, double x, double t, double width) {
  const double half = width * std::max({params.p, params.q, params.r}) * std::sqrt(t);
  return {x - half, x + half};
}

double closed_form_expectation(const SdeParams& params, const PiecewiseInitialData& h, double x, double T) {
  const auto w = kernel_window(params, x, T);
  auto integrand = [&](double y) { return h.value(y, params) * kernel_two_interface(params, T, x, y).value; };
  return integrate_split(integrand, w.lo, w.hi, {0.0, params.a, x});
}

}  // namespace mlh
