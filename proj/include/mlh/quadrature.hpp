#pragma once

#include <functional>
#include <vector>

#include "mlh/initial_data.hpp"
#include "mlh/medium.hpp"

namespace mlh {

/// Adaptive Gauss-Kronrod (15 point, recursive bisection) on [lo, hi]. The error target is
/// tol * max(integral of |f|, scale); pass the size of a surrounding integral as `scale` when
/// this piece may be negligible against it.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13,
                 double scale = 0.0);

/// Same, splitting at every listed point strictly inside [lo, hi]; each piece is held to
/// tol relative to the integral of |f| over the whole range.
double integrate_split(const std::function<double(double)>& f, double lo, double hi,
                       const std::vector<double>& breaks, double tol = 1e-13);

/// Integration window for a kernel started at x: {y : |s(y) - s(x)| <= width * sqrt(t)}.
struct Window {
  double lo;
  double hi;
};
Window kernel_window(const SdeParams& params, double x, double t, double width = 12.0);

/// u(T, x) = integral h(y) p^Y(T, x, y) dy with the two-interface kernel (matched media only).
double closed_form_expectation(const SdeParams& params, const PiecewiseInitialData& h, double x, double T);

}  // namespace mlh
