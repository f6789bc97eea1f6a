#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "mlh/medium.hpp"

namespace mlh {

/// One smooth piece of the initial data, with exact derivatives.
class Piece {
 public:
  /// c[0] + c[1] x + c[2] x^2 + ...
  static Piece polynomial(std::vector<double> coefficients);
  /// `eval(j, x)` must return the j-th derivative at x for 0 <= j <= max_order.
  static Piece analytic(std::function<double(int, double)> eval, int max_order);

  double value(double x) const { return derivative(0, x); }
  /// Throws DerivativeOrderError if order exceeds what the piece provides.
  double derivative(int order, double x) const;
  /// Mean value over [lo, hi]; exact for polynomials, 5-point Gauss-Legendre otherwise.
  double average(double lo, double hi) const;

  bool is_polynomial() const { return !eval_; }
  /// -1 when every order is available.
  int max_order() const { return max_order_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

 private:
  Piece() = default;

  std::vector<double> coefficients_;
  std::function<double(int, double)> eval_;
  int max_order_ = -1;
};

/// Initial data h = h1 on x <= 0, h2 on (0, a], h3 on (a, inf), expanded to order N.
class PiecewiseInitialData {
 public:
  struct Window {
    double lo;
    double hi;
  };

  /// Throws std::invalid_argument if order < 1 or a polynomial piece has degree > order + 1.
  PiecewiseInitialData(std::array<Piece, 3> pieces, int order, std::optional<Window> window = {});

  const Piece& piece(Region r) const { return pieces_[static_cast<int>(r)]; }
  int order() const { return order_; }
  const std::optional<Window>& window() const { return window_; }

  /// h(x), with x clamped into the boundedness window when one is set.
  double value(double x, Region r) const;
  double value(double x, const SdeParams& params) const { return value(x, params.region(x)); }
  double value(double x, const PhysicalMedium& m) const { return value(x, m.region(x)); }
  /// Mean of h over [lo, hi], which must lie inside one region.
  double average(double lo, double hi, Region r) const;

  static PiecewiseInitialData constant(double c, int order = 1);

 private:
  std::array<Piece, 3> pieces_;
  int order_;
  std::optional<Window> window_;
};

}  // namespace mlh
