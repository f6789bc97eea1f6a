#include "mlh/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlh/errors.hpp"

namespace mlh {

Piece Piece::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
  }
  Piece p;
  p.coefficients_ = std::move(coefficients);
  return p;
}

Piece Piece::analytic(std::function<double(int, double)> eval, int max_order) {
  if (!eval) throw std::invalid_argument("analytic piece needs an evaluator");
  if (max_order < 0) throw std::invalid_argument("analytic piece max_order must be >= 0");
  Piece p;
  p.eval_ = std::move(eval);
  p.max_order_ = max_order;
  return p;
}

double Piece::derivative(int order, double x) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  if (eval_) {
    if (order > max_order_) {
      throw DerivativeOrderError("piece provides derivatives up to order " + std::to_string(max_order_) +
                                 ", requested " + std::to_string(order));
    }
    return eval_(order, x);
  }
  // Horner on the order-th derivative.
  const int n = degree();
  double acc = 0.0;
  for (int i = n; i >= order; --i) {
    double falling = 1.0;
    for (int m = 0; m < order; ++m) falling *= static_cast<double>(i - m);
    acc = acc * x + falling * coefficients_[i];
  }
  return acc;
}

double Piece::average(double lo, double hi) const {
  if (hi <= lo) return value(lo);
  if (!eval_) {
    // Antiderivative difference divided by the width.
    auto prim = [&](double x) {
      double acc = 0.0;
      for (int i = degree(); i >= 0; --i) acc = acc * x + coefficients_[i] / (i + 1);
      return acc * x;
    };
    return (prim(hi) - prim(lo)) / (hi - lo);
  }
  static constexpr std::array<double, 5> nodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights{0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * value(mid + half * nodes[i]);
  return 0.5 * acc;
}

PiecewiseInitialData::PiecewiseInitialData(std::array<Piece, 3> pieces, int order, std::optional<Window> window)
    : pieces_(std::move(pieces)), order_(order), window_(window) {
  if (order_ < 1) throw std::invalid_argument("expansion order N must be >= 1");
  for (const auto& p : pieces_) {
    if (p.is_polynomial() && p.degree() > order_ + 1) {
      throw std::invalid_argument("polynomial piece of degree " + std::to_string(p.degree()) +
                                  " exceeds N + 1 = " + std::to_string(order_ + 1));
    }
  }
  if (window_ && !(window_->lo < window_->hi)) throw std::invalid_argument("empty boundedness window");
}

double PiecewiseInitialData::value(double x, Region r) const {
  if (window_) x = std::clamp(x, window_->lo, window_->hi);
  return piece(r).value(x);
}

double PiecewiseInitialData::average(double lo, double hi, Region r) const {
  const Piece& p = piece(r);
  if (!window_) return p.average(lo, hi);
  const double wlo = window_->lo;
  const double whi = window_->hi;
  if (hi <= wlo) return p.value(wlo);
  if (lo >= whi) return p.value(whi);
  // Split into the clamped-constant tails and the interior part.
  const double a = std::max(lo, wlo);
  const double b = std::min(hi, whi);
  double sum = p.average(a, b) * (b - a);
  if (lo < wlo) sum += p.value(wlo) * (wlo - lo);
  if (hi > whi) sum += p.value(whi) * (hi - whi);
  return sum / (hi - lo);
}

PiecewiseInitialData PiecewiseInitialData::constant(double c, int order) {
  return PiecewiseInitialData({Piece::polynomial({c}), Piece::polynomial({c}), Piece::polynomial({c})}, order);
}

}  // namespace mlh
