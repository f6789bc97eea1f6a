#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mlh/errors.hpp"
#include "mlh/initial_data.hpp"

using namespace mlh;

TEST_CASE("polynomial piece derivatives") {
  const auto p = Piece::polynomial({1.0, -2.0, 3.0, 0.5});
  CHECK(p.value(2.0) == doctest::Approx(1 - 4 + 12 + 4));
  CHECK(p.derivative(1, 2.0) == doctest::Approx(-2 + 12 + 6));
  CHECK(p.derivative(2, 2.0) == doctest::Approx(6 + 6));
  CHECK(p.derivative(3, 2.0) == doctest::Approx(3));
  CHECK(p.derivative(4, 2.0) == 0.0);
  CHECK(p.degree() == 3);
  CHECK(p.average(0.0, 2.0) == doctest::Approx((2 - 4 + 8 + 2) / 2.0));
}

TEST_CASE("analytic piece") {
  const auto e = Piece::analytic([](int, double x) { return std::exp(x); }, 3);
  CHECK(e.derivative(3, 0.5) == doctest::Approx(std::exp(0.5)));
  CHECK_THROWS_AS(e.derivative(4, 0.5), DerivativeOrderError);
  CHECK(e.average(0.0, 1e-3) == doctest::Approx((std::exp(1e-3) - 1) / 1e-3).epsilon(1e-13));
}

TEST_CASE("piecewise assembly and regions") {
  const PiecewiseInitialData h({Piece::polynomial({1.0}), Piece::polynomial({0.0, 1.0}), Piece::polynomial({0.0, 0.0, 1.0})}, 2);
  const SdeParams p{1, 1, 1, 0, 0, 1};
  CHECK(h.value(-3.0, p) == 1.0);
  CHECK(h.value(0.0, p) == 1.0);  // closed-left: 0 belongs to the left piece
  CHECK(h.value(0.5, p) == 0.5);
  CHECK(h.value(1.0, p) == 1.0);
  CHECK(h.value(3.0, p) == 9.0);
  CHECK(h.order() == 2);
}

TEST_CASE("degree and order validation") {
  CHECK_THROWS_AS(PiecewiseInitialData({Piece::polynomial({1}), Piece::polynomial({1}), Piece::polynomial({1})}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      PiecewiseInitialData({Piece::polynomial({1}), Piece::polynomial({0, 0, 0, 0, 1}), Piece::polynomial({1})}, 2),
      std::invalid_argument);
  CHECK_NOTHROW(PiecewiseInitialData({Piece::polynomial({1}), Piece::polynomial({0, 0, 0, 0, 1}), Piece::polynomial({1})}, 3));
}

TEST_CASE("boundedness window clamps the argument") {
  const PiecewiseInitialData h({Piece::polynomial({0, 1}), Piece::polynomial({0, 1}), Piece::polynomial({0, 1})}, 1,
                               PiecewiseInitialData::Window{-2.0, 5.0});
  CHECK(h.value(-10.0, Region::left) == -2.0);
  CHECK(h.value(10.0, Region::right) == 5.0);
  CHECK(h.value(1.0, Region::middle) == 1.0);
  CHECK(h.average(4.0, 6.0, Region::right) == doctest::Approx((4.5 * 1 + 5.0 * 1) / 2));
}

TEST_CASE("constant data") {
  const auto h = PiecewiseInitialData::constant(2.5, 3);
  CHECK(h.value(-1, Region::left) == 2.5);
  CHECK(h.value(7, Region::right) == 2.5);
  CHECK(h.order() == 3);
}
