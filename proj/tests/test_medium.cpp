#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mlh/errors.hpp"
#include "mlh/medium.hpp"
#include "mlh/medium_json.hpp"

using namespace mlh;

namespace {

PhysicalMedium medium(double a, double a1, double r1, double a2, double r2, double a3, double r3) {
  return PhysicalMedium(a, {Layer{a1, r1}, Layer{a2, r2}, Layer{a3, r3}});
}

}  // namespace

TEST_CASE("to_sde_params on the Brownian medium") {
  const auto p = to_sde_params(medium(1, 1, 1, 1, 1, 1, 1));
  CHECK(p.p == 1.0);
  CHECK(p.q == 1.0);
  CHECK(p.r == 1.0);
  CHECK(p.alpha == 0.0);
  CHECK(p.beta == 0.0);
  CHECK(p.a == 1.0);
}

TEST_CASE("to_sde_params by direct substitution") {
  const auto p = to_sde_params(medium(1, 4, 1, 1, 2, 1, 2));
  CHECK(p.p == 2.0);
  CHECK(p.q == 1.0);
  CHECK(p.r == 1.0);
  CHECK(p.alpha == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(0.0));
}

TEST_CASE("matching condition is beta = 1 - q/r") {
  // rho2 sqrt(a2) = rho3 sqrt(a3): 1 * 2 = 4 * 0.5
  const auto m = medium(1.5, 1, 3, 4, 1, 0.25, 4);
  CHECK(m.matched());
  const auto p = to_sde_params(m);
  CHECK(p.beta == doctest::Approx(1.0 - p.q / p.r).epsilon(1e-14));
  CHECK(p.matched());
  CHECK_FALSE(to_sde_params(medium(1, 1, 2, 4, 1, 0.25, 8)).matched());
}

TEST_CASE("gauge: scaling every density leaves the SDE parameters unchanged") {
  const auto base = to_sde_params(medium(0.7, 1.3, 0.4, 2.2, 1.9, 0.6, 3.1));
  for (double lambda : {1e-3, 0.5, 7.0, 1e4}) {
    const auto p = to_sde_params(medium(0.7, 1.3, 0.4 * lambda, 2.2, 1.9 * lambda, 0.6, 3.1 * lambda));
    CHECK(p.alpha == doctest::Approx(base.alpha).epsilon(1e-14));
    CHECK(p.beta == doctest::Approx(base.beta).epsilon(1e-14));
    CHECK(p.alpha < 1.0);
    CHECK(p.beta < 1.0);
  }
}

TEST_CASE("from_sde_params inverts to_sde_params with rho2 = 1") {
  const SdeParams p{1.0, 2.0, 0.5, 0.5, -1.0, 1.0};
  const auto m = from_sde_params(p);
  CHECK(m.layer(1).density == 1.0);
  CHECK(m.layer(0).density == doctest::Approx(2.0));
  CHECK(m.layer(2).density == doctest::Approx(8.0));
  const auto back = to_sde_params(m);
  CHECK(back.p == doctest::Approx(p.p));
  CHECK(back.q == doctest::Approx(p.q));
  CHECK(back.r == doctest::Approx(p.r));
  CHECK(back.alpha == doctest::Approx(p.alpha));
  CHECK(back.beta == doctest::Approx(p.beta));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(medium(0, 1, 1, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(medium(1, -1, 1, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(medium(1, 1, 1, 1, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((SdeParams{1, 1, 1, 1.0, 0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SdeParams{1, 1, 1, 0, 1.5, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SdeParams{1, 0, 1, 0, 0, 1}.validate()), std::invalid_argument);
  CHECK_NOTHROW((SdeParams{1, 2, 3, -5, -7, 0.1}.validate()));
}

TEST_CASE("closed-left region convention") {
  const SdeParams p{1, 2, 3, 0, 0, 1};
  CHECK(p.region(0.0) == Region::left);
  CHECK(p.region(1e-300) == Region::middle);
  CHECK(p.region(1.0) == Region::middle);
  CHECK(p.region(std::nextafter(1.0, 2.0)) == Region::right);
}

TEST_CASE("scale functions") {
  const SdeParams p{2.0, 1.0, 3.0, 0.0, 0.0, 1.0};
  CHECK(scale_s(p, 0.0) == 0.0);
  CHECK(scale_s(p, p.a) == doctest::Approx(p.a / p.q));
  CHECK(scale_s(p, -2.0) == doctest::Approx(-1.0));
  CHECK(scale_s(p, 2.0) == doctest::Approx(1.0 + 1.0 / 3.0));
  for (double x : {-5.0, -1.0, 0.0, 0.5, p.a, 2 * p.a}) CHECK(scale_sigma(p, scale_s(p, x)) == doctest::Approx(x).epsilon(1e-15));

  const ScaleFunctions sf(p);
  for (double b : {0.0, p.a}) {
    const double below = std::nextafter(b, -10.0);
    const double above = std::nextafter(b, 10.0);
    CHECK(std::abs(sf.s(below) - sf.s(above)) < 1e-15);
    CHECK(std::abs(sf.f(below) - sf.f(above)) < 1e-15);
    CHECK(std::abs(sf.g(below) - sf.g(above)) < 1e-15);
    CHECK(std::abs(sf.phi(below) - sf.phi(above)) < 1e-15);
  }
  const double sa = sf.s(p.a);
  CHECK(std::abs(sf.sigma(std::nextafter(sa, 0.0)) - sf.sigma(std::nextafter(sa, 10.0))) < 1e-14);
  CHECK(sf.s_left_derivative(0.0) == doctest::Approx(1.0 / p.p));
  CHECK(sf.s_left_derivative(p.a) == doctest::Approx(1.0 / p.q));
  CHECK(sf.s_left_derivative(2.0) == doctest::Approx(1.0 / p.r));
  CHECK(sf.sigma_left_derivative(0.0) == doctest::Approx(p.p));
  CHECK(sf.sigma_left_derivative(sa) == doctest::Approx(p.q));
  CHECK(sf.g(p.a) == 0.0);
  double prev = sf.s(-10.0);
  for (double x = -9.9; x < 10.0; x += 0.1) {
    CHECK(sf.s(x) > prev);
    prev = sf.s(x);
  }
}

TEST_CASE("phi transform") {
  CHECK(phi_transform(SdeParams{1, 2, 1, 0, 0, 1}, 1.0) == 1.0);
  CHECK(phi_transform(SdeParams{1, 1, 2, 0, 0, 1e-300}, 3.0) == doctest::Approx(6.0));
  CHECK(phi_transform(SdeParams{1, 2, 1, 0, 0, 1}, -1.0) == -1.0);
  const SdeParams p{1, 2, 0.5, 0.5, -1, 1};
  const ScaleFunctions sf(p);
  for (double x : {-3.0, 0.0, 0.9, 1.0, 1.1, 4.0}) {
    CHECK(sf.phi_inverse(sf.phi(x)) == doctest::Approx(x).epsilon(1e-15));
    CHECK((sf.phi(x) > p.a) == (x > p.a));
  }
}

TEST_CASE("JSON medium descriptor") {
  const auto j = nlohmann::json::parse(
      R"({"a": 1, "layers": [{"diffusivity": 1, "density": 2}, {"diffusivity": 4, "density": 1},
                             {"diffusivity": 0.25, "density": 8}]})");
  const auto m = medium_from_json(j);
  CHECK(m.a() == 1.0);
  CHECK(m.layer(2).density == 8.0);
  CHECK(medium_from_json(medium_to_json(m)).layer(1).diffusivity == 4.0);

  auto bad = j;
  bad["extra"] = 1;
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = j;
  bad["layers"][0]["density"] = -1;
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = j;
  bad["layers"].erase(2);
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = j;
  bad["layers"][1]["conductance"] = 3;
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
}
