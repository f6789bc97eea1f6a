#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mlh/pde_oracle.hpp"
#include "mlh/quadrature.hpp"

using namespace mlh;

namespace {

const SdeParams kMatched{1.0, 2.0, 0.5, 0.5, -3.0, 1.0};

Piece gaussian_bump(double c, double w) {
  return Piece::analytic([c, w](int, double x) { return std::exp(-(x - c) * (x - c) / w); }, 0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("grid puts faces on both interfaces") {
  const auto m = from_sde_params(kMatched);
  const auto g = Grid::uniform(m, -1.03, 2.21, 0.07);
  CHECK(std::binary_search(g.faces.begin(), g.faces.end(), 0.0));
  CHECK(std::binary_search(g.faces.begin(), g.faces.end(), 1.0));
  CHECK_NOTHROW(g.validate(m));
  for (double w : g.widths) CHECK(w <= 0.07 + 1e-15);
  auto broken = g;
  broken.faces[5] += 1e-3;
  broken.faces.erase(std::find(broken.faces.begin(), broken.faces.end(), 0.0));
  broken.centers.pop_back();
  broken.widths.pop_back();
  CHECK_THROWS_AS(broken.validate(m), std::invalid_argument);
  const double xs[] = {0.5};
  const auto c = Grid::covering(m, xs, 0.01, 1e-2);
  CHECK(c.covers(m, 0.5, 0.01));
  CHECK_FALSE(c.covers(m, 0.5, 0.04));
}

TEST_CASE("constants are invariant") {
  const auto m = from_sde_params(SdeParams{1.0, 2.0, 0.5, 0.5, -1.0, 1.0});
  const auto h = PiecewiseInitialData::constant(2.5);
  const auto g = Grid::uniform(m, -3, 4, 0.01);
  const auto u = solve(m, h, 0.3, g, 1e-3);
  for (double v : u.values) CHECK(std::abs(v - 2.5) < 1e-12);
  CHECK_FALSE(u.boundary_warning());
  CHECK_THROWS_AS(solve(m, h, 0.3, g, 0.0), std::invalid_argument);
}

TEST_CASE("constant coefficients: smoothed step against the exact convolution") {
  const auto m = PhysicalMedium(1.0, {Layer{1, 1}, Layer{1, 1}, Layer{1, 1}});
  const double s0 = 0.1, T = 0.02;
  const auto step = Piece::analytic([&](int, double x) { return normal_cdf(x / s0); }, 0);
  const PiecewiseInitialData h({step, step, step}, 1);
  auto error = [&](double dx, double dt) {
    const auto g = Grid::uniform(m, -3, 3, dx);
    const auto u = solve(m, h, T, g, dt);
    double e = 0.0;
    for (double x : {-0.2, -0.05, 0.0, 0.05, 0.5, 1.0}) e = std::max(e, std::abs(u.at(g, m, x) - normal_cdf(x / std::sqrt(s0 * s0 + T))));
    return e;
  };
  const double e1 = error(4e-3, 2e-6);
  const double e2 = error(2e-3, 1e-6);
  CHECK(e1 < 5 * (4e-3 * 4e-3 + 2e-6));
  CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("matched medium against the closed-form kernel") {
  const auto m = from_sde_params(kMatched);
  const PiecewiseInitialData h({Piece::polynomial({1, 1, 0.5}), Piece::polynomial({1, 1, -0.5}), Piece::polynomial({0.5, 2})}, 2);
  const double T = 0.01;
  const std::vector<double> xs{-0.5, -0.1, 0.0, 0.3, 0.7, 1.0, 1.2};
  auto error = [&](double dx, double dt) {
    const auto g = Grid::covering(m, xs, T, dx);
    const auto u = solve(m, h, T, g, dt);
    double e = 0.0;
    for (double x : xs) e = std::max(e, std::abs(u.at(g, m, x) - closed_form_expectation(kMatched, h, x, T)));
    return e;
  };
  const double dx = 2e-3, dt = 1e-6;
  const double e1 = error(dx, dt);
  CHECK(e1 < 5 * (dx * dx + dt) * 3.0);
  CHECK(e1 / error(dx / 2, dt / 2) >= 3.0);
}

TEST_CASE("maximum principle and conservation") {
  const auto m = from_sde_params(SdeParams{1.0, 2.0, 0.5, 0.5, -1.0, 1.0});
  const PiecewiseInitialData h({gaussian_bump(-0.3, 0.02), gaussian_bump(0.5, 0.05), gaussian_bump(1.2, 0.01)}, 1);
  const auto g = Grid::uniform(m, -4, 5, 5e-3);
  const double times[] = {0.005, 0.02, 0.05};
  const auto fields = solve_times(m, h, times, g, 1e-4);
  const double mass0 = discrete_mass(m, g, project_initial(m, h, g));
  for (const auto& f : fields) {
    CHECK(std::abs(discrete_mass(m, g, f) - mass0) < 1e-10);
    CHECK(*std::min_element(f.values.begin(), f.values.end()) >= -1e-14);
    CHECK(*std::max_element(f.values.begin(), f.values.end()) <= 1.0 + 1e-14);
    CHECK_FALSE(f.boundary_warning());
  }
  CHECK(fields.back().time == 0.05);
}

TEST_CASE("one implicit step is self-adjoint in the weight rho * width") {
  const auto m = from_sde_params(SdeParams{1.0, 2.0, 0.5, 0.5, -1.0, 1.0});
  const PiecewiseInitialData f({gaussian_bump(-0.2, 0.01), gaussian_bump(-0.2, 0.01), gaussian_bump(-0.2, 0.01)}, 1);
  const PiecewiseInitialData k({gaussian_bump(1.1, 0.02), gaussian_bump(1.1, 0.02), gaussian_bump(1.1, 0.02)}, 1);
  const auto g = Grid::uniform(m, -4, 5, 1e-2);
  const double dt = 0.01;
  const auto pf = solve(m, f, dt, g, dt);
  const auto pk = solve(m, k, dt, g, dt);
  const auto f0 = project_initial(m, f, g);
  const auto k0 = project_initial(m, k, g);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = m.density(g.centers[i]) * g.widths[i];
    lhs += w * f0.values[i] * pk.values[i];
    rhs += w * pf.values[i] * k0.values[i];
  }
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("boundary influence is flagged on a small domain") {
  const auto m = from_sde_params(SdeParams{1.0, 2.0, 0.5, 0.5, -1.0, 1.0});
  const PiecewiseInitialData h({Piece::polynomial({0, 1}), Piece::polynomial({0, 1}), Piece::polynomial({1, 0.5})}, 1);
  const auto g = Grid::uniform(m, -0.3, 1.3, 1e-2);
  CHECK(solve(m, h, 0.1, g, 1e-3).boundary_warning());
}

TEST_CASE("representation check on the Brownian medium") {
  const auto m = PhysicalMedium(1.0, {Layer{1, 1}, Layer{1, 1}, Layer{1, 1}});
  const PiecewiseInitialData h({Piece::polynomial({0, 1}), Piece::polynomial({0, 1}), Piece::polynomial({0, 1})}, 2);
  RepresentationOptions opts;
  opts.sampler.n_paths = 20000;
  const double xs[] = {-0.5, 0.0, 0.5, 1.0};
  for (const auto& r : representation_check(m, h, 0.01, xs, opts)) {
    CHECK(std::abs(r.pde - r.x) < 1e-12);
    CHECK(r.expansion_residual <= r.pde_bound + 1e-12);
    CHECK(r.mc_residual < 3 * r.mc_std_error + r.pde_bound);
  }
}

TEST_CASE("extrapolated oracle values") {
  // Continuous and flux-compatible, so the scheme converges at second order everywhere.
  const auto m = from_sde_params(kMatched);
  const PiecewiseInitialData h({Piece::polynomial({1, 1, 0.7}), Piece::polynomial({1, 0.5, -0.8}),
                                Piece::polynomial({5.4, -5.0, 0.3})},
                               2);
  const double xs[] = {0.0, 0.5, 1.0};
  const auto plain = oracle_values(m, h, 0.01, xs, 2e-3, 1e-6);
  const auto rich = oracle_values(m, h, 0.01, xs, 2e-3, 1e-6, true);
  for (int i = 0; i < 3; ++i) {
    const double exact = closed_form_expectation(kMatched, h, xs[i], 0.01);
    CHECK(std::abs(plain[i].value - exact) <= plain[i].bound);
    CHECK(std::abs(rich[i].value - exact) < std::abs(plain[i].value - exact));
  }
}
