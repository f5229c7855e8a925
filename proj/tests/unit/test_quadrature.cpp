#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shocklab/errors.hpp"
#include "shocklab/quadrature.hpp"

using namespace shocklab;

TEST_CASE("Kronrod rule integrates polynomials") {
  for (int deg = 0; deg <= 29; ++deg) {
    auto r = integrate([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-14));
  }
}

TEST_CASE("adaptive integration of awkward integrands") {
  auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  r = integrate([](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi) / 100.0).epsilon(1e-10));
  QuadOptions o;
  o.breakpoints = {0.5};
  r = integrate([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0, o);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("semi-infinite maps") {
  auto r = integrate_upper_infinite([](double x) { return std::exp(-x); }, 0.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  r = integrate_upper_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0);
  CHECK(r.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
  r = integrate_lower_infinite([](double x) { return std::exp(2.0 * x); }, 1.0);
  CHECK(r.value == doctest::Approx(0.5 * std::exp(2.0)).epsilon(1e-12));
  r = integrate_upper_infinite([](double x) { return std::exp(-0.02 * x); }, 0.0, {}, 50.0);
  CHECK(r.value == doctest::Approx(50.0).epsilon(1e-10));
}

TEST_CASE("checked throws with estimate") {
  QuadOptions o;
  o.max_intervals = 2;
  auto r = integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3141)); }, 0.0, 1.0, o);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(checked(r, "test"), QuadratureNotConverged);
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 64}) {
    auto g = gauss_legendre(n);
    double w = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      w += g.weights[i];
      m2 += g.weights[i] * g.nodes[i] * g.nodes[i];
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    if (n >= 2) CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
}
