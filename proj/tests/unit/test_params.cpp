#include <cmath>
#include <random>

#include "doctest.h"
#include "shocklab/errors.hpp"
#include "shocklab/params.hpp"

using namespace shocklab;

TEST_CASE("kappa closed form values") {
  CHECK(kappa(0.5, 0.0, 0.0, KappaSign::Plus) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kappa(0.5, 0.0, 0.0, KappaSign::Minus) == doctest::Approx(0.0));
  CHECK(kappa(1.0, 1.0, 0.0, KappaSign::Plus) * kappa(1.0, 1.0, 0.0, KappaSign::Minus) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  for (double x : {0.1, 0.7, 1.0, 3.0})
    CHECK(kappa(x, 0.0, 0.3, KappaSign::Plus) * kappa(x, 0.0, 0.3, KappaSign::Minus) == 0.0);
}

TEST_CASE("kappa domain errors") {
  CHECK_THROWS_AS(kappa(0.0, 1.0, 0.2, KappaSign::Plus), DomainError);
  CHECK_THROWS_AS(kappa(1.0, -0.1, 0.2, KappaSign::Plus), DomainError);
  CHECK_THROWS_AS(kappa(1.0, 0.1, 1.0, KappaSign::Plus), DomainError);
}

TEST_CASE("kappa roots solve the quadratic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double x = 0.01 + 3.0 * u(rng), y = 3.0 * u(rng), q = 0.99 * u(rng);
    for (auto sg : {KappaSign::Plus, KappaSign::Minus}) {
      const double z = kappa(x, y, q, sg);
      const double b = 1.0 - q - x + y;
      const double scale = std::abs(x * z * z) + std::abs(b * z) + y + 1e-300;
      CHECK(std::abs(x * z * z - b * z - y) / scale < 1e-12);
    }
    CHECK(kappa(x, y, q, KappaSign::Plus) >= 0.0);
    const double km = kappa(x, y, q, KappaSign::Minus);
    CHECK((km > -1.0 && km <= 0.0));
  }
}

TEST_CASE("rates to boundary examples") {
  auto b = rates_to_boundary({0.5, 0.5, 0.0, 0.0, 0.0});
  CHECK(b.A == doctest::Approx(1.0));
  CHECK(b.B == 0.0);
  CHECK(b.C == doctest::Approx(1.0));
  CHECK(b.D == 0.0);
  b = rates_to_boundary({1.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(b.A == 0.0);
  CHECK(b.C == 0.0);
  auto r = boundary_to_rates({1.0, 0.0, 1.0, 0.0, 0.0});
  CHECK(r.alpha == doctest::Approx(0.5));
  CHECK(r.beta == doctest::Approx(0.5));
  CHECK(r.gamma == 0.0);
  CHECK(r.delta == 0.0);
  r = boundary_to_rates({0.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(r.alpha == 1.0);
  CHECK(r.beta == 1.0);
}

TEST_CASE("parameterization round trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    RateParams r{0.05 + 2.0 * u(rng), 0.05 + 2.0 * u(rng), 1.5 * u(rng), 1.5 * u(rng), 0.95 * u(rng)};
    const RateParams back = boundary_to_rates(rates_to_boundary(r));
    CHECK(std::abs(back.alpha - r.alpha) < 1e-12);
    CHECK(std::abs(back.beta - r.beta) < 1e-12);
    CHECK(std::abs(back.gamma - r.gamma) < 1e-12);
    CHECK(std::abs(back.delta - r.delta) < 1e-12);
    const BoundaryParams b = rates_to_boundary(r);
    CHECK_NOTHROW(validate(b));
  }
  for (int i = 0; i < 100; ++i) {
    BoundaryParams b{3.0 * u(rng), -0.99 * u(rng), 3.0 * u(rng), -0.99 * u(rng), 0.95 * u(rng)};
    const BoundaryParams back = rates_to_boundary(boundary_to_rates(b));
    CHECK(std::abs(back.A - b.A) < 1e-12);
    CHECK(std::abs(back.B - b.B) < 1e-12);
    CHECK(std::abs(back.C - b.C) < 1e-12);
    CHECK(std::abs(back.D - b.D) < 1e-12);
  }
}

TEST_CASE("phase classification") {
  auto l = classify({2.0, 0.0, 0.3, 0.0, 0.0});
  CHECK(l.phase == Phase::HighDensity);
  CHECK(l.region == Region::Fan);
  l = classify({2.0, 0.0, 1.5, 0.0, 0.0});
  CHECK(l.phase == Phase::HighDensity);
  CHECK(l.region == Region::Shock);
  l = classify({1.2, 0.0, 1.2, 0.0, 0.0});
  CHECK(l.phase == Phase::CoexistenceLine);
  CHECK(l.region == Region::Shock);
  l = classify({0.5, 0.0, 0.7, 0.0, 0.0});
  CHECK(l.phase == Phase::MaxCurrent);
  l = classify({0.5, 0.0, 1.7, 0.0, 0.0});
  CHECK(l.phase == Phase::LowDensity);
  CHECK(classify({0.5, 0.0, 2.0, 0.0, 0.0}).region == Region::BoundaryAC1);
}

TEST_CASE("scaling sequence") {
  auto s = scaling_sequence({0.0, 0.0, -0.2, -0.1, 0.3}, 17);
  CHECK(s.params.A == 1.0);
  CHECK(s.params.C == 1.0);
  s = scaling_sequence({0.5, -1.0, 0.0, 0.0, 0.0}, 100);
  CHECK(s.params.A == doctest::Approx(std::exp(-0.05)).epsilon(1e-15));
  CHECK(s.params.C == doctest::Approx(std::exp(0.1)).epsilon(1e-15));
  CHECK(s.params.A * s.params.C == doctest::Approx(std::exp(0.05)).epsilon(1e-15));
  CHECK(classify(s.params).region == Region::Shock);
  const long n = 1000000;
  s = scaling_sequence({0.7, -1.3, 0.0, 0.0, 0.0}, n);
  CHECK(std::abs(std::sqrt(double(n)) * (1.0 - s.params.A) - 0.7) < 1e-3);
  CHECK(std::abs(std::sqrt(double(n)) * (1.0 - s.params.C) + 1.3) < 1e-3);
  for (long m : {10L, 100L, 1000L, 10000L})
    CHECK(classify(scaling_sequence({0.5, -1.0, -0.2, -0.2, 0.25}, m).params).region ==
          Region::Shock);
  // equal limits put t = 1 on the excluded lattice
  CHECK(scaling_sequence({-0.5, -0.5, 0.0, 0.0, 0.2}, 50).near_excluded_lattice);
  CHECK_FALSE(scaling_sequence({0.5, -1.0, 0.0, 0.0, 0.2}, 50).near_excluded_lattice);
}
