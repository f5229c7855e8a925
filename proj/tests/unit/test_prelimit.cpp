#include <cmath>

#include "doctest.h"
#include "shocklab/asep_exact.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/prelimit.hpp"
#include "shocklab/specfun.hpp"

using namespace shocklab;

namespace {

const BoundaryParams kFan{0.5, -0.2, 0.5, -0.2, 0.3};
const BoundaryParams kShock{1.3, -0.2, 1.1, -0.2, 0.25};

void check_against_exact(const BoundaryParams& bp, const LaplaceRequest& req, int n, double tol) {
  const StationaryTable st = stationary(boundary_to_rates(bp), n);
  const double exact = height_laplace(st, req);
  const double viaint = prelimit_height_laplace(req, bp, n);
  CHECK(viaint > 0.0);
  CHECK(std::abs(viaint - exact) < tol);
}

}  // namespace

TEST_CASE("phi with zero coefficient collapses to Z_n") {
  for (long n : {3L, 7L, 40L}) {
    const double phi = phi_d_n(LaplaceRequest{{1.0}, {0.0}}, kFan, n);
    CHECK(phi == doctest::Approx(z_n(kFan, n)).epsilon(1e-12));
  }
}

TEST_CASE("integral form matches the exact stationary law") {
  SUBCASE("d = 1, n = 3") {
    check_against_exact(kFan, LaplaceRequest{{1.0}, {0.7}}, 3, 1e-8);
    check_against_exact(kShock, LaplaceRequest{{1.0}, {0.4}}, 3, 1e-8);
  }
  SUBCASE("d = 2, n = 6") {
    check_against_exact(kFan, LaplaceRequest{{0.5, 1.0}, {0.8, 0.5}}, 6, 1e-7);
    check_against_exact(kShock, LaplaceRequest{{0.5, 1.0}, {0.6, -0.3}}, 6, 1e-7);
  }
  SUBCASE("d = 3, n = 2..8") {
    for (int n = 2; n <= 8; ++n) {
      check_against_exact(kFan, LaplaceRequest{{1.0 / 3, 2.0 / 3, 1.0}, {0.5, 0.2, 0.9}}, n, 1e-7);
      check_against_exact(kShock, LaplaceRequest{{1.0 / 3, 2.0 / 3, 1.0}, {0.05, 0.35, 0.05}}, n,
                          1e-7);
    }
  }
}

TEST_CASE("Z_n from two evaluation points of the exact law") {
  // E[t^{N}] = 4^{-n} int (1 + t + 2 sqrt(t) y)^n pi_t(dy) / Z_n for a single time t.
  const int n = 4;
  for (const BoundaryParams& bp : {kFan, kShock}) {
    const double t = 0.7;
    const StationaryTable st = stationary(boundary_to_rates(bp), n);
    const double moment = joint_moment(st, std::vector<double>(n, t));
    std::vector<std::function<double(double)>> f{
        [&](double y) { return std::pow((1.0 + t + 2.0 * std::sqrt(t) * y) / 4.0, n); }};
    const double num = integrate_joint(bp, {t}, f);
    const double zn = num / moment;
    CHECK(std::abs(z_n(bp, n) / zn - 1.0) < 1e-7);
  }
}

TEST_CASE("Z_n refuses the coexistence line") {
  const BoundaryParams coex{1.2, -0.2, 1.2, -0.2, 0.3};
  CHECK_THROWS_AS(z_n(coex, 10), TimeNotAdmissible);
}

TEST_CASE("inadmissible time is reported") {
  // C/A = 0.846..., exp(-2 s / sqrt 4) hits it at s = -log(C/A)
  const double s = -std::log(kShock.C / kShock.A);
  CHECK_THROWS_AS(phi_d_n(LaplaceRequest{{1.0}, {s}}, kShock, 4), TimeNotAdmissible);
}

TEST_CASE("Z_n approaches calH along the scaling sequence") {
  const double a = 0.5, c = -1.0;
  const ScalingLimitParams sl{a, c, -0.2, -0.2, 0.3};
  const double target = calH(a / std::sqrt(2.0), c / std::sqrt(2.0));
  double prev = 1e300;
  for (long n : {100L, 1000L, 10000L}) {
    const double err = std::abs(z_n(scaling_sequence(sl, n).params, n) - target);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("atom contribution to Z_n") {
  const double a = -0.5, c = -1.0;  // a < 0 < -c
  const ScalingLimitParams sl{a, c, -0.2, -0.2, 0.3};
  const double lim = (2 * c * std::exp(c * c / 4) - 2 * a * std::exp(a * a / 4)) / (c - a);
  const long n = 10000;
  const ZnParts p = z_n_parts(scaling_sequence(sl, n).params, n);
  CHECK(std::abs(p.atoms - lim) < 5e-2);
}

TEST_CASE("tangent-scale limits") {
  const double a = 0.5, c = -1.0, t = -0.3, s = -0.8;
  const long n = 10000;
  const BoundaryParams bp = scaling_sequence(ScalingLimitParams{a, c, -0.2, -0.2, 0.3}, n).params;
  const TangentMeasureView view(bp, n, t);

  const auto at = view.atoms();
  REQUIRE(at.size() == 1);
  CHECK(std::abs(at[0].location - tangent_limit::atom_location(a, c, t)) < 5e-2);
  CHECK(std::abs(at[0].mass - tangent_limit::atom_mass(a, c, t)) < 5e-2);

  for (double u : {0.5, 1.0, 5.0, 20.0}) {
    const double lim = tangent_limit::density(a, c, t, u);
    CHECK(lim <= 0.0);
    CHECK(std::abs(view.density(u) - lim) < 5e-2);
  }
  for (double u : {0.5, 2.0}) {
    for (double v : {0.5, 1.0, 5.0}) {
      CHECK(std::abs(view.transition_density(s, u, v) -
                     tangent_limit::transition_density(a, s, t, u, v)) < 5e-2);
    }
  }
  CHECK(std::abs(view.atom_transition_mass(s) - tangent_limit::atom_transition_mass(a, c, s, t)) <
        5e-2);
  for (double v : {0.5, 1.0, 5.0}) {
    CHECK(std::abs(view.atom_transition_density(s, v) -
                   tangent_limit::atom_transition_density(a, c, s, t, v)) < 5e-2);
  }
}
