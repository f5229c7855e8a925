#include <cmath>

#include "doctest.h"
#include "shocklab/duality.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/limit_process.hpp"
#include "shocklab/specfun.hpp"

using namespace shocklab;

TEST_CASE("instance constraints") {
  CHECK_NOTHROW(DualityInstance{0.5, -1.0, {1.0}, {1.0}}.validate());
  CHECK_THROWS_AS(DualityInstance({0.5, -0.2, {1.0}, {1.0}}).validate(), ConstraintViolation);
  CHECK_THROWS_AS(DualityInstance({-0.5, -0.6, {1.0}, {0.3}}).validate(), ConstraintViolation);
  CHECK_THROWS_AS(DualityInstance({0.5, -1.0, {0.5, 1.0}, {0.0, 1.0}}).validate(), ConstraintViolation);
  CHECK_THROWS_AS(DualityInstance({0.5, -1.0, {0.5, 0.9}, {0.3, 1.0}}).validate(), ConstraintViolation);
  for (const auto& inst : admissible_instances(3, 20, 9)) CHECK_NOTHROW(inst.validate());
  CHECK(d1_grid().size() == 125);
}

TEST_CASE("d = 1 constituents") {
  const DualityInstance inst{0.5, -1.0, {1.0}, {1.0}};
  CHECK(phi_dl(inst, 1) == doctest::Approx(8.0 / 7.0 * std::exp(1.0)).epsilon(1e-14));
  const double a = 0.5, c = -1.0, s = 1.0;
  const double closed = ((s - c) * scaled_erfc_H((s - c) / 2) - (a + s) * scaled_erfc_H((a + s) / 2)) /
                        (c - a - 2 * s);
  CHECK(phi_dl(inst, 0) == doctest::Approx(closed).epsilon(1e-8));
  CHECK(phi_dl(inst, 0) < 0.0);
  CHECK(std::abs(phi_dl_qform(inst, 0) - phi_dl(inst, 0)) < 1e-7 * std::abs(phi_dl(inst, 0)));
  CHECK(psi_dl(inst, 1) == doctest::Approx(duality_closed_form_d1(a, c, s)).epsilon(1e-9));
}

TEST_CASE("d = 1 identity on the grid") {
  for (const auto& inst : d1_grid()) {
    const auto r = duality_residual(inst, PhiForm::Cauchy);
    const double closed = duality_closed_form_d1(inst.a_lim, inst.c_lim, inst.c[0]);
    CHECK(std::abs(r.lhs - closed) < 1e-6 * std::abs(closed));
    CHECK(r.rel_gap < 1e-6);
  }
}

TEST_CASE("killed-kernel rewrites agree with the Cauchy forms") {
  const DualityInstance inst{0.5, -1.0, {0.5, 1.0}, {0.7, 0.9}};
  for (int l = 0; l < 2; ++l)
    CHECK(std::abs(phi_dl_qform(inst, l) - phi_dl(inst, l)) < 1e-5 * std::abs(phi_dl(inst, l)));
  const auto [plus, minus] = phi_dl_qform_parts(inst, 1);
  CHECK(std::isfinite(plus));
  CHECK(std::isfinite(minus));
  for (const auto& i3 : admissible_instances(3, 2, 5))
    for (int l = 0; l < 3; ++l)
      CHECK(std::abs(phi_dl_qform(i3, l) - phi_dl(i3, l)) < 1e-5 * (1.0 + std::abs(phi_dl(i3, l))));
}

TEST_CASE("right-hand side against the eta Laplace transform") {
  const DualityInstance inst{0.5, -1.0, {0.5, 1.0}, {0.7, 0.9}};
  const double r2 = std::sqrt(2.0);
  double rhs = 0.0;
  for (int l = 1; l <= 2; ++l) {
    const double v = psi_dl(inst, l);
    CHECK(v >= 0.0);
    rhs += v;
  }
  const double eta = eta_laplace({inst.a_lim / r2, inst.c_lim / r2}, inst.x, {inst.c[0] / r2, inst.c[1] / r2});
  CHECK(std::abs(rhs / calH(inst.a_lim / r2, inst.c_lim / r2) - eta) < 1e-4);
  CHECK(rhs > 0.0);
}

TEST_CASE("d = 2 identity") {
  const auto r = duality_residual({0.5, -1.0, {0.5, 1.0}, {0.7, 0.9}});
  CHECK(r.rel_gap < 1e-3);
  for (const auto& inst : admissible_instances(2, 10, 17)) CHECK(duality_residual(inst).rel_gap < 1e-3);
}

TEST_CASE("d = 2 collapses to d = 1 as c_1 -> 0") {
  const double s = 1.0;
  const double d1 = duality_residual({0.5, -1.0, {1.0}, {s}}).lhs;
  double prev = 1e300;
  for (double c1 : {1e-1, 1e-2, 1e-3}) {
    const auto r = duality_residual({0.5, -1.0, {0.5, 1.0}, {c1, s}});
    const double gap = std::abs(r.lhs - d1);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("limit transform equals the Brownian factor times the normalized left side") {
  const DualityInstance inst{0.5, -1.0, {0.5, 1.0}, {0.7, 0.9}};
  const double r2 = std::sqrt(2.0);
  const double via_phi =
      brownian_factor(inst.x, inst.c) * duality_residual(inst).lhs / calH(inst.a_lim / r2, inst.c_lim / r2);
  CHECK(via_phi == doctest::Approx(limit_height_laplace({inst.a_lim, inst.c_lim}, inst.x, inst.c)).epsilon(1e-6));
}
