#include <cmath>

#include "doctest.h"
#include "shocklab/asep_exact.hpp"
#include "shocklab/asep_mc.hpp"
#include "shocklab/errors.hpp"

using namespace shocklab;

namespace {

SimulationPlan plan_for(const RateParams& r, int n, long samples, std::uint64_t seed) {
  SimulationPlan p;
  p.params = r;
  p.n = n;
  p.samples = samples;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("plan validation") {
  const RateParams r{0.7, 0.4, 0.1, 0.2, 0.3};
  auto p = plan_for(r, 5, 10, 1);
  p.thin_events = 3;
  CHECK_THROWS_AS(simulate(p), DomainError);
  p.thin_events = 0;
  p.n = 0;
  CHECK_THROWS_AS(simulate(p), DomainError);
}

TEST_CASE("single site occupation") {
  const RateParams r{0.7, 0.4, 0.1, 0.2, 0.3};
  const auto s = simulate_replicas(plan_for(r, 1, 2000, 11), 16);
  const auto dens = empirical_densities(s);
  const double exact = (r.alpha + r.delta) / (r.alpha + r.beta + r.gamma + r.delta);
  CHECK(std::abs(densities(stationary(r, 1))[0] - exact) < 1e-13);
  CHECK(std::abs(dens[0].value - exact) < 3.0 * dens[0].stderr_);
}

TEST_CASE("five site densities against the exact solver") {
  const RateParams r = boundary_to_rates(BoundaryParams{0.5, -0.2, 0.5, -0.2, 0.3});
  const auto s = simulate_replicas(plan_for(r, 5, 4000, 12), 16);
  const auto dens = empirical_densities(s);
  const auto exact = densities(stationary(r, 5));
  for (int i = 0; i < 5; ++i) {
    INFO("site " << i);
    CHECK(std::abs(dens[i].value - exact[i]) < 3.0 * dens[i].stderr_);
  }
}

TEST_CASE("totally asymmetric runs make no left hops") {
  const RateParams r{0.6, 0.8, 0.0, 0.0, 0.0};
  const auto s = simulate(plan_for(r, 20, 500, 3));
  CHECK(s.events > 0);
  CHECK(s.left_hops == 0);
  const RateParams back{0.6, 0.8, 0.0, 0.0, 0.4};
  CHECK(simulate(plan_for(back, 20, 500, 3)).left_hops > 0);
}

TEST_CASE("height laplace at n=6 against the exact solver") {
  const RateParams r = boundary_to_rates(BoundaryParams{0.5, -0.2, 0.5, -0.2, 0.3});
  const LaplaceRequest req{{0.5, 1.0}, {0.6, -0.4}};
  const auto s = simulate_replicas(plan_for(r, 6, 2000, 21), 16);
  const Estimate e = empirical_height_laplace(s, req);
  const double exact = height_laplace(stationary(r, 6), req);
  CHECK(e.stderr_ > 0.0);
  CHECK(std::abs(e.value - exact) < 3.0 * e.stderr_);
}

TEST_CASE("zero coefficients give exactly one") {
  const RateParams r{0.6, 0.8, 0.1, 0.1, 0.2};
  const auto s = simulate(plan_for(r, 8, 1200, 5));
  const Estimate e = empirical_height_laplace(s, LaplaceRequest{{0.5, 1.0}, {0.0, 0.0}});
  CHECK(e.value == 1.0);
  CHECK(e.stderr_ == 0.0);
  const auto few = simulate(plan_for(r, 8, 999, 5));
  CHECK_THROWS_AS(empirical_height_laplace(few, LaplaceRequest{{1.0}, {1.0}}), InsufficientSamples);
}

TEST_CASE("same seed, same stream") {
  const RateParams r{0.6, 0.8, 0.1, 0.1, 0.2};
  const auto a = simulate_replicas(plan_for(r, 12, 300, 77), 4, 2);
  const auto b = simulate_replicas(plan_for(r, 12, 300, 77), 4, 1);
  CHECK(a.configs == b.configs);
  CHECK(a.events == b.events);
  const auto c = simulate_replicas(plan_for(r, 12, 300, 78), 4, 1);
  CHECK(a.configs != c.configs);
}

TEST_CASE("height function") {
  const std::vector<std::uint8_t> cfg{1, 1, 0, 1, 0, 0};
  CHECK(height_at(cfg, 0.0) == 0);
  CHECK(height_at(cfg, 0.5) == 1);
  CHECK(height_at(cfg, 1.0) == 0);
  CHECK(height_at(cfg, 0.34) == 2);
}

TEST_CASE("triple point bulk density") {
  const RateParams r{1.0, 1.0, 0.0, 0.0, 0.0};
  auto p = plan_for(r, 200, 640, 9);
  const auto s = simulate_replicas(p, 16);
  double mean = 0.0;
  std::vector<double> per_batch(16, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    double m = 0.0;
    for (int k = 50; k < 150; ++k) m += s.configs[i][k];
    per_batch[s.replica[i]] += m / 100.0;
    mean += m / 100.0;
  }
  mean /= static_cast<double>(s.size());
  double var = 0.0;
  for (double& b : per_batch) {
    b /= 640.0;
    var += (b - mean) * (b - mean);
  }
  const double se = std::sqrt(var / 15.0 / 16.0);
  CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("convergence experiment plumbing") {
  ExperimentBudget b;
  b.samples_per_replica = 80;
  const ScalingLimitParams s{0.5, -1.0, 0.0, 0.0, 0.0};
  const std::vector<LaplaceRequest> reqs{{{1.0}, {1.0}}, {{0.5, 1.0}, {0.5, 0.5}}};
  const auto tabs = convergence_experiment(s, {10, 20}, reqs, b, 4);
  REQUIRE(tabs.size() == 2);
  for (const auto& t : tabs) {
    REQUIRE(t.rows.size() == 2);
    for (const auto& r : t.rows) {
      CHECK(std::isfinite(r.prelimit));
      CHECK(r.empirical.stderr_ > 0.0);
      CHECK(r.gap == std::abs(r.empirical.value - r.limit));
    }
  }
  // the single-request form reproduces the shared run
  const auto one = convergence_experiment(s, {10, 20}, reqs[1], b, 4);
  CHECK(one.rows[1].empirical.value == tabs[1].rows[1].empirical.value);
  const std::string csv = tabs[1].to_csv(reqs[1]);
  CHECK(csv.rfind("n,x1,x2,c1,c2,empirical,stderr,prelimit,limit\n", 0) == 0);
}

TEST_CASE("convergence experiment on the equal-parameter line") {
  ExperimentBudget b;
  b.samples_per_replica = 80;
  const auto t = convergence_experiment({-0.5, -0.5, 0.0, 0.0, 0.0}, {16}, LaplaceRequest{{1.0}, {1.0}}, b, 8);
  REQUIRE(t.rows.size() == 1);
  CHECK(std::isfinite(t.rows[0].empirical.value));
  CHECK(std::isfinite(t.rows[0].limit));
  // the quadrature refuses t = 1 on this line, the simulation does not
  CHECK(std::isnan(t.rows[0].prelimit));
  CHECK(t.rows[0].note.find("not admissible") != std::string::npos);
}
