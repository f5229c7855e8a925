#include <cmath>
#include <random>

#include "doctest.h"
#include "shocklab/asep_exact.hpp"
#include "shocklab/errors.hpp"

using namespace shocklab;

namespace {

// Brute-force enumeration of E[exp(-sum_k c_k h_n(x_k)/sqrt n)].
double laplace_by_enumeration(const StationaryTable& st, const LaplaceRequest& req) {
  const int n = st.n;
  double total = 0.0;
  for (size_t s = 0; s < st.probs.size(); ++s) {
    double expo = 0.0;
    for (int k = 0; k < req.d(); ++k) {
      const long nk = static_cast<long>(std::floor(n * req.x[k] + 1e-9));
      long h = 0;
      for (long i = 1; i <= nk; ++i) h += 2 * occupied(static_cast<Config>(s), int(i)) - 1;
      expo -= req.c[k] * double(h) / std::sqrt(double(n));
    }
    total += st.probs[s] * std::exp(expo);
  }
  return total;
}

}  // namespace

TEST_CASE("generator structure") {
  const RateParams r{0.3, 0.7, 0.2, 0.1, 0.4};
  auto g = build_generator(r, 1);
  REQUIRE(g.exit_rate.size() == 2);
  CHECK(g.exit_rate[0] == doctest::Approx(0.4));
  CHECK(g.exit_rate[1] == doctest::Approx(0.9));
  for (int n : {1, 3, 6}) {
    g = build_generator(r, n);
    for (double s : g.row_sums()) CHECK(s == 0.0);
    const Config full = (Config{1} << n) - 1;
    CHECK(g.exit_rate[full] == doctest::Approx(0.9));
  }
  CHECK_THROWS_AS(build_generator(r, 15), SizeLimit);
}

TEST_CASE("stationary small cases") {
  const RateParams r{0.3, 0.7, 0.2, 0.1, 0.4};
  auto st = stationary(r, 1);
  CHECK(st.probs[1] == doctest::Approx(0.4 / 1.3).epsilon(1e-14));
  st = stationary(RateParams{1.0, 1.0, 0.0, 0.0, 0.0}, 2);
  // bit order: site 1 is the low bit
  CHECK(st.probs[0b00] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(st.probs[0b01] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(st.probs[0b10] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(st.probs[0b11] == doctest::Approx(0.2).epsilon(1e-14));
  auto rho = densities(st);
  CHECK(rho[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(rho[1] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(config_string(0b01, 2) == "10");
  for (int n : {4, 7, 11}) {
    st = stationary(r, n);
    double sum = 0.0;
    for (double p : st.probs) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(st.residual < 1e-11);
  }
}

TEST_CASE("joint moments") {
  const auto st = stationary(RateParams{0.6, 0.4, 0.1, 0.3, 0.2}, 5);
  CHECK(joint_moment(st, std::vector<double>(5, 1.0)) == doctest::Approx(1.0).epsilon(1e-13));
  const double e1 = densities(st)[0];
  CHECK(joint_moment(st, {0.3, 1, 1, 1, 1}) == doctest::Approx(1.0 + (0.3 - 1.0) * e1).epsilon(1e-13));
}

TEST_CASE("height Laplace transform") {
  const auto st = stationary(RateParams{0.6, 0.4, 0.1, 0.3, 0.2}, 6);
  CHECK(height_laplace(st, {{1.0}, {0.0}}) == doctest::Approx(1.0).epsilon(1e-13));
  for (double c : {-1.5, 0.4, 2.0}) {
    const LaplaceRequest req{{1.0}, {c}};
    CHECK(std::abs(height_laplace(st, req) - laplace_by_enumeration(st, req)) < 1e-12);
  }
  const LaplaceRequest req2{{0.5, 1.0}, {0.7, -0.3}};
  CHECK(std::abs(height_laplace(st, req2) - laplace_by_enumeration(st, req2)) < 1e-12);
  const LaplaceRequest req3{{1.0 / 3.0, 2.0 / 3.0, 1.0}, {0.2, 1.1, 0.5}};
  CHECK(std::abs(height_laplace(st, req3) - laplace_by_enumeration(st, req3)) < 1e-12);
  CHECK(height_laplace(st, req3) > 0.0);
}

TEST_CASE("particle-hole symmetry") {
  const RateParams r{0.6, 0.4, 0.1, 0.3, 0.2};
  const RateParams swapped{r.beta, r.alpha, r.delta, r.gamma, r.q};
  for (int n = 1; n <= 8; ++n) {
    const auto a = densities(stationary(r, n));
    const auto b = densities(stationary(swapped, n));
    for (int i = 0; i < n; ++i) CHECK(std::abs(a[i] - (1.0 - b[n - 1 - i])) < 1e-11);
  }
}

TEST_CASE("sandwiching") {
  const BoundaryParams p1{0.9, -0.2, 1.2, -0.2, 0.3}, p2{1.1, -0.2, 1.0, -0.2, 0.3};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> f(5);
  for (auto& v : f) v = u(rng);
  auto res = sandwich_check(p1, p2, f);
  CHECK(res.ordered);
  CHECK(res.first >= res.second);
  res = sandwich_check(p1, p1, f);
  CHECK(res.first == res.second);
  res = sandwich_check(p1, p2, std::vector<double>(5, 1.0));
  CHECK(res.first == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(res.second == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(sandwich_check(p2, p1, f), PreconditionViolation);
}

TEST_CASE("csv dump") {
  const auto s = stationary_to_csv(stationary(RateParams{1.0, 1.0, 0.0, 0.0, 0.0}, 2));
  CHECK(s.find("10,4.00000000000000") != std::string::npos);
}
