#include "shocklab/specfun.hpp"

#include <cmath>
#include <numbers>

#include "shocklab/quadrature.hpp"

namespace shocklab {

namespace {

constexpr double kTailCut = 1e-17;

template <class T>
T qpoch_impl(T a, double q, long n) {
  T prod = 1.0;
  if (n == 0) return prod;
  if (n > 0) {
    double qj = 1.0;
    for (long j = 0; j < n; ++j) {
      prod *= (T(1.0) - a * qj);
      qj *= q;
    }
    return prod;
  }
  // infinite product
  double qj = 1.0;
  for (long j = 0;; ++j) {
    if (std::abs(a) * qj < kTailCut) {
      // prod_{k>=j} (1 - a q^k) = 1 - a q^j / (1 - q) + O(|a q^j|^2)
      prod *= (T(1.0) - a * (qj / (1.0 - q)));
      break;
    }
    prod *= (T(1.0) - a * qj);
    qj *= q;
    if (qj == 0.0) break;  // q = 0: only the first factor is non-trivial
    if (j > 100000) break;
  }
  return prod;
}

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

// exp(x^2) - (2x/sqrt(pi)) sum_n (2x^2)^n / (2n+1)!!, for 0 <= x < 0.75
double h_series(double x) {
  const double x2 = x * x;
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(x2) - 2.0 * x * kInvSqrtPi * sum;
}

// Even continued fraction for erfc, evaluated bottom-up:
// H(x) = (2x/sqrt(pi)) / (2x^2+1 - 1*2/(2x^2+5 - 3*4/(2x^2+9 - ...))).
double h_fraction(double x) {
  const double two_x2 = 2.0 * x * x;
  const int depth = x < 2.0 ? 160 : (x < 6.0 ? 60 : 25);
  double f = 0.0;
  for (int k = depth; k >= 1; --k)
    f = -(2.0 * k - 1.0) * (2.0 * k) / (two_x2 + 4.0 * k + 1.0 + f);
  return 2.0 * x * kInvSqrtPi / (two_x2 + 1.0 + f);
}

}  // namespace

double qpoch(double a, double q, long n) { return qpoch_impl<double>(a, q, n); }
cplx qpoch(cplx a, double q, long n) { return qpoch_impl<cplx>(a, q, n); }

double scaled_erfc_H(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 * std::exp(x * x) - scaled_erfc_H(-x);
  if (x < 0.75) return h_series(x);
  if (x > 1e8) return kInvSqrtPi / x;
  return h_fraction(x);
}

double erfc_internal(double x) {
  if (x < 0.0) return 2.0 - erfc_internal(-x);
  if (x > 27.3) return 0.0;
  return std::exp(-x * x) * scaled_erfc_H(x);
}

double calH(double a, double c) {
  const double r2 = std::numbers::sqrt2;
  const double d = a - c;
  if (std::abs(d) < 1e-6) {
    // Taylor expansion of g(x) = x H(x/sqrt2) about the midpoint:
    // (g(a) - g(c))/(a - c) = g'(m) + g'''(m) d^2 / 24 + O(d^4)
    const double m = 0.5 * (a + c);
    const double h = scaled_erfc_H(m / r2);
    const double k = std::sqrt(2.0 / std::numbers::pi);
    const double g1 = (1.0 + m * m) * h - k * m;
    const double g3 = (3.0 + 6.0 * m * m + m * m * m * m) * h - k * (5.0 * m + m * m * m);
    return g1 + g3 * d * d / 24.0;
  }
  return (a * scaled_erfc_H(a / r2) - c * scaled_erfc_H(c / r2)) / d;
}

double berar_integral(double alpha, double beta) { return calH(alpha, beta); }

double berar_integral_quadrature(double alpha, double beta, double rel_tol) {
  // With w = x - 2b = v - b, v >= 0 the exponent combines to
  // alpha b - beta v - (v - b)^2 / 2, which stays bounded in both tails.
  QuadOptions inner_opt;
  inner_opt.rel_tol = rel_tol * 1e-2;
  inner_opt.abs_tol = 0.0;
  auto inner = [&](double b) {
    auto g = [&](double v) {
      const double w = v - b;
      return w * std::exp(alpha * b - beta * v - 0.5 * w * w);
    };
    return integrate_upper_infinite(g, 0.0, inner_opt).value;
  };
  QuadOptions outer_opt;
  outer_opt.rel_tol = rel_tol;
  outer_opt.abs_tol = 0.0;
  const double v = integrate_lower_infinite(inner, 0.0, outer_opt).value;
  return std::sqrt(2.0 / std::numbers::pi) * v;
}

}  // namespace shocklab
