#pragma once

#include <functional>
#include <vector>

namespace shocklab {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_intervals = 4000;
  // Optional interior points where the integrand is kinked or peaked.
  std::vector<double> breakpoints;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  long evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod on [a, b].
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {});

// [a, inf) through x = a + scale * t / (1 - t).
QuadResult integrate_upper_infinite(const Integrand& f, double a, const QuadOptions& opt = {},
                                    double scale = 1.0);
// (-inf, b] through x = b - scale * t / (1 - t).
QuadResult integrate_lower_infinite(const Integrand& f, double b, const QuadOptions& opt = {},
                                    double scale = 1.0);

// Throws QuadratureNotConverged when the result did not meet its tolerance.
double checked(const QuadResult& r, const char* what);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

}  // namespace shocklab
