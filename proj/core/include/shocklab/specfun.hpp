#pragma once

#include <complex>
#include <limits>

namespace shocklab {

using cplx = std::complex<double>;

// Marker for the infinite q-Pochhammer product.
inline constexpr long kInfinite = -1;

// (a;q)_n = prod_{j<n} (1 - a q^j). n = kInfinite gives the infinite product,
// truncated once |a| q^j < 1e-17 with a first-order correction for the tail.
double qpoch(double a, double q, long n = kInfinite);
cplx qpoch(cplx a, double q, long n = kInfinite);

// H(x) = exp(x^2) erfc(x), evaluated without overflow for large x.
double scaled_erfc_H(double x);
double erfc_internal(double x);

// Normalization of the eta process:
// (a H(a/sqrt2) - c H(c/sqrt2)) / (a - c), continuous across a = c.
double calH(double a_lim, double c_lim);

// Closed form of the double integral
// sqrt(2/pi) int_{-inf}^0 int_b^inf e^{(al+be)b - be x} (x-2b) e^{-(x-2b)^2/2} dx db.
double berar_integral(double alpha, double beta);
// The same integral by nested adaptive quadrature.
double berar_integral_quadrature(double alpha, double beta, double rel_tol = 1e-12);

}  // namespace shocklab
