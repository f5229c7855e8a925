#include "shocklab/kernels.hpp"

#include <cmath>
#include <numbers>

#include "shocklab/specfun.hpp"

namespace shocklab {

double kernel_q(double t, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) return 0.0;
  // e^{-(x-y)^2/2t} (1 - e^{-2xy/t})
  const double g = std::exp(-(x - y) * (x - y) / (2.0 * t));
  return g * -std::expm1(-2.0 * x * y / t) / std::sqrt(2.0 * std::numbers::pi * t);
}

double kernel_qb(double t, double b, double x, double y) { return kernel_q(t, x - b, y - b); }

double kernel_qbstar(double t, double b, double x, double y) {
  // closed at the killing level so that q*(b, y) is the minimum-endpoint density
  if (!(x >= b) || !(y >= b)) return 0.0;
  const double w = x + y - 2.0 * b;
  return std::sqrt(2.0 / (std::numbers::pi * t * t * t)) * w * std::exp(-w * w / (2.0 * t));
}

double kernel_p(double t, double u, double v) {
  const double t2 = t * t;
  const double d = u - v;
  return 2.0 * t * std::sqrt(v) / (std::numbers::pi * (t2 * t2 + 2.0 * (u + v) * t2 + d * d));
}

double laplace_q(double t, double x, double lambda) {
  if (!(x > 0.0)) return 0.0;
  // (1/2) e^{-x^2/2t} (H(w1) - H(w2)), w1,2 = (lambda t -+ x)/sqrt(2t)
  const double r = std::sqrt(2.0 * t);
  const double w1 = (lambda * t - x) / r, w2 = (lambda * t + x) / r;
  const double g = std::exp(-x * x / (2.0 * t));
  if (w1 < 0.0) {
    // H(w1) = 2 e^{w1^2} - H(-w1); fold e^{w1^2} into the Gaussian to avoid overflow
    const double e = std::exp(w1 * w1 - x * x / (2.0 * t));
    return 0.5 * (2.0 * e - g * (scaled_erfc_H(-w1) + scaled_erfc_H(w2)));
  }
  return 0.5 * g * (scaled_erfc_H(w1) - scaled_erfc_H(w2));
}

double laplace_qstar(double t, double x, double lambda) {
  if (x < 0.0) return 0.0;
  // sqrt(2/(pi t)) e^{-x^2/2t} [1 - lambda sqrt(pi t / 2) H((x + lambda t)/sqrt(2t))]
  const double r = std::sqrt(2.0 * t);
  const double v = (x + lambda * t) / r;
  const double k = lambda * std::sqrt(std::numbers::pi * t / 2.0);
  const double g = std::exp(-x * x / (2.0 * t));
  if (v < 0.0) {
    const double e = std::exp(v * v - x * x / (2.0 * t));
    return std::sqrt(2.0 / (std::numbers::pi * t)) *
           (g - k * (2.0 * e - g * scaled_erfc_H(-v)));
  }
  return std::sqrt(2.0 / (std::numbers::pi * t)) * g * (1.0 - k * scaled_erfc_H(v));
}

}  // namespace shocklab
