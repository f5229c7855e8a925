#pragma once

namespace shocklab {

// Transition density of Brownian motion killed at 0.
double kernel_q(double t, double x, double y);
// Killed at level b: q_t(x - b, y - b).
double kernel_qb(double t, double b, double x, double y);
// -d/db of kernel_qb.
double kernel_qbstar(double t, double b, double x, double y);
// Squared radial part of the 3-dimensional Cauchy process.
double kernel_p(double t, double u, double v);

// int_0^inf q_t(x, y) e^{-lambda y} dy for x >= 0, any real lambda.
double laplace_q(double t, double x, double lambda);
// int_0^inf q*_t(x, y) e^{-lambda y} dy, q*_t = kernel_qbstar(t, 0, ., .).
double laplace_qstar(double t, double x, double lambda);

}  // namespace shocklab
