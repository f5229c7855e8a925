#include "shocklab/params.hpp"

#include <cmath>

#include "shocklab/errors.hpp"

namespace shocklab {

double kappa(double x, double y, double q, KappaSign sign) {
  if (!(x > 0.0) || !(y >= 0.0) || !(q >= 0.0 && q < 1.0))
    throw DomainError("kappa: need x>0, y>=0, 0<=q<1");
  // Roots of x z^2 - b z - y = 0. The root that would suffer cancellation is
  // taken from the product of roots -y/x instead.
  const double b = 1.0 - q - x + y;
  const double r = std::sqrt(b * b + 4.0 * x * y);
  double plus, minus;
  if (b >= 0.0) {
    plus = (b + r) / (2.0 * x);
    minus = (b + r) > 0.0 ? -2.0 * y / (b + r) : 0.0;
  } else {
    minus = (b - r) / (2.0 * x);
    plus = 2.0 * y / (r - b);
  }
  return sign == KappaSign::Plus ? plus : minus;
}

void validate(const RateParams& r) {
  if (!(r.alpha > 0.0) || !(r.beta > 0.0) || !(r.gamma >= 0.0) || !(r.delta >= 0.0) ||
      !(r.q >= 0.0 && r.q < 1.0))
    throw DomainError("rates need alpha>0, beta>0, gamma>=0, delta>=0, 0<=q<1");
}

void validate(const BoundaryParams& b) {
  if (!(b.A >= 0.0) || !(b.C >= 0.0) || !(b.B > -1.0 && b.B <= 0.0) ||
      !(b.D > -1.0 && b.D <= 0.0) || !(b.q >= 0.0 && b.q < 1.0))
    throw DomainError("boundary parameters need A,C>=0, B,D in (-1,0], 0<=q<1");
}

BoundaryParams rates_to_boundary(const RateParams& r) {
  validate(r);
  BoundaryParams b;
  b.A = kappa(r.beta, r.delta, r.q, KappaSign::Plus);
  b.B = kappa(r.beta, r.delta, r.q, KappaSign::Minus);
  b.C = kappa(r.alpha, r.gamma, r.q, KappaSign::Plus);
  b.D = kappa(r.alpha, r.gamma, r.q, KappaSign::Minus);
  b.q = r.q;
  return b;
}

RateParams boundary_to_rates(const BoundaryParams& b) {
  validate(b);
  const double one_q = 1.0 - b.q;
  const double left = (1.0 + b.C) * (1.0 + b.D);
  const double right = (1.0 + b.A) * (1.0 + b.B);
  RateParams r;
  r.alpha = one_q / left;
  r.beta = one_q / right;
  r.gamma = -one_q * b.C * b.D / left;
  r.delta = -one_q * b.A * b.B / right;
  r.q = b.q;
  // -0.0 from a zero product is reported as plain zero
  r.gamma += 0.0;
  r.delta += 0.0;
  return r;
}

PhaseLabel classify(const BoundaryParams& b, double tol) {
  PhaseLabel label{};
  const double A = b.A, C = b.C;
  if (std::abs(A - C) <= tol && A > 1.0 + tol)
    label.phase = Phase::CoexistenceLine;
  else if (A > 1.0 && A > C)
    label.phase = Phase::HighDensity;
  else if (C > 1.0 && C > A)
    label.phase = Phase::LowDensity;
  else
    label.phase = Phase::MaxCurrent;

  const double ac = A * C;
  if (std::abs(ac - 1.0) <= tol)
    label.region = Region::BoundaryAC1;
  else
    label.region = ac < 1.0 ? Region::Fan : Region::Shock;
  return label;
}

ScaledBoundary scaling_sequence(const ScalingLimitParams& s, long n) {
  if (n < 1) throw DomainError("scaling_sequence: n must be >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  ScaledBoundary out;
  out.params.A = std::exp(-s.a_lim / rn);
  out.params.C = std::exp(-s.c_lim / rn);
  out.params.B = s.B;
  out.params.D = s.D;
  out.params.q = s.q;
  validate(out.params);

  const double A = out.params.A, C = out.params.C;
  if (A * C > 1.0) {
    // is 1 = q^l C/A for some integer l?
    const double ratio = C / A;
    if (std::abs(ratio - 1.0) < 1e-9) {
      out.near_excluded_lattice = true;
    } else if (s.q > 0.0) {
      const double l = std::round(-std::log(ratio) / std::log(s.q));
      if (std::abs(std::pow(s.q, l) * ratio - 1.0) < 1e-9) out.near_excluded_lattice = true;
    }
  }
  return out;
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::MaxCurrent: return "MaxCurrent";
    case Phase::LowDensity: return "LowDensity";
    case Phase::HighDensity: return "HighDensity";
    case Phase::CoexistenceLine: return "CoexistenceLine";
  }
  return "?";
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Fan: return "Fan";
    case Region::Shock: return "Shock";
    case Region::BoundaryAC1: return "BoundaryAC1";
  }
  return "?";
}

}  // namespace shocklab
