#include "shocklab/prelimit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "shocklab/errors.hpp"
#include "shocklab/kernels.hpp"

namespace shocklab {

namespace {

// ((cosh + y)/2)^m evaluated through logarithms; the base is negative only
// for atoms below -cosh, where the integer power keeps its sign.
double half_power(double base, long m) {
  if (m == 0) return 1.0;
  const double h = 0.5 * base;
  if (h == 0.0) return 0.0;
  const double v = std::exp(static_cast<double>(m) * std::log(std::abs(h)));
  return (h < 0.0 && (m % 2 == 1)) ? -v : v;
}

}  // namespace

double phi_d_n(const LaplaceRequest& req, const BoundaryParams& bp_n, long n,
               const QuadOptions& opt) {
  req.validate();
  if (n < 1) throw DomainError("phi_d_n: n must be >= 1");
  const int d = req.d();
  for (int k = 0; k + 1 < d; ++k)
    if (!(req.c[k] > 0.0)) throw DomainError("phi_d_n: need c_1..c_{d-1} > 0");
  const double rn = std::sqrt(static_cast<double>(n));
  const auto s = req.partial_sums();
  const auto ends = req.block_ends(n);
  const TimeDomain dom = admissible_times(bp_n);

  std::vector<double> times(d);
  std::vector<std::function<double(double)>> factors(d);
  JointOptions jo;
  jo.quad = opt;
  for (int k = 0; k < d; ++k) {
    times[k] = std::exp(-2.0 * s[k] / rn);
    if (!dom.contains(times[k])) {
      std::ostringstream msg;
      msg << "phi_d_n: s_" << (k + 1) << " = " << s[k] << " gives time exp(-2 s/sqrt n)";
      require_admissible(dom, times[k], msg.str());
    }
    const double ch = std::cosh(s[k] / rn);
    const long m = ends[k + 1] - ends[k];
    factors[k] = [ch, m](double y) { return half_power(ch + y, m); };
    jo.peak.push_back(static_cast<double>(m));
  }
  return integrate_joint(bp_n, times, factors, jo);
}

ZnParts z_n_parts(const BoundaryParams& bp_n, long n, const QuadOptions& opt) {
  if (n < 1) throw DomainError("z_n: n must be >= 1");
  const TimeDomain dom = admissible_times(bp_n);
  require_admissible(dom, 1.0, "z_n");
  const SignedMeasure pi1(AwParams{bp_n.A, bp_n.B, bp_n.C, bp_n.D, bp_n.q});
  ZnParts parts;
  // continuous part: ((1+cos th)/2)^n = cos(th/2)^{2n}, concentrated on th ~ n^{-1/2}
  QuadOptions o = opt;
  const double rn = std::sqrt(static_cast<double>(n));
  for (double k : {2.0, 6.0, 12.0, 40.0})
    if (k / rn < std::numbers::pi) o.breakpoints.push_back(k / rn);
  auto f = [&](double th) {
    const double c = std::cos(0.5 * th);
    if (c <= 0.0) return 0.0;
    const double w = std::exp(2.0 * static_cast<double>(n) * std::log(c));
    return w == 0.0 ? 0.0 : w * pi1.theta_density(th);
  };
  parts.continuous = checked(integrate(f, 0.0, std::numbers::pi, o), "z_n continuous part");
  for (const Atom& at : pi1.atom_list()) parts.atoms += at.mass * half_power(1.0 + at.location, n);
  return parts;
}

double z_n(const BoundaryParams& bp_n, long n, const QuadOptions& opt) {
  return z_n_parts(bp_n, n, opt).total();
}

double prelimit_height_laplace(const LaplaceRequest& req, const BoundaryParams& bp_n, long n,
                               const QuadOptions& opt) {
  return phi_d_n(req, bp_n, n, opt) / z_n(bp_n, n, opt);
}

TangentMeasureView::TangentMeasureView(const BoundaryParams& bp_n, long n, double t)
    : bp_(bp_n), n_(n), t_(t), marginal_(marginal_pi(bp_n, time_of(t))) {}

double TangentMeasureView::time_of(double t) const {
  return std::exp(2.0 * t / std::sqrt(static_cast<double>(n_)));
}

double TangentMeasureView::density(double u) const {
  const double two_n = 2.0 * static_cast<double>(n_);
  if (!(u > 0.0 && u < 2.0 * two_n)) return 0.0;
  return marginal_.density(1.0 - u / two_n) / two_n;
}

std::vector<Atom> TangentMeasureView::atoms() const {
  std::vector<Atom> out;
  for (const Atom& a : marginal_.atom_list())
    out.push_back({2.0 * static_cast<double>(n_) * (1.0 - a.location), a.mass});
  return out;
}

double TangentMeasureView::transition_density(double s, double u, double v) const {
  const double two_n = 2.0 * static_cast<double>(n_);
  const SignedMeasure m = transition_P(bp_, time_of(s), time_of(t_), 1.0 - u / two_n);
  if (!(v > 0.0 && v < 2.0 * two_n)) return 0.0;
  return m.density(1.0 - v / two_n) / two_n;
}

namespace {

// Atom of the time-s marginal generated by C / sqrt(s).
double c_atom(const BoundaryParams& bp, double s_time) {
  const double e = bp.C / std::sqrt(s_time);
  if (!(e > 1.0)) throw DomainError("tangent view: no atom generated by C at this time");
  return 0.5 * (e + 1.0 / e);
}

}  // namespace

double TangentMeasureView::atom_transition_mass(double s) const {
  const double sn = time_of(s), tn = time_of(t_);
  const SignedMeasure m = transition_P(bp_, sn, tn, c_atom(bp_, sn));
  const double target = c_atom(bp_, tn);
  for (const Atom& a : m.atom_list())
    if (std::abs(a.location - target) <= 1e-12 * target) return a.mass;
  throw DomainError("tangent view: transition has no atom at the time-t location");
}

double TangentMeasureView::atom_transition_density(double s, double v) const {
  const double two_n = 2.0 * static_cast<double>(n_);
  const double sn = time_of(s), tn = time_of(t_);
  const SignedMeasure m = transition_P(bp_, sn, tn, c_atom(bp_, sn));
  if (!(v > 0.0 && v < 2.0 * two_n)) return 0.0;
  return m.density(1.0 - v / two_n) / two_n;
}

namespace tangent_limit {

double atom_location(double, double c, double t) { return -(t + c) * (t + c); }

double atom_mass(double a, double c, double t) { return 2.0 * (c + t) / (2.0 * t + c - a); }

double density(double a, double c, double t, double u) {
  return (a + c) / std::numbers::pi * std::sqrt(u) /
         (((a - t) * (a - t) + u) * ((c + t) * (c + t) + u));
}

double transition_density(double a, double s, double t, double u, double v) {
  return kernel_p(t - s, u, v) * ((a - s) * (a - s) + u) / ((a - t) * (a - t) + v);
}

double atom_transition_mass(double a, double c, double s, double t) {
  return (c + t) * (2.0 * s + c - a) / ((c + s) * (2.0 * t + c - a));
}

double atom_transition_density(double a, double c, double s, double t, double v) {
  const double w = 2.0 * s - t + c;
  return density(a, c, t, v) * (a - c - 2.0 * s) * (2.0 * t - 2.0 * s) / (w * w + v);
}

}  // namespace tangent_limit

}  // namespace shocklab
