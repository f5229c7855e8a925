#include "shocklab/aw_measure.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCut = 1e-17;

// Distance from z to the nearest point of {q^l : l in Z} (l >= lmin).
double lattice_gap(cplx z, double q, long lmin, long* hit) {
  if (q == 0.0) {
    // only q^0 = 1 (and 0 for l > 0) remain
    const double d1 = std::abs(z - 1.0);
    const double d0 = lmin <= 0 ? d1 : kInf;
    if (hit) *hit = 0;
    return std::min(d0, std::abs(z));
  }
  const double r = std::abs(z);
  if (r == 0.0) return kInf;
  long l = std::lround(std::log(r) / std::log(q));
  if (l < lmin) l = lmin;
  double best = kInf;
  for (long k = l - 1; k <= l + 1; ++k) {
    if (k < lmin) continue;
    const double gap = std::abs(z - std::pow(q, static_cast<double>(k)));
    if (gap < best) {
      best = gap;
      if (hit) *hit = k;
    }
  }
  return best;
}

bool is_real(cplx z) { return z.imag() == 0.0; }

struct Polar {
  double rho;
  double phi;
};

Polar polar_of(cplx z) { return {std::abs(z), std::arg(z)}; }

}  // namespace

OmegaReport validate_omega_q(const AwParams& p, double tol) {
  OmegaReport rep;
  std::ostringstream msg;
  const cplx abcd = p.a * p.b * p.c * p.d;
  // (i) abcd not in {q^-l : l >= 0}: equivalently 1/abcd not in {q^l : l >= 0}
  if (std::abs(abcd) >= 1.0 - tol) {
    long l = 0;
    double gap;
    if (p.q == 0.0) {
      gap = std::abs(abcd - 1.0);
    } else {
      const double r = std::abs(abcd);
      l = std::max(0L, std::lround(-std::log(r) / std::log(p.q)));
      gap = kInf;
      for (long k = std::max(0L, l - 1); k <= l + 1; ++k) {
        const double g = std::abs(abcd - std::pow(p.q, -static_cast<double>(k)));
        if (g < gap) gap = g, l = k;
      }
    }
    if (gap < tol) {
      rep.cond_i = false;
      rep.distance = gap;
      msg << "abcd is q^-" << l << " (gap " << gap << "); ";
    }
  }
  // (ii) ratios of distinct parameters with modulus >= 1
  const cplx ps[4] = {p.a, p.b, p.c, p.d};
  const char* names = "abcd";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j || std::abs(ps[i]) < 1.0 || std::abs(ps[j]) < 1.0) continue;
      long hit = 0;
      const double gap = lattice_gap(ps[i] / ps[j], p.q, std::numeric_limits<long>::min() / 2, &hit);
      if (gap < tol) {
        rep.cond_ii = false;
        rep.distance = gap;
        msg << names[i] << "/" << names[j] << " is q^" << hit << " (gap " << gap << "); ";
      }
    }
  }
  // (iii) reality conditions and ab < 1, cd < 1
  const bool conj_pair = std::abs(p.c - std::conj(p.d)) <= 1e-14 * (1.0 + std::abs(p.c));
  if (!(is_real(p.c) && is_real(p.d)) && !conj_pair) {
    rep.cond_iii = false;
    msg << "c, d neither real nor conjugate; ";
  }
  if (!(p.a * p.b < 1.0)) {
    rep.cond_iii = false;
    msg << "ab >= 1; ";
  }
  if (!((p.c * p.d).real() < 1.0)) {
    rep.cond_iii = false;
    msg << "cd >= 1; ";
  }
  rep.detail = msg.str();
  return rep;
}

bool TimeDomain::contains(double t, double tol) const {
  if (!(t > lo && t < hi)) return false;
  return lattice_distance(t) >= tol;
}

double TimeDomain::lattice_distance(double t) const {
  if (!has_lattice) return kInf;
  // t = q^l base  <=>  t / base = q^l
  return lattice_gap(cplx(t / lattice_base), q, std::numeric_limits<long>::min() / 2, nullptr) *
         lattice_base;
}

double TimeDomain::nearest_admissible(double t) const {
  double u = t;
  if (!(u > lo)) u = lo + 1e-6 * std::max(1.0, std::abs(lo));
  if (!(u < hi)) u = hi - 1e-6 * std::max(1.0, std::abs(hi));
  for (int k = 0; k < 60 && !contains(u); ++k) u *= 1.0 + 1e-6 * (k + 1);
  return contains(u) ? u : std::numeric_limits<double>::quiet_NaN();
}

TimeDomain admissible_times(const BoundaryParams& bp) {
  validate(bp);
  TimeDomain dom;
  dom.q = bp.q;
  if (bp.A * bp.C <= 1.0) {
    dom.lo = 0.0;
    dom.hi = kInf;
    return dom;
  }
  const double abcd = bp.A * bp.B * bp.C * bp.D;
  if (abcd >= 1.0 - kLatticeTol) {
    AwParams probe{bp.A, bp.B, bp.C, bp.D, bp.q};
    if (!validate_omega_q(probe).cond_i) throw AcOnLattice("ABCD lies on {q^-l}; no admissible times");
  }
  dom.lo = std::max(std::sqrt(bp.q), bp.D * bp.D);
  dom.hi = std::min(bp.q > 0.0 ? 1.0 / std::sqrt(bp.q) : kInf, bp.B != 0.0 ? 1.0 / (bp.B * bp.B) : kInf);
  dom.has_lattice = true;
  dom.lattice_base = bp.C / bp.A;
  return dom;
}

void require_admissible(const TimeDomain& dom, double t, const std::string& context) {
  if (dom.contains(t)) return;
  std::ostringstream msg;
  msg.precision(17);
  msg << context << ": time " << t << " is not admissible (interval (" << dom.lo << ", " << dom.hi
      << ")";
  if (dom.has_lattice) msg << " minus q^l*" << dom.lattice_base;
  msg << ")";
  if (dom.has_lattice && dom.lattice_distance(t) < kLatticeTol && std::abs(t - 1.0) < kLatticeTol &&
      std::abs(dom.lattice_base - 1.0) < kLatticeTol)
    msg << "; t=1 is excluded on the coexistence line A=C>1";
  throw TimeNotAdmissible(msg.str(), t, dom.nearest_admissible(t));
}

double aw_density(double y, const AwParams& p) {
  if (!(y > -1.0 && y < 1.0)) throw DomainError("aw_density: need |y| < 1");
  SignedMeasure m(p);
  return m.density(y);
}

std::vector<Atom> atoms(const AwParams& p) {
  std::vector<Atom> out;
  const cplx ps[4] = {p.a, p.b, p.c, p.d};
  const double q = p.q;
  for (int g = 0; g < 4; ++g) {
    if (!is_real(ps[g]) || std::abs(ps[g]) < 1.0) continue;
    const double e = ps[g].real();
    cplx others[3];
    for (int k = 0, m = 0; k < 4; ++k)
      if (k != g) others[m++] = ps[k];
    const cplx &x1 = others[0], &x2 = others[1], &x3 = others[2];

    const cplx num = qpoch(cplx(1.0 / (e * e)), q) * qpoch(x1 * x2, q) * qpoch(x1 * x3, q) *
                     qpoch(x2 * x3, q);
    const cplx den = qpoch(x1 / e, q) * qpoch(x2 / e, q) * qpoch(x3 / e, q) *
                     qpoch(e * x1 * x2 * x3, q);
    const double p0 = (num / den).real();

    double eqj = e;
    double mass = p0;
    double e2_j = 1.0;   // (e^2;q)_j
    double q_j = 1.0;    // (q;q)_j
    cplx ex_j = 1.0;     // prod over others of (e x;q)_j
    cplx shift_j = 1.0;  // prod over others of prod_{i<j} (x - e q^{i+1})
    double qpow = 1.0;   // q^j
    for (long j = 0; std::abs(eqj) >= 1.0; ++j) {
      if (j > 0) {
        const double qprev = qpow / q;  // q^{j-1}
        e2_j *= 1.0 - e * e * qprev;
        q_j *= 1.0 - q * qprev;
        for (const cplx& x : others) {
          ex_j *= 1.0 - e * x * qprev;
          shift_j *= x - e * qpow;
        }
        const double ratio = e2_j * (1.0 - e * e * qpow * qpow) / (q_j * (1.0 - e * e));
        const double qe = std::pow(q / e, static_cast<double>(j));
        mass = p0 * ratio * qe * (ex_j / shift_j).real();
      }
      out.push_back({0.5 * (eqj + 1.0 / eqj), mass});
      if (q == 0.0) break;
      qpow *= q;
      eqj = e * qpow;
    }
  }
  return out;
}

SignedMeasure::SignedMeasure(const AwParams& p) : params_(p), continuous_(true) {
  const double q = p.q;
  const cplx a = p.a, b = p.b, c = p.c, d = p.d;
  const cplx num = qpoch(cplx(q), q) * qpoch(a * b, q) * qpoch(a * c, q) * qpoch(a * d, q) *
                   qpoch(b * c, q) * qpoch(b * d, q) * qpoch(c * d, q);
  const cplx den = qpoch(a * b * c * d, q);
  prefactor_ = (num / den).real() / (2.0 * std::numbers::pi);
  const cplx all[4] = {a, b, c, d};
  for (int k = 0; k < 4; ++k) {
    const Polar pk = polar_of(all[k]);
    rho_[k] = pk.rho;
    phi_[k] = pk.phi;
  }
  atoms_ = atoms(p);
}

SignedMeasure SignedMeasure::point_mass(double x) {
  SignedMeasure m;
  m.atoms_.push_back({x, 1.0});
  return m;
}

SignedMeasure SignedMeasure::zero() {
  SignedMeasure m;
  m.outside_support = true;
  return m;
}

double SignedMeasure::theta_density(double theta) const {
  if (!continuous_) return 0.0;
  const double q = params_.q;
  double s2[4];
  double rmax = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double s = std::sin(0.5 * (theta + phi_[k]));
    s2[k] = s * s;
    rmax = std::max(rmax, rho_[k]);
  }
  const double st = std::sin(theta);
  const double sin2 = st * st;
  // |1 - r e^{i psi}|^2 = (1 - r)^2 + 4 r sin^2(psi / 2), stable near psi = 0
  double num = 4.0 * sin2;
  double den = 1.0;
  double qj = 1.0;
  for (long j = 0;; ++j) {
    if (j > 0) {
      num *= (1.0 - qj) * (1.0 - qj) + 4.0 * qj * sin2;
    }
    for (int k = 0; k < 4; ++k) {
      const double r = rho_[k] * qj;
      if (r == 0.0) continue;
      den *= (1.0 - r) * (1.0 - r) + 4.0 * r * s2[k];
    }
    qj *= q;
    if (qj == 0.0 || std::max(rmax, 1.0) * qj < kCut) break;
  }
  return prefactor_ * num / den;
}

double SignedMeasure::density(double y) const {
  if (!continuous_ || !(y > -1.0 && y < 1.0)) return 0.0;
  const double theta = std::acos(y);
  return theta_density(theta) / std::sin(theta);
}

double SignedMeasure::integrate(const std::function<double(double)>& g, const QuadOptions& opt,
                                double peak) const {
  double total = 0.0;
  if (continuous_) {
    QuadOptions o = opt;
    if (peak > 0.0) {
      // integrands like ((1+y)/2)^m decay as exp(-m theta^2 / 4)
      for (double k : {2.0, 6.0, 12.0}) {
        const double th = k / std::sqrt(peak);
        if (th < std::numbers::pi) o.breakpoints.push_back(th);
      }
    }
    auto f = [&](double th) {
      const double gy = g(std::cos(th));
      return gy == 0.0 ? 0.0 : gy * theta_density(th);
    };
    total += checked(shocklab::integrate(f, 0.0, std::numbers::pi, o), "signed measure integral");
  }
  for (const Atom& at : atoms_) total += at.mass * g(at.location);
  return total;
}

double SignedMeasure::total_mass(const QuadOptions& opt) const {
  return integrate([](double) { return 1.0; }, opt);
}

SignedMeasure marginal_pi(const BoundaryParams& bp, double t) {
  require_admissible(admissible_times(bp), t, "marginal_pi");
  const double rt = std::sqrt(t);
  return SignedMeasure(AwParams{bp.A * rt, bp.B * rt, bp.C / rt, bp.D / rt, bp.q});
}

SignedMeasure transition_P_unchecked(const BoundaryParams& bp, double s, double t, double x) {
  if (s == t) return SignedMeasure::point_mass(x);
  const double rt = std::sqrt(t);
  const double scale = std::sqrt(s / t);
  AwParams p{bp.A * rt, bp.B * rt, 0.0, 0.0, bp.q};
  if (std::abs(x) < 1.0) {
    const double th = std::acos(x);
    p.c = std::polar(scale, th);
    p.d = std::polar(scale, -th);
  } else {
    const double r = std::sqrt(x * x - 1.0);
    const double big = x > 0.0 ? x + r : x - r;
    p.c = scale * big;
    p.d = scale / big;
  }
  return SignedMeasure(p);
}

SignedMeasure transition_P(const BoundaryParams& bp, double s, double t, double x) {
  const TimeDomain dom = admissible_times(bp);
  require_admissible(dom, s, "transition_P (s)");
  require_admissible(dom, t, "transition_P (t)");
  if (s > t) throw DomainError("transition_P: need s <= t");
  if (std::abs(x) > 1.0) {
    const SignedMeasure ps = marginal_pi(bp, s);
    bool found = false;
    for (const Atom& at : ps.atom_list())
      if (std::abs(at.location - x) <= 1e-9 * std::max(1.0, std::abs(x))) found = true;
    if (!found) return SignedMeasure::zero();
  }
  return transition_P_unchecked(bp, s, t, x);
}

namespace {

// Conditional expectations F_k(x) = int g_k(y) F_{k+1}(y) P_{t_{k-1},t_k}(x, dy),
// with F_k on [-1, 1] optionally replaced by a Chebyshev interpolant.
class JointEvaluator {
 public:
  JointEvaluator(const BoundaryParams& bp, const std::vector<double>& times,
                 const std::vector<std::function<double(double)>>& factors, const JointOptions& opt)
      : bp_(bp), times_(times), factors_(factors), opt_(opt), cheb_(times.size()) {
    if (opt_.interpolate)
      for (size_t k = times_.size() - 1; k >= 1; --k) cheb_[k] = fit(k);
  }

  double top() const {
    const double rt = std::sqrt(times_[0]);
    const SignedMeasure m(AwParams{bp_.A * rt, bp_.B * rt, bp_.C / rt, bp_.D / rt, bp_.q});
    return integrate_level(m, 0);
  }

 private:
  double integrate_level(const SignedMeasure& m, size_t k) const {
    const bool last = k + 1 == times_.size();
    auto g = [&](double y) {
      const double gy = factors_[k](y);
      if (gy == 0.0 || last) return gy;
      return gy * value(k + 1, y);
    };
    const double peak = k < opt_.peak.size() ? opt_.peak[k] : 0.0;
    return m.integrate(g, opt_.quad, peak);
  }

  double direct(size_t k, double x) const {
    return integrate_level(transition_P_unchecked(bp_, times_[k - 1], times_[k], x), k);
  }

  double value(size_t k, double x) const {
    const std::vector<double>& a = cheb_[k];
    if (a.empty() || std::abs(x) > 1.0) return direct(k, x);
    double b1 = 0.0, b2 = 0.0;
    for (size_t j = a.size() - 1; j >= 1; --j) {
      const double b0 = 2.0 * x * b1 - b2 + a[j];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + a[0];
  }

  // Samples at x_j = cos(pi j / N) for N = 16, 32, ...; the nested grids
  // reuse earlier values. Returns an empty vector if the coefficients never
  // settle below the tolerance.
  std::vector<double> fit(size_t k) const {
    std::vector<double> vals;
    for (int n = 16; n <= opt_.max_degree; n *= 2) {
      std::vector<double> f(n + 1);
      for (int j = 0; j <= n; ++j) {
        if (j % 2 == 0 && !vals.empty()) {
          f[j] = vals[j / 2];
        } else {
          f[j] = direct(k, std::cos(std::numbers::pi * j / n));
        }
      }
      vals = f;
      std::vector<double> a(n + 1);
      double scale = 0.0;
      for (int m = 0; m <= n; ++m) {
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
          const double w = (j == 0 || j == n) ? 0.5 : 1.0;
          acc += w * f[j] * std::cos(std::numbers::pi * ((long(j) * m) % (2 * n)) / n);
        }
        a[m] = acc * 2.0 / n;
      }
      a[0] *= 0.5;
      a[n] *= 0.5;
      for (int m = 0; m <= n; ++m) scale = std::max(scale, std::abs(a[m]));
      double tail = 0.0;
      for (int m = n - n / 8; m <= n; ++m) tail = std::max(tail, std::abs(a[m]));
      if (tail <= opt_.interp_tol * scale) {
        int deg = n;
        while (deg > 0 && std::abs(a[deg]) <= opt_.interp_tol * scale * 1e-3) --deg;
        a.resize(deg + 1);
        return a;
      }
    }
    return {};
  }

  const BoundaryParams& bp_;
  const std::vector<double>& times_;
  const std::vector<std::function<double(double)>>& factors_;
  const JointOptions& opt_;
  std::vector<std::vector<double>> cheb_;
};

}  // namespace

double integrate_joint(const BoundaryParams& bp, const std::vector<double>& times,
                       const std::vector<std::function<double(double)>>& factors,
                       const JointOptions& opt) {
  if (times.empty() || times.size() != factors.size())
    throw DomainError("integrate_joint: need one factor per time");
  const TimeDomain dom = admissible_times(bp);
  for (size_t k = 0; k < times.size(); ++k) {
    require_admissible(dom, times[k], "integrate_joint");
    if (k > 0 && times[k] < times[k - 1]) throw DomainError("integrate_joint: times must ascend");
  }
  return JointEvaluator(bp, times, factors, opt).top();
}

std::string measure_to_csv(const SignedMeasure& m, int grid) {
  std::ostringstream out;
  out << "kind,location,value\n";
  char buf[128];
  if (m.has_continuous()) {
    for (int i = 1; i < grid; ++i) {
      const double y = -1.0 + 2.0 * i / grid;
      std::snprintf(buf, sizeof buf, "cont,%.17e,%.17e\n", y, m.density(y));
      out << buf;
    }
  }
  for (const Atom& a : m.atom_list()) {
    std::snprintf(buf, sizeof buf, "atom,%.17e,%.17e\n", a.location, a.mass);
    out << buf;
  }
  return out.str();
}

}  // namespace shocklab
