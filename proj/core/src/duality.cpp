#include "shocklab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "shocklab/errors.hpp"
#include "shocklab/kernels.hpp"
#include "shocklab/limit_process.hpp"
#include "shocklab/specfun.hpp"

namespace shocklab {

std::vector<double> DualityInstance::s() const {
  std::vector<double> out(c.size());
  double acc = 0.0;
  for (size_t k = c.size(); k-- > 0;) out[k] = (acc += c[k]);
  return out;
}

std::vector<double> DualityInstance::dx() const {
  std::vector<double> out(x.size());
  for (size_t k = 0; k < x.size(); ++k) out[k] = x[k] - (k ? x[k - 1] : 0.0);
  return out;
}

void DualityInstance::validate() const {
  if (c.empty() || x.size() != c.size())
    throw ConstraintViolation("duality instance: need one point per coefficient");
  double prev = 0.0;
  for (double v : x) {
    if (!(v > prev)) throw ConstraintViolation("duality instance: points must increase from 0");
    prev = v;
  }
  if (std::abs(x.back() - 1.0) > 1e-14) throw ConstraintViolation("duality instance: x_d must be 1");
  for (size_t k = 0; k < c.size(); ++k)
    if (!(c[k] > 0.0)) throw ConstraintViolation("duality instance: c_" + std::to_string(k + 1) + " must be > 0");
  if (!(a_lim + c_lim < 0.0)) throw ConstraintViolation("duality instance: need a + c < 0");
  if (!(-c.back() < a_lim)) throw ConstraintViolation("duality instance: need -c_d < a");
  if (!(a_lim < -c_lim)) throw ConstraintViolation("duality instance: need a < -c");
}

double brownian_factor(const std::vector<double>& x, const std::vector<double>& c) {
  double s = 0.0, acc = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    s += c[k];
    acc += 0.25 * s * s * (x[k] - (k ? x[k - 1] : 0.0));
  }
  return std::exp(acc);
}

namespace {

double atom_factor(const DualityInstance& inst, int upto) {
  const auto s = inst.s();
  const auto dx = inst.dx();
  double acc = 0.0;
  for (int k = 0; k < upto; ++k) acc += 0.25 * dx[k] * (s[k] - inst.c_lim) * (s[k] - inst.c_lim);
  return std::exp(acc);
}

// int over u_{first..d} >= 0 of exp(-sum dx_k u_k / 4) sqrt(u_first) g(u_first)
// prod p_{c_{k-1}}(u_{k-1}, u_k) / ((a + s_d)^2 + u_d), in variables u = w^2.
double cauchy_chain(const DualityInstance& inst, int first, const std::function<double(double)>& g,
                    const QuadOptions& opt) {
  const int d = inst.d();
  const auto s = inst.s();
  const auto dx = inst.dx();
  const double end2 = (inst.a_lim + s[d - 1]) * (inst.a_lim + s[d - 1]);
  auto wmax = [&](int k) { return std::sqrt(4.0 * 40.0 / dx[k]); };

  // R(k, w): integral over u_{k+1..d} given u_k = w^2 (0-based k)
  std::function<double(int, double)> R = [&](int k, double w) -> double {
    if (k == d - 1) return 1.0 / (end2 + w * w);
    const double t = inst.c[k];
    const double hi = wmax(k + 1);
    auto f = [&, k, w, t](double wp) {
      const double u = wp * wp;
      return 2.0 * wp * kernel_p(t, w * w, u) * std::exp(-0.25 * dx[k + 1] * u) * R(k + 1, wp);
    };
    QuadOptions o = opt;
    for (double m : {-8.0, -3.0, 0.0, 3.0, 8.0}) {
      const double b = w + m * t;
      if (b > 0.0 && b < hi) o.breakpoints.push_back(b);
    }
    return checked(integrate(f, 0.0, hi, o), "Cauchy-kernel chain (inner)");
  };
  auto outer = [&](double w) {
    const double u = w * w;
    return 2.0 * w * std::exp(-0.25 * dx[first] * u) * w * g(u) * R(first, w);
  };
  return checked(integrate(outer, 0.0, wmax(first), opt), "Cauchy-kernel chain");
}

}  // namespace

double phi_dl(const DualityInstance& inst, int ell, const QuadOptions& opt) {
  inst.validate();
  const int d = inst.d();
  if (ell < 0 || ell > d) throw DomainError("phi_dl: ell must be in 0..d");
  const auto s = inst.s();
  const double a = inst.a_lim, c = inst.c_lim;
  if (ell == d) return atom_factor(inst, d) * (2.0 * c - 2.0 * s[d - 1]) / (c - 2.0 * s[d - 1] - a);
  const double pref = (a + c) / std::numbers::pi;
  if (ell == 0) {
    const double A2 = (c - s[0]) * (c - s[0]);
    return pref * cauchy_chain(inst, 0, [A2](double u) { return 1.0 / (A2 + u); }, opt);
  }
  // slots are 1-based in ell; s_ell is s[ell - 1], s_{ell+1} is s[ell]
  const double sl = s[ell - 1], sn = s[ell];
  const double A2 = (c - sn) * (c - sn);
  const double B2 = (c - 2.0 * sl + sn) * (c - 2.0 * sl + sn);
  const double num = 4.0 * (c - sl) * (sn - sl);
  auto g = [=](double u) { return num / ((A2 + u) * (B2 + u)); };
  return pref * atom_factor(inst, ell) * cauchy_chain(inst, ell, g, opt);
}

std::pair<double, double> phi_dl_qform_parts(const DualityInstance& inst, int ell,
                                             const QuadOptions& opt) {
  inst.validate();
  const int d = inst.d();
  if (ell < 0 || ell >= d) throw DomainError("phi_dl_qform: ell must be in 0..d-1");
  const auto s = inst.s();
  const auto dx = inst.dx();
  const double a = inst.a_lim, c = inst.c_lim, r2 = std::sqrt(2.0);
  // chain over z_ell..z_d with kernels ell+1..d
  std::vector<double> v, dt(dx.begin() + ell, dx.end());
  v.push_back(0.0);
  for (int k = ell; k < d - 1; ++k) v.push_back(inst.c[k] / r2);
  v.push_back((inst.c[d - 1] + a) / r2);
  const double pref = (a + c) / r2;
  if (ell == 0) {
    v[0] = (s[0] - c) / r2;
    return {pref * kernel_chain_laplace(v, dt, 0, opt), 0.0};
  }
  const double sl = s[ell - 1], sn = s[ell];
  const double scale = pref * atom_factor(inst, ell);
  v[0] = (sn - c) / r2;
  const double plus = scale * kernel_chain_laplace(v, dt, 0, opt);
  v[0] = (2.0 * sl - sn - c) / r2;
  const double minus = scale * kernel_chain_laplace(v, dt, 0, opt);
  return {plus, minus};
}

double phi_dl_qform(const DualityInstance& inst, int ell, const QuadOptions& opt) {
  const auto [plus, minus] = phi_dl_qform_parts(inst, ell, opt);
  return plus - minus;
}

double psi_dl(const DualityInstance& inst, int ell, const QuadOptions& opt) {
  inst.validate();
  const int d = inst.d();
  if (ell < 1 || ell > d) throw DomainError("psi_dl: ell must be in 1..d");
  const auto s = inst.s();
  const double r2 = std::sqrt(2.0);
  std::vector<double> v{(inst.c_lim - s[0]) / r2};
  for (int k = 0; k < d - 1; ++k) v.push_back(inst.c[k] / r2);
  v.push_back((inst.c[d - 1] + inst.a_lim) / r2);
  return kernel_chain_laplace(v, inst.dx(), ell, opt);
}

double duality_closed_form_d1(double a_lim, double c_lim, double s) {
  const double r2 = std::sqrt(2.0);
  return calH((a_lim + s) / r2, (c_lim - s) / r2);
}

DualityResidual duality_residual(const DualityInstance& inst, PhiForm form, const QuadOptions& opt) {
  inst.validate();
  DualityResidual r;
  const int d = inst.d();
  for (int l = 0; l <= d; ++l) {
    const double v = (l == d || form == PhiForm::Cauchy) ? phi_dl(inst, l, opt) : phi_dl_qform(inst, l, opt);
    r.lhs_terms.push_back(v);
    r.lhs += v;
  }
  for (int l = 1; l <= d; ++l) {
    const double v = psi_dl(inst, l, opt);
    r.rhs_terms.push_back(v);
    r.rhs += v;
  }
  r.abs_gap = std::abs(r.lhs - r.rhs);
  r.rel_gap = r.abs_gap / std::abs(r.rhs);
  return r;
}

std::vector<DualityInstance> admissible_instances(int d, int count, std::uint64_t seed, double margin) {
  if (d < 1) throw DomainError("admissible_instances: d must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unif(rng); };
  std::vector<DualityInstance> out;
  for (int i = 0; i < count; ++i) {
    DualityInstance inst;
    const double gap = between(margin, 1.5);  // -(a + c)
    inst.a_lim = between(-1.5, 1.0);
    inst.c_lim = -inst.a_lim - gap;
    for (int k = 0; k + 1 < d; ++k) inst.c.push_back(between(margin, 1.5));
    const double floor_cd = std::max(-inst.a_lim, 0.0) + margin;
    inst.c.push_back(between(floor_cd, floor_cd + 1.5));
    // d - 1 distinct interior points from {0.1, ..., 0.9}
    std::vector<int> pts{1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<int> chosen(pts.begin(), pts.begin() + std::min(d - 1, 9));
    std::sort(chosen.begin(), chosen.end());
    for (int p : chosen) inst.x.push_back(p / 10.0);
    inst.x.push_back(1.0);
    inst.validate();
    out.push_back(inst);
  }
  return out;
}

std::vector<DualityInstance> d1_grid() {
  std::vector<DualityInstance> out;
  for (double a : {-1.5, -0.75, -0.25, 0.3, 0.8})
    for (double gap : {0.1, 0.3, 0.6, 1.0, 1.5})
      for (double e : {0.1, 0.3, 0.7, 1.2, 2.0}) {
        DualityInstance inst{a, -a - gap, {1.0}, {std::max(-a, 0.0) + e}};
        inst.validate();
        out.push_back(inst);
      }
  return out;
}

std::string residual_csv_header(int d) {
  std::ostringstream out;
  out << "d,a,c";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  for (int k = 1; k <= d; ++k) out << ",c" << k;
  out << ",lhs,rhs,abs_gap,rel_gap,method";
  return out.str();
}

std::string residual_csv_row(const DualityInstance& inst, const DualityResidual& r,
                             const std::string& method) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17e", v);
    out << ',' << buf;
  };
  out << inst.d();
  num(inst.a_lim);
  num(inst.c_lim);
  for (double v : inst.x) num(v);
  for (double v : inst.c) num(v);
  num(r.lhs);
  num(r.rhs);
  num(r.abs_gap);
  num(r.rel_gap);
  out << ',' << method;
  return out.str();
}

}  // namespace shocklab
