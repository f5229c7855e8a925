#include "shocklab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525982209, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
};

Panel kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  double fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double hl = std::abs(half);
  const double result = resk * half;
  resabs *= hl;
  resasc *= hl;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<double> cuts{a};
  for (double p : opt.breakpoints)
    if ((p - a) * (p - b) < 0.0) cuts.push_back(p);
  cuts.push_back(b);
  if (a < b)
    std::sort(cuts.begin(), cuts.end());
  else
    std::sort(cuts.begin(), cuts.end(), std::greater<>());

  std::vector<Panel> panels;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) panels.push_back(kronrod21(f, cuts[i], cuts[i + 1]));
  out.evaluations = 21 * static_cast<long>(panels.size());

  auto totals = [&](double& v, double& e) {
    v = 0.0;
    e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
  };
  double value, error;
  totals(value, error);
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
    if (static_cast<int>(panels.size()) >= opt.max_intervals) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& x, const Panel& y) { return x.error < y.error; });
    const Panel p = *worst;
    const double mid = 0.5 * (p.a + p.b);
    if (mid == p.a || mid == p.b) break;
    *worst = kronrod21(f, p.a, mid);
    panels.push_back(kronrod21(f, mid, p.b));
    out.evaluations += 42;
    totals(value, error);
  }
  out.value = value;
  out.error = error;
  out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return out;
}

QuadResult integrate_upper_infinite(const Integrand& f, double a, const QuadOptions& opt,
                                    double scale) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    const double v = f(a + scale * t / s);
    return v == 0.0 ? 0.0 : v * scale / (s * s);
  };
  QuadOptions o = opt;
  o.breakpoints.clear();
  for (double p : opt.breakpoints)
    if (p > a) o.breakpoints.push_back((p - a) / (p - a + scale));
  return integrate(g, 0.0, 1.0, o);
}

QuadResult integrate_lower_infinite(const Integrand& f, double b, const QuadOptions& opt,
                                    double scale) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    const double v = f(b - scale * t / s);
    return v == 0.0 ? 0.0 : v * scale / (s * s);
  };
  QuadOptions o = opt;
  o.breakpoints.clear();
  for (double p : opt.breakpoints)
    if (p < b) o.breakpoints.push_back((b - p) / (b - p + scale));
  return integrate(g, 0.0, 1.0, o);
}

double checked(const QuadResult& r, const char* what) {
  if (!r.converged || !std::isfinite(r.value))
    throw QuadratureNotConverged(std::string(what) + ": quadrature did not converge", r.value,
                                 r.error);
  return r.value;
}

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace shocklab
