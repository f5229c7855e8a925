#include "shocklab/limit_process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "shocklab/errors.hpp"
#include "shocklab/kernels.hpp"
#include "shocklab/parallel.hpp"
#include "shocklab/specfun.hpp"

namespace shocklab {

namespace {

double chain_kernel(bool starred, double t, double x, double y) {
  return starred ? kernel_qbstar(t, 0.0, x, y) : kernel_q(t, x, y);
}

double chain_end(bool starred, double t, double x, double lambda) {
  return starred ? laplace_qstar(t, x, lambda) : laplace_q(t, x, lambda);
}

void check_times(const std::vector<double>& times, const char* what) {
  if (times.empty()) throw DomainError(std::string(what) + ": need at least one time");
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw DomainError(std::string(what) + ": times must increase from 0");
    prev = t;
  }
  if (std::abs(times.back() - 1.0) > 1e-14) throw DomainError(std::string(what) + ": last time must be 1");
}

std::vector<double> steps(const std::vector<double>& times) {
  std::vector<double> dt(times.size());
  for (size_t k = 0; k < times.size(); ++k) dt[k] = times[k] - (k ? times[k - 1] : 0.0);
  return dt;
}

}  // namespace

double kernel_chain_laplace(const std::vector<double>& v, const std::vector<double>& dt,
                            int starred, const QuadOptions& opt) {
  const int d = static_cast<int>(dt.size());
  if (d < 1 || static_cast<int>(v.size()) != d + 1)
    throw DomainError("kernel_chain_laplace: need d steps and d + 1 exponents");
  if (starred < 0 || starred > d) throw DomainError("kernel_chain_laplace: starred slot out of range");
  double total_t = 0.0, vsum = 0.0, vnet = 0.0;
  for (double t : dt) {
    if (!(t > 0.0)) throw DomainError("kernel_chain_laplace: steps must be positive");
    total_t += t;
  }
  for (double x : v) {
    vsum += std::abs(x);
    vnet += x;
  }
  // With a starred kernel the chain is confined by a Gaussian and exponential
  // tilts shift the bulk by at most vsum * total_t. Without one, the joint
  // tail decays like exp(-sum(v) y) along the diagonal.
  double ymax = vsum * total_t + 14.0 * std::sqrt(total_t);
  if (starred == 0) {
    if (!(vnet > 0.0)) throw DomainError("kernel_chain_laplace: plain chain needs sum(v) > 0");
    ymax += 40.0 / vnet;
  }

  if (d == 1) {
    auto f = [&](double y) { return std::exp(-v[0] * y) * chain_end(starred == 1, dt[0], y, v[1]); };
    return checked(integrate(f, 0.0, ymax, opt), "kernel chain (d = 1)");
  }

  // G_k(y) = int K_{k+1}(y, y') e^{-v_{k+1} y'} G_{k+1}(y') dy', G_{d-1} = right end.
  std::function<double(int, double)> G = [&](int k, double y) -> double {
    if (k == d - 1) return chain_end(starred == d, dt[d - 1], y, v[d]);
    const bool st = starred == k + 1;
    const double step = dt[k];
    auto f = [&, k, y, st, step](double yp) {
      const double ker = chain_kernel(st, step, y, yp);
      if (ker == 0.0) return 0.0;
      return ker * std::exp(-v[k + 1] * yp) * G(k + 1, yp);
    };
    QuadOptions o = opt;
    o.breakpoints = {y};
    for (double w : {3.0, 8.0}) {
      if (y - w * std::sqrt(step) > 0.0) o.breakpoints.push_back(y - w * std::sqrt(step));
      if (y + w * std::sqrt(step) < ymax) o.breakpoints.push_back(y + w * std::sqrt(step));
    }
    std::sort(o.breakpoints.begin(), o.breakpoints.end());
    return checked(integrate(f, 0.0, ymax, o), "kernel chain (inner)");
  };
  auto outer = [&](double y) {
    const double left = chain_end(starred == 1, dt[0], y, v[0]);
    if (left == 0.0) return 0.0;
    return left * std::exp(-v[1] * y) * G(1, y);
  };
  return checked(integrate(outer, 0.0, ymax, opt), "kernel chain (outer)");
}

double eta_joint_density(const LimitLawParams& lp, const std::vector<double>& times,
                         const std::vector<double>& z, const QuadOptions& opt) {
  check_times(times, "eta_joint_density");
  if (z.size() != times.size()) throw DomainError("eta_joint_density: one value per time");
  const auto dt = steps(times);
  const int d = static_cast<int>(z.size());
  const double apc = lp.a_lim + lp.c_lim;
  double top = 0.0;
  for (double x : z) top = std::min(top, x);
  auto f = [&](double b) {
    // (-d/db) of the product of killed kernels: one starred factor at a time
    double sum = 0.0;
    for (int l = 0; l < d; ++l) {
      double prod = 1.0;
      for (int k = 0; k < d && prod != 0.0; ++k) {
        const double from = k ? z[k - 1] : 0.0;
        prod *= k == l ? kernel_qbstar(dt[k], b, from, z[k]) : kernel_qb(dt[k], b, from, z[k]);
      }
      sum += prod;
    }
    if (sum == 0.0) return 0.0;
    return sum * std::exp(apc * b - lp.a_lim * z.back());
  };
  const double val = checked(integrate_lower_infinite(f, top, opt), "eta joint density");
  return val / calH(lp.a_lim, lp.c_lim);
}

double eta_joint_density_meander(const LimitLawParams& lp, const std::vector<double>& times,
                                 const std::vector<double>& z, const QuadOptions& opt) {
  check_times(times, "eta_joint_density_meander");
  const double apc = lp.a_lim + lp.c_lim;
  if (!(apc > 0.0)) throw ConstraintViolation("meander form requires a + c > 0");
  if (z.size() != times.size()) throw DomainError("eta_joint_density_meander: one value per time");
  const auto dt = steps(times);
  double top = 0.0;
  for (double x : z) top = std::min(top, x);
  auto f = [&](double b) {
    double prod = 1.0;
    for (size_t k = 0; k < z.size() && prod != 0.0; ++k)
      prod *= kernel_qb(dt[k], b, k ? z[k - 1] : 0.0, z[k]);
    return prod == 0.0 ? 0.0 : prod * std::exp(apc * b - lp.a_lim * z.back());
  };
  const double val = checked(integrate_lower_infinite(f, top, opt), "eta meander density");
  return apc * val / calH(lp.a_lim, lp.c_lim);
}

double eta_laplace(const LimitLawParams& lp, const std::vector<double>& times,
                   const std::vector<double>& c, const QuadOptions& opt) {
  check_times(times, "eta_laplace");
  if (c.size() != times.size()) throw DomainError("eta_laplace: one coefficient per time");
  const int d = static_cast<int>(c.size());
  std::vector<double> v(d + 1);
  double csum = 0.0;
  for (double x : c) csum += x;
  v[0] = lp.c_lim - csum;
  for (int k = 1; k < d; ++k) v[k] = c[k - 1];
  v[d] = c[d - 1] + lp.a_lim;
  const auto dt = steps(times);
  double total = 0.0;
  for (int l = 1; l <= d; ++l) total += kernel_chain_laplace(v, dt, l, opt);
  return total / calH(lp.a_lim, lp.c_lim);
}

double limit_height_laplace(const LimitLawParams& lp, const std::vector<double>& x,
                            const std::vector<double>& c, const QuadOptions& opt) {
  check_times(x, "limit_height_laplace");
  if (c.size() != x.size()) throw DomainError("limit_height_laplace: one coefficient per point");
  const double r2 = std::sqrt(2.0);
  double s = 0.0, gauss = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    s += c[k];
    gauss += 0.25 * s * s * (x[k] - (k ? x[k - 1] : 0.0));
  }
  std::vector<double> cs(c);
  for (double& v : cs) v /= r2;
  return std::exp(gauss) * eta_laplace({lp.a_lim / r2, lp.c_lim / r2}, x, cs, opt);
}

double ContinuitySweep::max_limit_gap() const {
  return std::max(std::abs(limit_above - on_diagonal), std::abs(limit_below - on_diagonal));
}

double ContinuitySweep::max_raw_gap() const {
  return std::max(std::abs(above.back() - on_diagonal), std::abs(below.back() - on_diagonal));
}

ContinuitySweep continuity_sweep(double m, const std::vector<double>& times,
                                 const std::vector<double>& c, const std::vector<double>& eps,
                                 const QuadOptions& opt) {
  if (eps.size() < 2) throw DomainError("continuity_sweep: need at least two eps values");
  ContinuitySweep out;
  out.eps = eps;
  std::sort(out.eps.begin(), out.eps.end(), std::greater<>());
  out.on_diagonal = eta_laplace({m, m}, times, c, opt);
  for (double e : out.eps) {
    out.above.push_back(eta_laplace({m + e, m - e}, times, c, opt));
    out.below.push_back(eta_laplace({m - e, m + e}, times, c, opt));
  }
  const size_t n = out.eps.size();
  const double e1 = out.eps[n - 2], e2 = out.eps[n - 1];
  auto extrapolate = [&](const std::vector<double>& f) {
    return (e1 * f[n - 1] - e2 * f[n - 2]) / (e1 - e2);
  };
  out.limit_above = extrapolate(out.above);
  out.limit_below = extrapolate(out.below);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

double WeightedPathEnsemble::value_at(std::size_t i, double t) const {
  const auto& p = paths[i];
  const std::size_t m = p.size() - 1;
  const double pos = t * static_cast<double>(m);
  std::size_t j = static_cast<std::size_t>(std::floor(pos));
  if (j >= m) return p[m];
  const double frac = pos - static_cast<double>(j);
  return frac == 0.0 ? p[j] : p[j] + frac * (p[j + 1] - p[j]);
}

namespace {

constexpr long kBlock = 256;

void check_sampler_args(int m, long N) {
  if (m < 256 || (m & (m - 1)) != 0)
    throw PreconditionViolation("grid size must be a power of two >= 256");
  if (N < 1000) throw PreconditionViolation("need at least 1000 paths");
}

// Minimum of a Brownian bridge from x to y over time dt with variance rate
// sigma2, sampled by inverting P(min < m) = exp(-2 (x - m)(y - m) / (sigma2 dt)).
double bridge_min(double x, double y, double sigma2_dt, double u) {
  const double d = y - x;
  return 0.5 * (x + y - std::sqrt(d * d - 2.0 * sigma2_dt * std::log(u)));
}

double open_unit(std::mt19937_64& rng) {
  // uniform on (0, 1]
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double ess_of(const std::vector<double>& w) {
  double s = 0.0, s2 = 0.0;
  for (double x : w) {
    s += x;
    s2 += x * x;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

Estimate weighted_mean(const std::vector<double>& w, const std::vector<double>& f) {
  double sw = 0.0, swf = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    sw += w[i];
    swf += w[i] * f[i];
  }
  const double mu = swf / sw;
  double var = 0.0;
  for (size_t i = 0; i < w.size(); ++i) var += w[i] * w[i] * (f[i] - mu) * (f[i] - mu);
  return {mu, std::sqrt(var) / sw};
}

}  // namespace

WeightedPathEnsemble eta_sample(const LimitLawParams& lp, int m, long N, std::uint64_t seed,
                                int workers) {
  check_sampler_args(m, N);
  WeightedPathEnsemble e;
  e.grid.resize(m + 1);
  for (int j = 0; j <= m; ++j) e.grid[j] = static_cast<double>(j) / m;
  e.paths.assign(N, std::vector<double>(m + 1, 0.0));
  e.segment_minima.assign(N, std::vector<double>(m, 0.0));
  e.weights.assign(N, 0.0);
  const double dt = 1.0 / m, sdt = std::sqrt(dt);
  const double apc = lp.a_lim + lp.c_lim;
  const long blocks = (N + kBlock - 1) / kBlock;
  parallel_for(blocks, workers > 0 ? workers : default_workers(), [&](long blk) {
    std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(blk)));
    std::normal_distribution<double> normal;
    for (long i = blk * kBlock; i < std::min(N, (blk + 1) * kBlock); ++i) {
      auto& p = e.paths[i];
      auto& mins = e.segment_minima[i];
      double lo = 0.0;
      for (int j = 0; j < m; ++j) {
        p[j + 1] = p[j] + sdt * normal(rng);
        mins[j] = bridge_min(p[j], p[j + 1], dt, open_unit(rng));
        lo = std::min(lo, mins[j]);
      }
      e.weights[i] = std::exp(apc * lo - lp.a_lim * p[m]);
    }
  });
  e.ess = ess_of(e.weights);
  e.degenerate = e.ess < 0.01 * static_cast<double>(N);
  return e;
}

Estimate ensemble_laplace(const WeightedPathEnsemble& e, const std::vector<double>& times,
                          const std::vector<double>& c) {
  if (times.size() != c.size()) throw DomainError("ensemble_laplace: one coefficient per time");
  std::vector<double> f(e.size());
  for (size_t i = 0; i < e.size(); ++i) {
    double s = 0.0;
    for (size_t k = 0; k < c.size(); ++k) s += c[k] * e.value_at(i, times[k]);
    f[i] = std::exp(-s);
  }
  return weighted_mean(e.weights, f);
}

Estimate ensemble_normalizer(const WeightedPathEnsemble& e) {
  const double n = static_cast<double>(e.size());
  double s = 0.0;
  for (double w : e.weights) s += w;
  const double mu = s / n;
  double var = 0.0;
  for (double w : e.weights) var += (w - mu) * (w - mu);
  return {mu, std::sqrt(var / (n - 1.0) / n)};
}

Estimate ensemble_moment(const WeightedPathEnsemble& e, double t, int power) {
  std::vector<double> f(e.size());
  for (size_t i = 0; i < e.size(); ++i) f[i] = std::pow(e.value_at(i, t), power);
  return weighted_mean(e.weights, f);
}

bool TwoLineReport::all_within(double z) const {
  return std::all_of(rows.begin(), rows.end(), [z](const TwoLineRow& r) { return r.z_score <= z; });
}

TwoLineReport two_line_check(const LimitLawParams& lp, int m, long N, std::uint64_t seed,
                             int workers) {
  check_sampler_args(m, N);
  const int w = workers > 0 ? workers : default_workers();
  const double a = lp.a_lim, apc = lp.a_lim + lp.c_lim;
  const double dt = 1.0 / m, sdt = std::sqrt(dt);
  const double probe[3] = {0.25, 0.5, 1.0};

  // two-line ensemble: record the lines at the probe times only
  std::vector<double> weights(N);
  std::vector<std::array<double, 3>> l1(N), l2(N);
  const long blocks = (N + kBlock - 1) / kBlock;
  parallel_for(blocks, w, [&](long blk) {
    std::mt19937_64 rng(stream_seed(seed, 2 * static_cast<std::uint64_t>(blk)));
    std::normal_distribution<double> normal;
    for (long i = blk * kBlock; i < std::min(N, (blk + 1) * kBlock); ++i) {
      double x1 = 0.0, x2 = 0.0, lo = 0.0;
      int next = 0;
      for (int j = 1; j <= m; ++j) {
        const double y1 = x1 + sdt * normal(rng) - a * dt;
        const double y2 = x2 + sdt * normal(rng) + a * dt;
        // w1 - w2 is Brownian with variance rate 2 between grid points
        lo = std::min(lo, bridge_min(x1 - x2, y1 - y2, 2.0 * dt, open_unit(rng)));
        x1 = y1;
        x2 = y2;
        if (next < 3 && j == static_cast<int>(probe[next] * m)) {
          l1[i][next] = x1;
          l2[i][next] = x2;
          ++next;
        }
      }
      weights[i] = std::exp(apc * lo);
    }
  });

  // reference: (eta^{(sqrt2 a, sqrt2 c)} + B) / sqrt2 with B independent
  const double r2 = std::sqrt(2.0);
  const WeightedPathEnsemble eta = eta_sample({r2 * a, r2 * lp.c_lim}, m, N, stream_seed(seed, ~0ULL), w);
  std::vector<std::array<double, 3>> bm(N);
  parallel_for(blocks, w, [&](long blk) {
    std::mt19937_64 rng(stream_seed(seed, 2 * static_cast<std::uint64_t>(blk) + 1));
    std::normal_distribution<double> normal;
    for (long i = blk * kBlock; i < std::min(N, (blk + 1) * kBlock); ++i) {
      double b = 0.0, prev = 0.0;
      for (int k = 0; k < 3; ++k) {
        b += std::sqrt(probe[k] - prev) * normal(rng);
        prev = probe[k];
        bm[i][k] = b;
      }
    }
  });

  TwoLineReport rep;
  rep.ess_two_line = ess_of(weights);
  rep.ess_eta = eta.ess;
  std::vector<double> f(N), g(N);
  for (int k = 0; k < 3; ++k) {
    const double t = probe[k];
    for (int power : {1, 2}) {
      for (long i = 0; i < N; ++i) {
        f[i] = std::pow(l1[i][k], power);
        g[i] = std::pow((eta.value_at(i, t) + bm[i][k]) / r2, power);
      }
      TwoLineRow row{t, power, "line1", weighted_mean(weights, f), weighted_mean(eta.weights, g)};
      row.z_score = std::abs(row.direct.value - row.reference.value) /
                    std::hypot(row.direct.stderr_, row.reference.stderr_);
      rep.rows.push_back(row);

      for (long i = 0; i < N; ++i) f[i] = std::pow(l1[i][k] + l2[i][k], power);
      TwoLineRow sum{t, power, "sum", weighted_mean(weights, f), {power == 1 ? 0.0 : 2.0 * t, 0.0}};
      sum.z_score = std::abs(sum.direct.value - sum.reference.value) / sum.direct.stderr_;
      rep.rows.push_back(sum);
    }
  }
  return rep;
}

std::string ensemble_to_csv(const WeightedPathEnsemble& e, std::size_t max_paths) {
  std::ostringstream out;
  out << "path,time,value,weight\n";
  char buf[128];
  for (std::size_t i = 0; i < std::min(max_paths, e.size()); ++i) {
    for (std::size_t j = 0; j < e.grid.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%.17e,%.17e,%.17e\n", i, e.grid[j], e.paths[i][j],
                    e.weights[i]);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace shocklab
