#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shocklab/quadrature.hpp"

namespace shocklab {

// Parameters (a, c) of the limit process eta: Brownian motion reweighted by
// exp((a + c) min_t w_t - a w_1).
struct LimitLawParams {
  double a_lim = 0.0;
  double c_lim = 0.0;
};

// Integral over y_0..y_d >= 0 of exp(-sum_r v_r y_r) times a chain of killed
// kernels with time steps dt_1..dt_d, the one in slot `starred` (1..d)
// replaced by q*; starred = 0 keeps every kernel plain (then sum(v) > 0 is
// required). The two end variables are integrated in closed form.
double kernel_chain_laplace(const std::vector<double>& v, const std::vector<double>& dt,
                            int starred, const QuadOptions& opt = {});

// Joint density of (eta_{t_1}, ..., eta_{t_d}); times ascend with t_d = 1.
double eta_joint_density(const LimitLawParams& lp, const std::vector<double>& times,
                         const std::vector<double>& z, const QuadOptions& opt = {});
// Same density through the meander form; requires a + c > 0.
double eta_joint_density_meander(const LimitLawParams& lp, const std::vector<double>& times,
                                 const std::vector<double>& z, const QuadOptions& opt = {});

// E[exp(-sum_k c_k eta_{t_k})].
double eta_laplace(const LimitLawParams& lp, const std::vector<double>& times,
                   const std::vector<double>& c, const QuadOptions& opt = {});

// Laplace transform of the limit height process (B + eta^{(a/sqrt2, c/sqrt2)}) / sqrt 2
// at points x (ascending, x_d = 1) with coefficients c.
double limit_height_laplace(const LimitLawParams& lp, const std::vector<double>& x,
                            const std::vector<double>& c, const QuadOptions& opt = {});

// psi along (m + eps, m - eps) and (m - eps, m + eps) as eps decreases to the
// diagonal a = c = m. One-sided limits are extrapolated linearly from the two
// smallest eps; the gaps compare them with psi evaluated on the diagonal.
struct ContinuitySweep {
  double on_diagonal = 0.0;
  std::vector<double> eps, above, below;
  double limit_above = 0.0, limit_below = 0.0;
  double max_limit_gap() const;
  double max_raw_gap() const;  // at the smallest eps
};

ContinuitySweep continuity_sweep(double m, const std::vector<double>& times,
                                 const std::vector<double>& c, const std::vector<double>& eps,
                                 const QuadOptions& opt = {});

struct WeightedPathEnsemble {
  std::vector<double> grid;                  // m + 1 points on [0, 1]
  std::vector<std::vector<double>> paths;    // N paths, m + 1 values each
  std::vector<std::vector<double>> segment_minima;  // N x m
  std::vector<double> weights;               // raw weights exp((a+c) min - a w_1)
  double ess = 0.0;
  bool degenerate = false;                   // ess < 0.01 N

  std::size_t size() const { return weights.size(); }
  // value of path i at time t (linear interpolation on the grid)
  double value_at(std::size_t i, double t) const;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Brownian paths on a uniform grid of m steps (m a power of two >= 256) with
// exact per-segment bridge minima, weighted towards eta^{(a, c)}.
WeightedPathEnsemble eta_sample(const LimitLawParams& lp, int m, long N, std::uint64_t seed,
                                int workers = 0);

// Self-normalized estimate of E[exp(-sum_k c_k eta_{t_k})] with delta-method SE.
Estimate ensemble_laplace(const WeightedPathEnsemble& e, const std::vector<double>& times,
                          const std::vector<double>& c);
// Mean raw weight: an estimate of calH(a, c).
Estimate ensemble_normalizer(const WeightedPathEnsemble& e);
// Weighted moment E[f(path at t)] for f(x) = x^power.
Estimate ensemble_moment(const WeightedPathEnsemble& e, double t, int power);

struct TwoLineRow {
  double t = 0.0;
  int power = 1;           // first or second moment
  std::string line;        // "line1" or "sum"
  Estimate direct;         // from the two-line weighting
  Estimate reference;      // from eta_sample plus an independent Brownian motion
  double z_score = 0.0;    // |direct - reference| / combined SE
};

struct TwoLineReport {
  std::vector<TwoLineRow> rows;
  double ess_two_line = 0.0;
  double ess_eta = 0.0;
  bool all_within(double z) const;
};

// Two independent Brownian lines with drifts -a and +a reweighted by
// exp((a + c) min(w1 - w2)); compares the first line and the sum of lines with
// ((eta^{(sqrt2 a, sqrt2 c)} + B) / sqrt2) and sqrt2 B at t in {0.25, 0.5, 1}.
TwoLineReport two_line_check(const LimitLawParams& lp, int m, long N, std::uint64_t seed,
                             int workers = 0);

std::string ensemble_to_csv(const WeightedPathEnsemble& e, std::size_t max_paths = 100);

}  // namespace shocklab
