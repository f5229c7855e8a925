#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shocklab/quadrature.hpp"

namespace shocklab {

// (a, c) with a + c < 0, points 0 < x_1 < ... < x_d = 1 and coefficients
// c_k > 0 with -c_d < a < -c.
struct DualityInstance {
  double a_lim = 0.0;
  double c_lim = 0.0;
  std::vector<double> x;
  std::vector<double> c;

  int d() const { return static_cast<int>(c.size()); }
  // s_k = c_k + ... + c_d
  std::vector<double> s() const;
  std::vector<double> dx() const;
  // Throws ConstraintViolation naming the first violated inequality.
  void validate() const;
};

// exp(sum_k s_k^2 dx_k / 4): the Brownian factor of the limit transform.
double brownian_factor(const std::vector<double>& x, const std::vector<double>& c);

// Limit constituents written with the Cauchy-type kernel p (ell = 0..d).
double phi_dl(const DualityInstance& inst, int ell, const QuadOptions& opt = {});

// Killed-kernel rewrite of phi_dl for ell = 0..d-1. For ell >= 1 returns the
// pair (plus, minus) whose difference is phi_dl; for ell = 0 the pair is
// (value, 0).
std::pair<double, double> phi_dl_qform_parts(const DualityInstance& inst, int ell,
                                             const QuadOptions& opt = {});
double phi_dl_qform(const DualityInstance& inst, int ell, const QuadOptions& opt = {});

// Right-hand constituents (ell = 1..d): the part of the eta^{(a/sqrt2, c/sqrt2)}
// Laplace transform (coefficients c/sqrt2) with the path minimum in
// (x_{ell-1}, x_ell], times calH(a/sqrt2, c/sqrt2).
double psi_dl(const DualityInstance& inst, int ell, const QuadOptions& opt = {});

// calH((a + s)/sqrt2, (c - s)/sqrt2): the closed form of both sides for d = 1.
double duality_closed_form_d1(double a_lim, double c_lim, double s);

// Cauchy: the left side through kernel p, independent of the kernel chains
// used for the right side. Killed: the same terms rewritten with killed kernels,
// which shares the chain machinery with the right side and is much cheaper.
enum class PhiForm { Cauchy, Killed };

struct DualityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  std::vector<double> lhs_terms;  // phi_{d,0..d}
  std::vector<double> rhs_terms;  // psi_{d,1..d}
};

DualityResidual duality_residual(const DualityInstance& inst, PhiForm form = PhiForm::Cauchy,
                                 const QuadOptions& opt = {});

// Random instances satisfying every constraint with the given margin, x drawn
// from a fixed set of breakpoints. Deterministic in the seed.
std::vector<DualityInstance> admissible_instances(int d, int count, std::uint64_t seed,
                                                  double margin = 0.05);
// 5 x 5 x 5 grid of admissible (a, c, s) for d = 1.
std::vector<DualityInstance> d1_grid();

std::string residual_csv_header(int d);
std::string residual_csv_row(const DualityInstance& inst, const DualityResidual& r,
                             const std::string& method);

}  // namespace shocklab
