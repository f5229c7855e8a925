#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shocklab/params.hpp"
#include "shocklab/quadrature.hpp"
#include "shocklab/specfun.hpp"

namespace shocklab {

inline constexpr double kLatticeTol = 1e-9;

// Askey-Wilson parameters. a, b real; c, d real or a conjugate pair.
struct AwParams {
  double a = 0.0;
  double b = 0.0;
  cplx c = 0.0;
  cplx d = 0.0;
  double q = 0.0;
};

struct OmegaReport {
  bool cond_i = true;    // abcd off {q^-l : l >= 0}
  bool cond_ii = true;   // ratios of large parameters off {q^l : l in Z}
  bool cond_iii = true;  // reality and ab < 1, cd < 1
  std::string detail;
  double distance = 0.0;  // distance to the offending lattice point, when any
  bool ok() const { return cond_i && cond_ii && cond_iii; }
};

OmegaReport validate_omega_q(const AwParams& p, double tol = kLatticeTol);

struct TimeDomain {
  double lo = 0.0;
  double hi = 0.0;  // +inf when unbounded
  bool has_lattice = false;
  double lattice_base = 0.0;  // excluded points q^l * lattice_base, l in Z
  double q = 0.0;

  bool contains(double t, double tol = kLatticeTol) const;
  // Distance from t to the nearest excluded lattice point (inf if none).
  double lattice_distance(double t) const;
  double nearest_admissible(double t) const;
};

TimeDomain admissible_times(const BoundaryParams& bp);
// Throws TimeNotAdmissible with a suggestion when t is outside the domain.
void require_admissible(const TimeDomain& dom, double t, const std::string& context);

struct Atom {
  double location;
  double mass;
};

// Density of the continuous part at y in (-1, 1).
double aw_density(double y, const AwParams& p);
std::vector<Atom> atoms(const AwParams& p);

// Askey-Wilson signed measure: continuous density on [-1, 1] and a finite
// atom list. Also used for point masses (no continuous part).
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(const AwParams& p);
  static SignedMeasure point_mass(double x);
  static SignedMeasure zero();

  const AwParams& params() const { return params_; }
  bool has_continuous() const { return continuous_; }
  const std::vector<Atom>& atom_list() const { return atoms_; }

  // Continuous density in y.
  double density(double y) const;
  // Density in theta with y = cos(theta); includes the Jacobian sin(theta).
  double theta_density(double theta) const;

  // Integral of g; `peak` > 0 hints that g concentrates near y = 1 on the
  // scale 1 - y ~ 1/peak.
  double integrate(const std::function<double(double)>& g, const QuadOptions& opt = {},
                   double peak = 0.0) const;
  double total_mass(const QuadOptions& opt = {}) const;

  bool outside_support = false;

 private:
  AwParams params_{};
  bool continuous_ = false;
  double prefactor_ = 0.0;
  double rho_[4] = {};
  double phi_[4] = {};
  std::vector<Atom> atoms_;
};

SignedMeasure marginal_pi(const BoundaryParams& bp, double t);
// Transition from x at time s to time t >= s. If x is not in the support of
// the time-s marginal, returns the zero measure with outside_support set.
SignedMeasure transition_P(const BoundaryParams& bp, double s, double t, double x);
// Same without the support and domain checks; used inside joint integration.
SignedMeasure transition_P_unchecked(const BoundaryParams& bp, double s, double t, double x);

struct JointOptions {
  QuadOptions quad;
  // Per-coordinate concentration hint passed to SignedMeasure::integrate.
  std::vector<double> peak;
  // Replace each conditional expectation x -> E[... | y_k = x] on [-1, 1] by
  // a Chebyshev interpolant once its coefficients fall below interp_tol
  // (relative); falls back to direct recursion past max_degree.
  bool interpolate = true;
  double interp_tol = 1e-13;
  int max_degree = 512;
};

// int prod_k g_k(y_k) pi_{t_1}(dy_1) P_{t_1,t_2}(y_1, dy_2) ... by backward
// recursion over quadrature nodes and atoms.
double integrate_joint(const BoundaryParams& bp, const std::vector<double>& times,
                       const std::vector<std::function<double(double)>>& factors,
                       const JointOptions& opt = {});

// CSV dump (kind, location, value): density on a grid plus atoms.
std::string measure_to_csv(const SignedMeasure& m, int grid = 200);

}  // namespace shocklab
