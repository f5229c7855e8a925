#pragma once

#include <vector>

#include "shocklab/aw_measure.hpp"
#include "shocklab/laplace.hpp"
#include "shocklab/params.hpp"

namespace shocklab {

// 2^{-n} int prod_k (cosh(s_k/sqrt n) + y_k)^{n_k - n_{k-1}} over the joint
// measure at times exp(-2 s_k / sqrt n). Requires c_1..c_{d-1} > 0.
double phi_d_n(const LaplaceRequest& req, const BoundaryParams& bp_n, long n,
               const QuadOptions& opt = {});

struct ZnParts {
  double continuous = 0.0;
  double atoms = 0.0;
  double total() const { return continuous + atoms; }
};

// Z_n = 2^{-n} int (1 + y)^n pi_1(dy). Throws TimeNotAdmissible when 1 is not
// an admissible time (coexistence line A = C > 1).
ZnParts z_n_parts(const BoundaryParams& bp_n, long n, const QuadOptions& opt = {});
double z_n(const BoundaryParams& bp_n, long n, const QuadOptions& opt = {});

// phi_d_n / z_n: the Laplace transform of the rescaled height function.
double prelimit_height_laplace(const LaplaceRequest& req, const BoundaryParams& bp_n, long n,
                               const QuadOptions& opt = {});

// Measures near the spectral edge y = 1 in the variables u = 2n(1 - y),
// time t_n = exp(2t / sqrt n).
class TangentMeasureView {
 public:
  TangentMeasureView(const BoundaryParams& bp_n, long n, double t);

  long n() const { return n_; }
  double t() const { return t_; }
  // density of the continuous part of the marginal in u
  double density(double u) const;
  // atoms as (2n(1 - y), mass)
  std::vector<Atom> atoms() const;
  // continuous-to-continuous transition density from (s, u) to (t, v), s < t
  double transition_density(double s, double u, double v) const;
  // atom at time s to the atom at time t
  double atom_transition_mass(double s) const;
  // atom at time s to continuous density at v
  double atom_transition_density(double s, double v) const;

 private:
  double time_of(double t) const;
  BoundaryParams bp_;
  long n_;
  double t_;
  SignedMeasure marginal_;
};

// Limits of the tangent-scale objects for t < a < -c.
namespace tangent_limit {
double atom_location(double a, double c, double t);
double atom_mass(double a, double c, double t);
double density(double a, double c, double t, double u);
double transition_density(double a, double s, double t, double u, double v);
double atom_transition_mass(double a, double c, double s, double t);
double atom_transition_density(double a, double c, double s, double t, double v);
}  // namespace tangent_limit

}  // namespace shocklab
