#pragma once

#include <string>

namespace shocklab {

// Jump rates of open ASEP: entry alpha / exit gamma at site 1, entry delta /
// exit beta at site n, right hops at rate 1 and left hops at rate q.
struct RateParams {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.0;
  double delta = 0.0;
  double q = 0.0;
};

struct BoundaryParams {
  double A = 1.0;
  double B = 0.0;
  double C = 1.0;
  double D = 0.0;
  double q = 0.0;
};

// Limits a = lim sqrt(n)(1 - A_n), c = lim sqrt(n)(1 - C_n).
struct ScalingLimitParams {
  double a_lim = 0.0;
  double c_lim = 0.0;
  double B = 0.0;
  double D = 0.0;
  double q = 0.0;
};

enum class Phase { MaxCurrent, LowDensity, HighDensity, CoexistenceLine };
enum class Region { Fan, Shock, BoundaryAC1 };

struct PhaseLabel {
  Phase phase;
  Region region;
};

enum class KappaSign { Plus, Minus };

double kappa(double x, double y, double q, KappaSign sign);

void validate(const RateParams& r);
void validate(const BoundaryParams& b);

BoundaryParams rates_to_boundary(const RateParams& r);
RateParams boundary_to_rates(const BoundaryParams& b);

PhaseLabel classify(const BoundaryParams& b, double tol = 1e-12);

struct ScaledBoundary {
  BoundaryParams params;
  // Set when A_n*C_n sits within the lattice tolerance of a point excluded
  // from the admissible time domain (C_n/A_n = q^l for some integer l).
  bool near_excluded_lattice = false;
};

ScaledBoundary scaling_sequence(const ScalingLimitParams& s, long n);

std::string to_string(Phase p);
std::string to_string(Region r);

}  // namespace shocklab
