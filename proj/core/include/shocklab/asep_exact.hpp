#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shocklab/laplace.hpp"
#include "shocklab/params.hpp"

namespace shocklab {

inline constexpr int kMaxExactSites = 14;

// Configuration word: site i occupies bit (i - 1).
using Config = std::uint32_t;

inline int occupied(Config s, int site) { return static_cast<int>((s >> (site - 1)) & 1u); }

struct Transition {
  Config from;
  Config to;
  double rate;
};

struct RateMatrix {
  int n = 0;
  RateParams rates;
  std::vector<Transition> transitions;  // off-diagonal entries
  std::vector<double> exit_rate;        // minus the diagonal

  // Row sums of the full generator (all zero up to rounding).
  std::vector<double> row_sums() const;
};

struct StationaryTable {
  int n = 0;
  std::vector<double> probs;
  double residual = 0.0;  // max |(pi Q)_j|
};

RateMatrix build_generator(const RateParams& r, int n);
StationaryTable stationary(const RateMatrix& gen);
StationaryTable stationary(const RateParams& r, int n);

// E[prod_i t_i^{tau_i}]
double joint_moment(const StationaryTable& st, const std::vector<double>& t);
// E[exp(-sum_k (c_k / sqrt n) h_n(x_k))]
double height_laplace(const StationaryTable& st, const LaplaceRequest& req);
// E[tau_i] for i = 1..n
std::vector<double> densities(const StationaryTable& st);

struct SandwichResult {
  double first;
  double second;
  bool ordered;  // first >= second up to 1e-12 relative
};

// Requires A1 <= A2, C1 >= C2, B1 = B2, D1 = D2 and a common q.
SandwichResult sandwich_check(const BoundaryParams& bp1, const BoundaryParams& bp2,
                              const std::vector<double>& f);

std::string config_string(Config s, int n);
std::string stationary_to_csv(const StationaryTable& st);

}  // namespace shocklab
