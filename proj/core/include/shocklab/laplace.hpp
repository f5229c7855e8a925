#pragma once

#include <vector>

namespace shocklab {

// Observation points 0 < x_1 < ... < x_d = 1 with coefficients c_k.
struct LaplaceRequest {
  std::vector<double> x;
  std::vector<double> c;

  void validate() const;
  int d() const { return static_cast<int>(x.size()); }
  // s_k = c_k + ... + c_d
  std::vector<double> partial_sums() const;
  // dx_k = x_k - x_{k-1}, x_0 = 0
  std::vector<double> increments() const;
  // n_k = floor(n x_k), with n_0 = 0 prepended
  std::vector<long> block_ends(long n) const;
};

}  // namespace shocklab
