#include "shocklab/laplace.hpp"

#include <cmath>

#include "shocklab/errors.hpp"

namespace shocklab {

void LaplaceRequest::validate() const {
  if (x.empty() || x.size() != c.size())
    throw DomainError("Laplace request: need matching non-empty x and c");
  double prev = 0.0;
  for (double xi : x) {
    if (!(xi > prev)) throw DomainError("Laplace request: x must be strictly increasing in (0, 1]");
    prev = xi;
  }
  if (std::abs(x.back() - 1.0) > 1e-12) throw DomainError("Laplace request: last point must be 1");
}

std::vector<double> LaplaceRequest::partial_sums() const {
  std::vector<double> s(c.size());
  double acc = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    acc += c[k];
    s[k] = acc;
  }
  return s;
}

std::vector<double> LaplaceRequest::increments() const {
  std::vector<double> dx(x.size());
  double prev = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    dx[k] = x[k] - prev;
    prev = x[k];
  }
  return dx;
}

std::vector<long> LaplaceRequest::block_ends(long n) const {
  std::vector<long> ends{0};
  for (double xi : x) {
    // guard against n*x landing a hair below an integer
    ends.push_back(static_cast<long>(std::floor(n * xi + 1e-9)));
  }
  return ends;
}

}  // namespace shocklab
