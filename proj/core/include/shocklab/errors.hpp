#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when a time is outside the admissible domain of the boundary
// parameters. `nearest` is an admissible time close to the offending one
// (NaN when none could be suggested).
class TimeNotAdmissible : public Error {
 public:
  TimeNotAdmissible(const std::string& what, double time, double nearest)
      : Error(what), time(time), nearest(nearest) {}
  double time;
  double nearest;
};

class AcOnLattice : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(const std::string& what, double estimate, double error)
      : Error(what), estimate(estimate), error(error) {}
  double estimate;
  double error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class SolveFailure : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

}  // namespace shocklab
