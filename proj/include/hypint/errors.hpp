#pragma once

#include <stdexcept>
#include <string>

namespace hypint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument hits a pole of Gamma or a vanishing Pochhammer denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Point lies on a branch cut or outside the region an evaluator supports.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Integer-difference degeneracy in a connection formula or a loop prefactor.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Parameter inequality required by an integral representation fails.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NonIntegrable : public Error {
 public:
  using Error::Error;
};

// No admissible contour for the requested radius and routing.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Tracked argument jumped too far between two successive updates.
class DiscontinuityError : public Error {
 public:
  using Error::Error;
};

// Complex input given to a predicate defined only on real points.
class UnsupportedRegion : public Error {
 public:
  using Error::Error;
};

// A check whose evaluation hit a degenerate, geometric or parameter
// obstruction; reported as skipped rather than failed.
class SkippedError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypint
