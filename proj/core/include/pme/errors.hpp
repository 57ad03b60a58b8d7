#pragma once

#include <stdexcept>
#include <string>

namespace pme {

// Base class for all failures raised by the library.  Callers that only need
// coarse dispatch (e.g. process exit codes) can catch the derived types below.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed mesh file or inconsistent mesh construction input.
class MeshFormatError : public Error {
public:
  using Error::Error;
};

// An element whose signed area is non-positive (or numerically indistinguishable
// from zero) was encountered where a valid element was required.
class NonPositiveAreaError : public Error {
public:
  NonPositiveAreaError(int element, double det)
      : Error("element " + std::to_string(element) +
              " has non-positive orientation determinant " + std::to_string(det)),
        element(element),
        det(det) {}
  int element;
  double det;
};

// The mesh motion produced inverted elements and backtracking could not
// recover a valid configuration.
class MeshTangledError : public Error {
public:
  using Error::Error;
};

// Two pieces of the moving boundary crossed each other.
class BoundaryCollisionError : public Error {
public:
  using Error::Error;
};

// The implicit stage solver stopped converging even after repeated step-size
// reductions.
class NewtonDivergenceError : public Error {
public:
  using Error::Error;
};

// Generic time-integration failure (step size underflow, step budget
// exhausted, non-finite state).
class IntegratorFailureError : public Error {
public:
  using Error::Error;
};

// Mesh generation could not meet its target.
class GenerationError : public Error {
public:
  using Error::Error;
};

// Bad or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace pme
