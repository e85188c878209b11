#pragma once

#include <stdexcept>
#include <string>

namespace qpend {

// Invalid mathematical input (pole evaluation, malformed half-integer,
// basis that cannot represent the requested quantum numbers, ...).
struct domain_error : std::domain_error {
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A documented precondition of an operation was violated by the caller.
struct precondition_error : std::invalid_argument {
  explicit precondition_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Numerical machinery failed (eigensolver did not converge, quadrature
// did not reach its tolerance, ...).
struct computational_error : std::runtime_error {
  explicit computational_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Overlap/base conditioning problems in the generalized eigensolver.
struct conditioning_error : computational_error {
  explicit conditioning_error(const std::string& what)
      : computational_error(what) {}
};

}  // namespace qpend
