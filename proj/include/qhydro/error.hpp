#pragma once

#include <stdexcept>
#include <string>

namespace qhydro {

// Base for every error raised by the library. Callers that batch many
// independent computations (the verify CLI) catch this per case.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad grid size, order out of
// range, mismatched quantum numbers, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The potential diverges to -infinity at least as fast as -hbar^2/(8 m r^2);
// the particle falls to the origin and no stationary state exists.
class ForbiddenPotential : public Error {
 public:
  using Error::Error;
};

// solve_radial could not find the requested eigenvalue inside its window.
class NotBracketed : public Error {
 public:
  using Error::Error;
};

// A loop crosses a phase step too large to resolve even after refinement.
class UnderSampledLoop : public Error {
 public:
  using Error::Error;
};

// A sample that must be off the nodal mask is not.
class MaskedSample : public Error {
 public:
  using Error::Error;
};

}  // namespace qhydro
