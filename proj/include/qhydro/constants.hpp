#pragma once

#include <numbers>

#include "qhydro/error.hpp"

namespace qhydro {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Natural units by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  // Throws InvalidArgument unless hbar > 0 and mass > 0.
  void validate() const {
    if (!(hbar > 0.0)) throw InvalidArgument("PhysicalConstants: hbar must be > 0");
    if (!(mass > 0.0)) throw InvalidArgument("PhysicalConstants: mass must be > 0");
  }

  // hbar^2 / (2 m), the kinetic prefactor of the Schroedinger operator.
  double kinetic_prefactor() const { return hbar * hbar / (2.0 * mass); }
};

}  // namespace qhydro
