#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhydro/constants.hpp"
#include "qhydro/grid.hpp"

namespace qhydro {

enum class SingularityClass { regular, mild, forbidden };

std::string to_string(SingularityClass c);

// External potential U. Either radially symmetric (then both the radial and
// the planar form are available) or a general planar function.
class Potential {
 public:
  static Potential free();
  // U = m omega^2 r^2 / 2.
  static Potential harmonic(double omega, double mass = 1.0);
  // U = sum_k coeffs[k] r^k.
  static Potential radial_polynomial(std::vector<double> coeffs);
  // U = strength / r^2. Declared mild; forbidden-ness depends on the
  // constants and is decided by validate_potential.
  static Potential inverse_square(double strength);
  static Potential radial(std::function<double(double)> u, SingularityClass cls,
                          std::string name = "custom-radial");
  static Potential planar(std::function<double(double, double)> u, SingularityClass cls,
                          std::string name = "custom");

  double operator()(Point p) const;
  double operator()(double x, double y) const { return (*this)(Point{x, y}); }

  bool is_radial() const { return radial_.has_value(); }
  // Throws InvalidArgument for planar potentials.
  double at_radius(double r) const;

  SingularityClass declared_class() const { return class_; }
  const std::string& name() const { return name_; }

 private:
  Potential(std::optional<std::function<double(double)>> radial,
            std::function<double(double, double)> planar, SingularityClass cls,
            std::string name);

  std::optional<std::function<double(double)>> radial_;
  std::function<double(double, double)> planar_;
  SingularityClass class_;
  std::string name_;
};

// Probes r^2 U(r) on r = 10^-2 ... 10^-8 (radial potentials only) and
// classifies: forbidden if it reaches -hbar^2/(8m) or below, mild if U is
// unbounded but slower, regular otherwise. Planar potentials keep their
// declared class.
SingularityClass probe_singularity(const Potential& u, const PhysicalConstants& c);

// Throws ForbiddenPotential if the declared or probed class is forbidden,
// i.e. the potential makes the particle fall to the origin.
void validate_potential(const Potential& u, const PhysicalConstants& c);

}  // namespace qhydro
