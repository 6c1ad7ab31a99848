#pragma once

#include <optional>
#include <vector>

#include "qhydro/constants.hpp"
#include "qhydro/field.hpp"
#include "qhydro/potential.hpp"

namespace qhydro {

// Phi(phi) = A exp(i nu phi) + B exp(-i nu phi), a solution of
// Phi'' + nu^2 Phi = 0 for any real nu >= 0.
class AngularSolution {
 public:
  AngularSolution(double nu, Complex coeff_plus, Complex coeff_minus = {});

  // exp(i m phi) / sqrt(2 pi) for integer m of either sign.
  static AngularSolution normalized_winding(int m);

  double nu() const { return nu_; }
  Complex coeff_plus() const { return plus_; }
  Complex coeff_minus() const { return minus_; }

  Complex operator()(double phi) const;
  // dS1/dphi = nu hbar when only the + branch is present.
  std::optional<double> phase_action_slope(const PhysicalConstants& c) const;

 private:
  double nu_;
  Complex plus_, minus_;
};

struct PeriodicityCheck {
  bool periodic;
  double max_deviation;
  double witness_phi;  // where max_deviation is attained
};

inline constexpr int kPeriodicitySweep = 4096;
inline constexpr double kPeriodicityTolerance = 1e-12;

// | |Phi(phi + 2pi)| - |Phi(phi)| | <= 1e-12 over a 4096-point sweep.
PeriodicityCheck check_modulus_periodicity(const AngularSolution& sol);
// | Phi(phi + 2pi) - Phi(phi) | <= 1e-12 over the same sweep.
PeriodicityCheck check_full_periodicity(const AngularSolution& sol);

// Real radial eigenfunction of
//   -(hbar^2/2m)(R'' + R'/r) + (hbar^2 nu^2 / 2 m r^2 + U) R = E R
// on a uniform grid from r_min to r_max, normalised to int R^2 r dr = 1 and
// positive near the origin. Dirichlet at r_max.
struct RadialSolution {
  double nu = 0.0;
  int n = 0;
  double energy = 0.0;
  double k = 0.0;  // sqrt(2 m E) / hbar, zero when E <= 0
  std::vector<double> r;
  std::vector<double> values;

  double r_max() const { return r.back(); }
  // Cubic (4-point Lagrange) interpolation; R(r_min) (r / r_min)^nu below
  // the first sample and 0 beyond r_max.
  double operator()(double radius) const;
};

struct RadialOptions {
  double r_min_fraction = 1e-4;
  int steps = 4096;
  int scan_steps = 200;
  std::optional<double> energy_lo;
  std::optional<double> energy_hi;
  double relative_tolerance = 1e-13;
};

// Shooting from r_min with R ~ r^nu, counting interior nodes; the n-th
// eigenvalue is where the node count steps from n to n + 1. The default
// energy window is [min U, min U + 4 E_free(nu, n) + (max U - min U)] with
// E_free the free-particle box eigenvalue. Throws NotBracketed or
// ForbiddenPotential.
RadialSolution solve_radial(const Potential& u, double nu, double r_max, int n,
                            const PhysicalConstants& c = {}, const RadialOptions& opt = {});

struct NearOriginMatch {
  double scale;              // optimal c in R ~ c J_nu(k r)
  double relative_deviation; // max |R - c J| / max |R| over the window
  double r_fit;
  std::size_t samples;
};

// Least-squares fit of c J_nu(k r) to R on (0, fit_fraction * r_max].
// Throws InvalidArgument if the window holds fewer than 8 samples.
NearOriginMatch near_origin_match(const RadialSolution& sol, double fit_fraction = 0.1);

// psi(r, phi) = Phi(phi) R(r) on any grid. Throws InvalidArgument when the
// angular and radial orders differ.
ScalarField2D assemble_separable_state(const AngularSolution& ang, const RadialSolution& rad,
                                       const Grid& grid);

struct RadialResidual {
  std::vector<double> r;
  std::vector<double> residual;
  double l2_relative;  // sqrt(sum res^2 r) / sqrt(sum R^2 r) over interior nodes
};

// Residual of the radial equation above for samples R on a uniform radial
// grid, central differences at interior nodes only. With
// include_first_derivative = false the -(hbar^2/2m) R'/r term is dropped.
RadialResidual radial_equation_residual(std::span<const double> r, std::span<const double> values,
                                        double nu, const Potential& u, double energy,
                                        const PhysicalConstants& c = {},
                                        bool include_first_derivative = true);

}  // namespace qhydro
