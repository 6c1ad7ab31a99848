#pragma once

#include "qhydro/constants.hpp"
#include "qhydro/field.hpp"
#include "qhydro/potential.hpp"

namespace qhydro {

// Second-order central differences in the interior, second-order one-sided
// stencils at non-periodic edges, periodic wrap in phi. Polar grids return
// (d/dr, (1/r) d/dphi).
VectorField2D gradient(const RealField2D& field);

// 5-point Laplacian (Cartesian) or (1/r) d_r (r d_r) + (1/r^2) d_phi^2
// (polar), both O(h^2).
ScalarField2D laplacian(const ScalarField2D& field);
RealField2D laplacian(const RealField2D& field);

struct ResidualReport {
  ScalarField2D residual;
  double l2_relative;   // ||res||_2 / ||psi||_2, quadrature-weighted
  double max_relative;  // max|res| / max|psi|
};

// -(hbar^2/2m) lap psi + U psi - E psi. Rejects forbidden potentials.
ResidualReport se_residual(const ScalarField2D& psi, const Potential& u, double energy,
                           const PhysicalConstants& c = {});

}  // namespace qhydro
