#pragma once

#include <cstdint>
#include <vector>

#include "qhydro/constants.hpp"
#include "qhydro/field.hpp"
#include "qhydro/potential.hpp"

namespace qhydro {

inline constexpr double kDefaultNodeThreshold = 1e-6;
// Adjacent-sample phase steps at or above pi - 0.1 are treated as
// unresolved: a nodal line or vortex core passes between the samples.
inline constexpr double kUnresolvedPhaseStep = kPi - 0.1;

// Hydrodynamic variables of psi = a exp(i S / hbar).
//
// node_mask marks nodes where |psi| < threshold * max|psi|, plus nodes whose
// velocity stencil contains an unresolved phase step. On masked nodes S, v
// and Q hold 0 and carry no meaning.
struct MadelungFields {
  RealField2D amplitude;          // a = |psi| >= 0
  RealField2D phase_action;       // S = hbar arg(psi) in (-pi hbar, pi hbar]
  VectorField2D velocity;         // v = grad S / m from neighbour phase differences
  RealField2D quantum_potential;  // Q = -(hbar^2 / 2m) lap(a) / a
  std::vector<std::uint8_t> node_mask;
  double node_threshold = kDefaultNodeThreshold;

  const Grid& grid() const { return amplitude.grid(); }
  bool masked(std::size_t k) const { return node_mask[k] != 0; }
  double masked_fraction() const;
};

// Throws InvalidArgument for an all-zero psi or a non-positive threshold.
MadelungFields decompose(const ScalarField2D& psi, const PhysicalConstants& c = {},
                         double node_threshold = kDefaultNodeThreshold);

// psi = a exp(i S / hbar) off the mask, 0 on it.
ScalarField2D recompose(const MadelungFields& fields, const PhysicalConstants& c = {});

struct StationaryResidualReport {
  // E - (m/2)|v|^2 - U + (hbar^2/2m) lap(a)/a  on unmasked nodes.
  RealField2D energy_balance;
  // div(a^2 v) on unmasked nodes whose divergence stencil is unmasked.
  RealField2D continuity;
  std::vector<std::uint8_t> energy_valid;
  std::vector<std::uint8_t> continuity_valid;

  // Density-weighted RMS sqrt(sum w a^2 e^2 / sum w a^2), energy units.
  double energy_l2 = 0.0;
  double energy_max = 0.0;
  // sqrt(sum w c^2) / sum w a^2 and max|c| / max a^2.
  double continuity_l2 = 0.0;
  double continuity_max = 0.0;

  double masked_fraction = 0.0;
  bool unreliable = false;  // masked_fraction >= 0.2
};

inline constexpr double kUnreliableMaskFraction = 0.2;

StationaryResidualReport stationary_residuals(const MadelungFields& fields, const Potential& u,
                                              double energy, const PhysicalConstants& c = {});

struct RingAverage {
  double radius = 0.0;       // mean distance of the ring's nodes from the centre
  double kinetic = 0.0;      // <(m/2)|v|^2>
  double neg_quantum = 0.0;  // <-Q>
  double sum = 0.0;          // <(m/2)|v|^2 + Q>
  double balance = 0.0;      // <E - U>, what the sum equals for a stationary state
  std::size_t count = 0;
};

struct CancellationReport {
  int winding = 0;
  std::vector<RingAverage> rings;
  double kinetic_slope = 0.0;      // log-log slope of the kinetic profile
  double quantum_slope = 0.0;      // log-log slope of -Q
  double kinetic_coefficient = 0.0;  // mean of r^2 (m/2)|v|^2
  double quantum_coefficient = 0.0;  // mean of r^2 (-Q)
  // |K + Q| / min(K, -Q) on the innermost ring.
  double inner_ratio = 0.0;
};

struct ProbeOptions {
  int inner_ring = 2;   // in units of the grid spacing
  int outer_ring = 20;
};

// Ring-averaged profiles of the kinetic term and -Q around a nodal point of
// a Cartesian field. Throws InvalidArgument when the centre carries no
// phase winding, MaskedSample when a ring is entirely masked.
CancellationReport singularity_cancellation_probe(const MadelungFields& fields, const Potential& u,
                                                  double energy, const PhysicalConstants& c,
                                                  Point center, const ProbeOptions& opt = {});

}  // namespace qhydro
