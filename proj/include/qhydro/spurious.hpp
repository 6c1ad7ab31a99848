#pragma once

#include <cstddef>
#include <vector>

#include "qhydro/constants.hpp"
#include "qhydro/field.hpp"

namespace qhydro {

// exp(i nu phi) J_nu(k r) with phi taken in [0, 2 pi), so any failure of
// 2 pi periodicity shows up as a jump across the phi = 0 ray. Negative nu
// is the complex conjugate of |nu| and is not handled here.
class CandidateState {
 public:
  CandidateState(double nu, double k, const Grid& grid);

  double nu() const { return nu_; }
  double k() const { return k_; }
  const ScalarField2D& field() const { return field_; }

  // Principal-sector value; phi is reduced into [0, 2 pi) first.
  Complex operator()(double r, double phi) const;
  // One-sided limit phi -> 2 pi from below, evaluated exactly.
  Complex upper_limit(double r) const;
  // Radii sampled along the cut: the grid radii (polar) or the nodes on
  // the positive x axis (Cartesian).
  std::vector<double> cut_radii() const;

 private:
  double nu_, k_;
  ScalarField2D field_;
};

CandidateState build_candidate(double nu, double k, const Grid& grid);

// max over the cut radii of |psi(r, 2 pi^-) - psi(r, 0)|.
double branch_jump(const CandidateState& candidate);

struct FitWindow {
  double kr_min = 0.2;
  double kr_max = 6.0;
  std::size_t radial_samples = 32;
  std::size_t angular_samples = 128;
};

struct PlaneWaveExpansion {
  double k = 0.0;
  std::vector<Complex> coefficients;  // A(alpha_i), alpha_i = 2 pi i / N
  double max_relative_error = 0.0;    // max |fit - psi| / max |psi| on the window samples
  double condition_number = 0.0;      // over the singular values kept
  std::size_t rank = 0;               // singular values kept
};

inline constexpr double kSpectralCutoff = 1e-8;

// Least-squares fit of (2 pi / N) sum_i A_i exp(i k r cos(phi - alpha_i))
// to the candidate on the annulus window. N must be a power of two >= 64.
// The design matrix is solved through its singular value decomposition,
// dropping singular values below kSpectralCutoff * sigma_max.
PlaneWaveExpansion plane_wave_fit(const CandidateState& candidate, std::size_t n,
                                  const FitWindow& window = {});

struct SpuriosityTolerances {
  double jump = 1e-8;
  double expansion = 1e-6;
  std::size_t coefficients = 64;
  FitWindow window;
};

enum class Verdict { physical, spurious };

const char* to_string(Verdict v);

struct SpuriosityReport {
  double nu = 0.0;
  double branch_jump = 0.0;
  double best_expansion_error = 0.0;
  double condition_number = 0.0;
  Verdict verdict = Verdict::spurious;
};

SpuriosityReport classify(double nu, double k, const Grid& grid,
                          const SpuriosityTolerances& tol = {});

// Cartesian SE residual of the candidate (U = 0, E = hbar^2 k^2 / 2m),
// relative to max|psi|, over nodes at least core_cells spacings from the
// origin, where non-integer orders are singular. `excluded` skips nodes
// whose stencil straddles the cut; `included` keeps them.
struct CutResidual {
  double excluded = 0.0;
  double included = 0.0;
};

CutResidual cut_residual(double nu, double k, const CartesianGrid& grid,
                         const PhysicalConstants& c = {}, double core_cells = 3.0);

}  // namespace qhydro
