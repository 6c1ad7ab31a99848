#pragma once

#include <cstddef>
#include <vector>

#include "qhydro/constants.hpp"
#include "qhydro/field.hpp"

namespace qhydro {

// Closed polygonal loop. The closing segment from the last point back to
// the first is implicit; the first point is not repeated.
class LoopPath {
 public:
  static constexpr std::size_t kMinSamples = 64;
  static constexpr std::size_t kDefaultSamples = 720;

  explicit LoopPath(std::vector<Point> points);

  // Counter-clockwise circle.
  static LoopPath circle(Point center, double radius, std::size_t samples = kDefaultSamples);
  // Counter-clockwise axis-aligned square, samples spread evenly over the sides.
  static LoopPath square(Point center, double half_side, std::size_t samples = kDefaultSamples);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  LoopPath reversed() const;
  // Inserts the midpoint of every segment.
  LoopPath refined() const;
  // Winding-number point-in-polygon test.
  bool encloses(Point p) const;

 private:
  std::vector<Point> points_;
};

struct WindingResult {
  double circulation = 0.0;  // hbar * sum of principal phase increments
  long j = 0;                // nearest integer to circulation / (2 pi hbar)
  double defect = 0.0;       // |circulation / (2 pi hbar) - j|
  std::size_t samples = 0;   // loop samples after refinement
};

inline constexpr std::size_t kMaxLoopSamples = std::size_t{1} << 16;

// Circulation of grad S along the loop from bilinearly interpolated psi.
// The loop is refined (2x per round, up to 2^16 samples) while any phase
// increment reaches pi - 0.1. Throws MaskedSample for samples with
// |psi| < node_threshold * max|psi| and UnderSampledLoop if refinement
// cannot resolve the phase.
WindingResult circulation(const ScalarField2D& psi, const LoopPath& loop,
                          const PhysicalConstants& c = {}, double node_threshold = 1e-6);

struct NodalPoint {
  Point location;
  int winding = 0;
  std::size_t cell_i = 0, cell_j = 0;
};

// Vortices of a field on a Cartesian grid, in row-major cell order. A cell
// is reported when its four-corner phase sum is a nonzero multiple of 2 pi;
// the location is the bilinear interpolant's zero inside the cell. Cells
// whose winding hinges on a phase step of exactly pi are reported only when
// the bilinear zero is transversal. Exactly-zero corners count as phase 1 rad.
std::vector<NodalPoint> nodal_scan(const ScalarField2D& psi);

struct SumRuleReport {
  WindingResult measured;
  long enclosed_sum = 0;
  std::vector<NodalPoint> enclosed;
  bool equal = false;
};

SumRuleReport sum_rule_check(const ScalarField2D& psi, const LoopPath& loop,
                             const PhysicalConstants& c = {}, double node_threshold = 1e-6);

}  // namespace qhydro
