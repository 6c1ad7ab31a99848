#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qhydro/grid.hpp"

namespace qhydro {

using Complex = std::complex<double>;

// Samples of a scalar quantity, one per grid node, immutable after
// construction. Every value is finite.
template <typename T>
class Field2D {
 public:
  Field2D(Grid grid, std::vector<T> values);

  const Grid& grid() const { return grid_; }
  std::span<const T> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t n0() const { return n0_; }
  std::size_t n1() const { return n1_; }
  std::size_t index(std::size_t i0, std::size_t i1) const { return i1 * n0_ + i0; }
  const T& at(std::size_t i0, std::size_t i1) const { return values_[index(i0, i1)]; }
  const T& operator[](std::size_t k) const { return values_[k]; }

 private:
  Grid grid_;
  std::vector<T> values_;
  std::size_t n0_, n1_;
};

using ScalarField2D = Field2D<Complex>;
using RealField2D = Field2D<double>;

extern template class Field2D<Complex>;
extern template class Field2D<double>;

// Two real components per node: (x, y) on a Cartesian grid, (radial,
// azimuthal) on a polar grid.
class VectorField2D {
 public:
  VectorField2D(Grid grid, std::vector<double> c0, std::vector<double> c1);

  const Grid& grid() const { return grid_; }
  std::span<const double> component0() const { return c0_; }
  std::span<const double> component1() const { return c1_; }
  std::size_t size() const { return c0_.size(); }

 private:
  Grid grid_;
  std::vector<double> c0_, c1_;
};

// Samples generator(node) at every node. Throws InvalidArgument naming the
// node if the generator returns a non-finite value.
ScalarField2D build_field(const Grid& grid, const std::function<Complex(Point)>& generator);
RealField2D build_real_field(const Grid& grid, const std::function<double(Point)>& generator);

RealField2D real_part(const ScalarField2D& f);

// Bilinear interpolation of the complex samples at an arbitrary point
// (periodic in phi on polar grids). Throws InvalidArgument outside the grid.
Complex interpolate(const ScalarField2D& f, Point p);

// sqrt(sum |f|^2 w) with the grid quadrature weights.
double l2_norm(const ScalarField2D& f);
double max_abs(const ScalarField2D& f);

}  // namespace qhydro
