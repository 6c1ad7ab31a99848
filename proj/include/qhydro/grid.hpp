#pragma once

#include <cstddef>
#include <variant>

namespace qhydro {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Uniform tensor grid with both end points included on each axis.
// Axis 0 is x, axis 1 is y; node (i, j) has flat index j * nx + i.
class CartesianGrid {
 public:
  CartesianGrid(double x_min, double x_max, double y_min, double y_max,
                std::size_t nx, std::size_t ny);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }

  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  double y(std::size_t j) const { return y_min_ + static_cast<double>(j) * dy_; }
  Point node(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }

  bool contains(Point p) const {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }

  friend bool operator==(const CartesianGrid&, const CartesianGrid&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  std::size_t nx_, ny_;
  double dx_, dy_;
};

// Polar grid on an annulus. The origin is never a node (r_min > 0); phi is
// periodic with nphi samples in [0, 2pi), endpoint excluded.
// Axis 0 is r, axis 1 is phi; node (i, j) has flat index j * nr + i.
class PolarGrid {
 public:
  PolarGrid(double r_min, double r_max, std::size_t nr, std::size_t nphi);

  // r_min is half a radial cell, so the nodes sit at cell centres of a
  // uniform partition of [0, r_max] shifted to end exactly on r_max.
  static PolarGrid half_cell(double r_max, std::size_t nr, std::size_t nphi);

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  std::size_t nr() const { return nr_; }
  std::size_t nphi() const { return nphi_; }
  double dr() const { return dr_; }
  double dphi() const { return dphi_; }

  double r(std::size_t i) const { return r_min_ + static_cast<double>(i) * dr_; }
  double phi(std::size_t j) const { return static_cast<double>(j) * dphi_; }
  Point node(std::size_t i, std::size_t j) const;

  friend bool operator==(const PolarGrid&, const PolarGrid&) = default;

 private:
  double r_min_, r_max_;
  std::size_t nr_, nphi_;
  double dr_, dphi_;
};

using Grid = std::variant<CartesianGrid, PolarGrid>;

// Axis-generic helpers used by the field and operator code.
std::size_t axis0_size(const Grid& g);
std::size_t axis1_size(const Grid& g);
std::size_t node_count(const Grid& g);
Point node_point(const Grid& g, std::size_t i0, std::size_t i1);
// Quadrature weight of a node: dx*dy (Cartesian) or r*dr*dphi (polar).
double node_weight(const Grid& g, std::size_t i0, std::size_t i1);
// Representative spacing: max(dx, dy) or dr.
double spacing(const Grid& g);

}  // namespace qhydro
