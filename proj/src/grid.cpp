#include "qhydro/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhydro/constants.hpp"
#include "qhydro/error.hpp"

namespace qhydro {

CartesianGrid::CartesianGrid(double x_min, double x_max, double y_min, double y_max,
                             std::size_t nx, std::size_t ny)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny) {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw InvalidArgument("CartesianGrid: extents must satisfy max > min");
  }
  if (nx < 16 || ny < 16) {
    std::ostringstream os;
    os << "CartesianGrid: need at least 16 nodes per axis, got " << nx << "x" << ny;
    throw InvalidArgument(os.str());
  }
  dx_ = (x_max - x_min) / static_cast<double>(nx - 1);
  dy_ = (y_max - y_min) / static_cast<double>(ny - 1);
}

PolarGrid::PolarGrid(double r_min, double r_max, std::size_t nr, std::size_t nphi)
    : r_min_(r_min), r_max_(r_max), nr_(nr), nphi_(nphi) {
  if (!(r_min > 0.0)) throw InvalidArgument("PolarGrid: r_min must be > 0 (origin excluded)");
  if (!(r_max > r_min)) throw InvalidArgument("PolarGrid: r_max must exceed r_min");
  if (nr < 4) throw InvalidArgument("PolarGrid: need at least 4 radial nodes");
  if (nphi < 4 || nphi % 2 != 0) throw InvalidArgument("PolarGrid: nphi must be even and >= 4");
  dr_ = (r_max - r_min) / static_cast<double>(nr - 1);
  dphi_ = kTwoPi / static_cast<double>(nphi);
}

PolarGrid PolarGrid::half_cell(double r_max, std::size_t nr, std::size_t nphi) {
  if (nr < 4) throw InvalidArgument("PolarGrid: need at least 4 radial nodes");
  const double dr = r_max / (static_cast<double>(nr) - 0.5);
  return PolarGrid(0.5 * dr, r_max, nr, nphi);
}

Point PolarGrid::node(std::size_t i, std::size_t j) const {
  const double rr = r(i);
  const double p = phi(j);
  return {rr * std::cos(p), rr * std::sin(p)};
}

std::size_t axis0_size(const Grid& g) {
  return std::visit([](const auto& gr) {
    if constexpr (std::is_same_v<std::decay_t<decltype(gr)>, CartesianGrid>) return gr.nx();
    else return gr.nr();
  }, g);
}

std::size_t axis1_size(const Grid& g) {
  return std::visit([](const auto& gr) {
    if constexpr (std::is_same_v<std::decay_t<decltype(gr)>, CartesianGrid>) return gr.ny();
    else return gr.nphi();
  }, g);
}

std::size_t node_count(const Grid& g) { return axis0_size(g) * axis1_size(g); }

Point node_point(const Grid& g, std::size_t i0, std::size_t i1) {
  return std::visit([&](const auto& gr) { return gr.node(i0, i1); }, g);
}

double node_weight(const Grid& g, std::size_t i0, std::size_t) {
  if (const auto* c = std::get_if<CartesianGrid>(&g)) return c->dx() * c->dy();
  const auto& p = std::get<PolarGrid>(g);
  return p.r(i0) * p.dr() * p.dphi();
}

double spacing(const Grid& g) {
  if (const auto* c = std::get_if<CartesianGrid>(&g)) return std::max(c->dx(), c->dy());
  return std::get<PolarGrid>(g).dr();
}

}  // namespace qhydro
