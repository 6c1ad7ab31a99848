#include "qhydro/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhydro/constants.hpp"
#include "qhydro/error.hpp"

namespace qhydro {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

template <typename T>
Field2D<T>::Field2D(Grid grid, std::vector<T> values)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      n0_(axis0_size(grid_)),
      n1_(axis1_size(grid_)) {
  if (values_.size() != n0_ * n1_) {
    std::ostringstream os;
    os << "Field2D: " << values_.size() << " values for " << n0_ * n1_ << " grid nodes";
    throw InvalidArgument(os.str());
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!finite(values_[k])) {
      std::ostringstream os;
      os << "Field2D: non-finite value at node (" << k % n0_ << ", " << k / n0_ << ")";
      throw InvalidArgument(os.str());
    }
  }
}

template class Field2D<Complex>;
template class Field2D<double>;

VectorField2D::VectorField2D(Grid grid, std::vector<double> c0, std::vector<double> c1)
    : grid_(std::move(grid)), c0_(std::move(c0)), c1_(std::move(c1)) {
  const std::size_t n = node_count(grid_);
  if (c0_.size() != n || c1_.size() != n) {
    throw InvalidArgument("VectorField2D: component size does not match grid");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(c0_[k]) || !std::isfinite(c1_[k])) {
      throw InvalidArgument("VectorField2D: non-finite component");
    }
  }
}

namespace {

template <typename T, typename Gen>
Field2D<T> sample(const Grid& grid, const Gen& generator) {
  const std::size_t n0 = axis0_size(grid), n1 = axis1_size(grid);
  std::vector<T> values(n0 * n1);
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      const Point p = node_point(grid, i0, i1);
      const T v = generator(p);
      if (!finite(v)) {
        std::ostringstream os;
        os << "build_field: non-finite value at node (" << i0 << ", " << i1 << ") = ("
           << p.x << ", " << p.y << ")";
        throw InvalidArgument(os.str());
      }
      values[i1 * n0 + i0] = v;
    }
  }
  return Field2D<T>(grid, std::move(values));
}

}  // namespace

ScalarField2D build_field(const Grid& grid, const std::function<Complex(Point)>& generator) {
  return sample<Complex>(grid, generator);
}

RealField2D build_real_field(const Grid& grid, const std::function<double(Point)>& generator) {
  return sample<double>(grid, generator);
}

RealField2D real_part(const ScalarField2D& f) {
  std::vector<double> v(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) v[k] = f[k].real();
  return RealField2D(f.grid(), std::move(v));
}

Complex interpolate(const ScalarField2D& f, Point p) {
  if (const auto* g = std::get_if<CartesianGrid>(&f.grid())) {
    if (!g->contains(p)) {
      std::ostringstream os;
      os << "interpolate: point (" << p.x << ", " << p.y << ") outside the grid";
      throw InvalidArgument(os.str());
    }
    const double u = (p.x - g->x_min()) / g->dx();
    const double v = (p.y - g->y_min()) / g->dy();
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), g->nx() - 2);
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(v), g->ny() - 2);
    const double s = u - static_cast<double>(i);
    const double t = v - static_cast<double>(j);
    return (1 - s) * (1 - t) * f.at(i, j) + s * (1 - t) * f.at(i + 1, j) +
           (1 - s) * t * f.at(i, j + 1) + s * t * f.at(i + 1, j + 1);
  }
  const auto& g = std::get<PolarGrid>(f.grid());
  const double r = std::hypot(p.x, p.y);
  if (r < g.r_min() || r > g.r_max()) {
    std::ostringstream os;
    os << "interpolate: radius " << r << " outside [" << g.r_min() << ", " << g.r_max() << "]";
    throw InvalidArgument(os.str());
  }
  double phi = std::atan2(p.y, p.x);
  if (phi < 0) phi += kTwoPi;
  const double u = (r - g.r_min()) / g.dr();
  const double v = phi / g.dphi();
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), g.nr() - 2);
  const auto j = static_cast<std::size_t>(v) % g.nphi();
  const std::size_t j1 = (j + 1) % g.nphi();
  const double s = u - static_cast<double>(i);
  const double t = v - std::floor(v);
  return (1 - s) * (1 - t) * f.at(i, j) + s * (1 - t) * f.at(i + 1, j) +
         (1 - s) * t * f.at(i, j1) + s * t * f.at(i + 1, j1);
}

double l2_norm(const ScalarField2D& f) {
  double acc = 0.0;
  for (std::size_t i1 = 0; i1 < f.n1(); ++i1)
    for (std::size_t i0 = 0; i0 < f.n0(); ++i0)
      acc += std::norm(f.at(i0, i1)) * node_weight(f.grid(), i0, i1);
  return std::sqrt(acc);
}

double max_abs(const ScalarField2D& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace qhydro
