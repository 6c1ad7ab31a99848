#include "qhydro/operators.hpp"

#include <algorithm>
#include <cmath>

#include "stencil.hpp"

namespace qhydro {

using detail::d1_line;
using detail::d2_line;

VectorField2D gradient(const RealField2D& field) {
  const std::size_t n0 = field.n0(), n1 = field.n1();
  std::vector<double> g0(field.size()), g1(field.size());
  const auto* cart = std::get_if<CartesianGrid>(&field.grid());
  const double h0 = cart ? cart->dx() : std::get<PolarGrid>(field.grid()).dr();
  const double h1 = cart ? cart->dy() : std::get<PolarGrid>(field.grid()).dphi();
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    auto along0 = [&](std::size_t k) { return field.at(k, i1); };
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      auto along1 = [&](std::size_t k) { return field.at(i0, k); };
      const std::size_t idx = field.index(i0, i1);
      g0[idx] = d1_line<double>(along0, i0, n0, h0, false);
      g1[idx] = d1_line<double>(along1, i1, n1, h1, cart == nullptr);
      if (!cart) g1[idx] /= std::get<PolarGrid>(field.grid()).r(i0);
    }
  }
  return VectorField2D(field.grid(), std::move(g0), std::move(g1));
}

namespace {

template <typename T>
Field2D<T> laplacian_impl(const Field2D<T>& field) {
  const std::size_t n0 = field.n0(), n1 = field.n1();
  std::vector<T> out(field.size());
  if (const auto* g = std::get_if<CartesianGrid>(&field.grid())) {
    for (std::size_t j = 0; j < n1; ++j) {
      auto along_x = [&](std::size_t k) { return field.at(k, j); };
      for (std::size_t i = 0; i < n0; ++i) {
        auto along_y = [&](std::size_t k) { return field.at(i, k); };
        out[field.index(i, j)] = d2_line<T>(along_x, i, n0, g->dx(), false) +
                                 d2_line<T>(along_y, j, n1, g->dy(), false);
      }
    }
  } else {
    const auto& pg = std::get<PolarGrid>(field.grid());
    for (std::size_t j = 0; j < n1; ++j) {
      auto along_r = [&](std::size_t k) { return field.at(k, j); };
      for (std::size_t i = 0; i < n0; ++i) {
        auto along_phi = [&](std::size_t k) { return field.at(i, k); };
        const double r = pg.r(i);
        out[field.index(i, j)] = d2_line<T>(along_r, i, n0, pg.dr(), false) +
                                 d1_line<T>(along_r, i, n0, pg.dr(), false) / r +
                                 d2_line<T>(along_phi, j, n1, pg.dphi(), true) / (r * r);
      }
    }
  }
  return Field2D<T>(field.grid(), std::move(out));
}

}  // namespace

ScalarField2D laplacian(const ScalarField2D& field) { return laplacian_impl(field); }
RealField2D laplacian(const RealField2D& field) { return laplacian_impl(field); }

ResidualReport se_residual(const ScalarField2D& psi, const Potential& u, double energy,
                           const PhysicalConstants& c) {
  c.validate();
  validate_potential(u, c);
  const ScalarField2D lap = laplacian(psi);
  const double kin = c.kinetic_prefactor();
  std::vector<Complex> res(psi.size());
  for (std::size_t i1 = 0; i1 < psi.n1(); ++i1) {
    for (std::size_t i0 = 0; i0 < psi.n0(); ++i0) {
      const std::size_t k = psi.index(i0, i1);
      const double uu = u(node_point(psi.grid(), i0, i1));
      res[k] = -kin * lap[k] + (uu - energy) * psi[k];
    }
  }
  ScalarField2D residual(psi.grid(), std::move(res));
  const double l2 = l2_norm(residual) / l2_norm(psi);
  const double mx = max_abs(residual) / max_abs(psi);
  return {std::move(residual), l2, mx};
}

}  // namespace qhydro
