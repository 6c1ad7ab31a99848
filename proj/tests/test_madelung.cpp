#include <cmath>

#include "doctest.h"
#include "qhydro/madelung.hpp"
#include "qhydro/separable.hpp"
#include "support/oracles.hpp"

using namespace qhydro;

namespace {

double gauss(Point p) { return std::exp(-(p.x * p.x + p.y * p.y) / 2); }

}  // namespace

TEST_CASE("decompose simple fields") {
  const CartesianGrid g(-1, 1, -1, 1, 24, 24);
  const auto two = decompose(build_field(g, [](Point) { return Complex(2, 0); }));
  for (std::size_t k = 0; k < two.amplitude.size(); ++k) {
    CHECK(two.amplitude[k] == 2.0);
    CHECK(two.phase_action[k] == 0.0);
    CHECK(two.velocity.component0()[k] == 0.0);
    CHECK(two.quantum_potential[k] == 0.0);
  }

  const double k = 3.0;
  const PhysicalConstants c{1.5, 0.5};
  const auto pw = decompose(build_field(g, [k](Point p) { return std::polar(1.0, k * p.x); }), c);
  for (std::size_t i = 0; i < pw.amplitude.size(); ++i) {
    CHECK(pw.velocity.component0()[i] == doctest::Approx(c.hbar * k / c.mass).epsilon(1e-12));
    CHECK(std::abs(pw.velocity.component1()[i]) < 1e-12);
  }
  CHECK(pw.masked_fraction() == 0.0);

  const auto pg = PolarGrid::half_cell(2.0, 20, 32);
  const auto vortex = decompose(build_field(pg, [](Point p) { return std::polar(1.0, std::atan2(p.y, p.x)); }));
  for (std::size_t j = 0; j < pg.nphi(); ++j)
    for (std::size_t i = 0; i < pg.nr(); ++i) {
      const std::size_t id = j * pg.nr() + i;
      CHECK(vortex.velocity.component1()[id] == doctest::Approx(1.0 / pg.r(i)).epsilon(1e-12));
      CHECK(std::abs(vortex.velocity.component0()[id]) < 1e-12);
    }

  CHECK_THROWS_AS(decompose(build_field(g, [](Point) { return Complex(0, 0); })), InvalidArgument);
  CHECK_THROWS_AS(decompose(build_field(g, [](Point) { return Complex(1, 0); }), {}, 0.0), InvalidArgument);
}

TEST_CASE("quantum potential of a Gaussian converges to the symbolic form") {
  double err[3];
  for (int lv = 0; lv < 3; ++lv) {
    const std::size_t n = 32u << lv;
    const CartesianGrid g(-3, 3, -3, 3, n + 1, n + 1);
    const auto f = decompose(build_field(g, [](Point p) { return Complex(gauss(p), 0); }));
    double e = 0.0;
    for (std::size_t j = 1; j + 1 < g.ny(); ++j)
      for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
        const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
        if (r2 > 4.0) continue;
        e = std::max(e, std::abs(f.quantum_potential.at(i, j) + 0.5 * (r2 - 2.0)));
      }
    err[lv] = e;
  }
  CHECK(oracle::order(err[0], err[1]) > 1.9);
  CHECK(oracle::order(err[1], err[2]) > 1.9);
}

TEST_CASE("recompose round trips") {
  const CartesianGrid g(-2, 2, -2, 2, 64, 64);
  const auto pw = build_field(g, [](Point p) { return std::polar(1.0, 2.0 * p.x + 0.3); });
  const auto back = recompose(decompose(pw));
  for (std::size_t k = 0; k < pw.size(); ++k) CHECK(std::abs(back[k] - pw[k]) < 1e-12);

  const auto pair = build_field(g, [](Point p) {
    return Complex(p.x - 0.51, p.y - 0.03) * Complex(p.x + 0.49, p.y + 0.02) * gauss(p);
  });
  const auto f = decompose(pair);
  const auto rt = recompose(f);
  for (std::size_t k = 0; k < pair.size(); ++k) {
    if (f.masked(k)) {
      CHECK(rt[k] == Complex{});
      continue;
    }
    CHECK(std::abs(rt[k] - pair[k]) < 1e-10);
  }

  const auto ones = build_field(g, [](Point) { return Complex(1, 0); });
  for (auto v : recompose(decompose(ones)).values()) CHECK(v == Complex(1, 0));
}

TEST_CASE("mass conservation and gauge invariance") {
  const CartesianGrid g(-3, 3, -3, 3, 64, 64);
  auto psi_fn = [](Point p) { return Complex(p.x + 0.2, p.y) * Complex(1.0, 0.5 * p.y) * gauss(p); };
  const auto psi = build_field(g, psi_fn);
  const auto rotated = build_field(g, [&](Point p) { return std::polar(1.0, 1.1) * psi_fn(p); });
  const auto a = decompose(psi), b = decompose(rotated);
  double m_psi = 0.0, m_a = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    m_psi += std::norm(psi[k]);
    m_a += a.amplitude[k] * a.amplitude[k];
  }
  CHECK(std::abs(m_a - m_psi) / m_psi < 1e-12);
  const auto ra = stationary_residuals(a, Potential::free(), 1.0);
  const auto rb = stationary_residuals(b, Potential::free(), 1.0);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    CHECK(a.node_mask[k] == b.node_mask[k]);
    CHECK(std::abs(a.amplitude[k] - b.amplitude[k]) < 1e-12);
    CHECK(std::abs(a.velocity.component0()[k] - b.velocity.component0()[k]) < 1e-12);
    CHECK(std::abs(a.velocity.component1()[k] - b.velocity.component1()[k]) < 1e-12);
    CHECK(std::abs(a.quantum_potential[k] - b.quantum_potential[k]) < 1e-12);
    CHECK(std::abs(ra.energy_balance[k] - rb.energy_balance[k]) < 1e-12);
    CHECK(std::abs(ra.continuity[k] - rb.continuity[k]) < 1e-12);
  }
}

TEST_CASE("velocity matches the gradient of an unwrapped phase") {
  // On x > 0 the phase atan2(y, x) is smooth; compare against its analytic gradient.
  double err[2];
  for (int lv = 0; lv < 2; ++lv) {
    const std::size_t n = 64u << lv;
    const CartesianGrid g(0.5, 2.5, -1, 1, n + 1, n + 1);
    const auto f = decompose(build_field(g, [](Point p) { return Complex(p.x, p.y) * gauss(p); }));
    double e = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const double x = g.x(i), y = g.y(j), r2 = x * x + y * y;
        e = std::max(e, std::abs(f.velocity.component0()[j * g.nx() + i] + y / r2) + std::abs(f.velocity.component1()[j * g.nx() + i] - x / r2));
      }
    err[lv] = e;
  }
  CHECK(oracle::order(err[0], err[1]) > 1.9);
}

TEST_CASE("stationary residuals") {
  SUBCASE("plane wave energy balance is exact") {
    const CartesianGrid g(0, 1, 0, 1, 32, 32);
    const double k = 2.0;
    const auto f = decompose(build_field(g, [k](Point p) { return std::polar(1.0, k * p.x); }));
    const auto r = stationary_residuals(f, Potential::free(), 2.5);
    for (std::size_t i = 0; i < r.energy_balance.size(); ++i)
      CHECK(r.energy_balance[i] == doctest::Approx(2.5 - k * k / 2).epsilon(1e-12));
    const auto exact = stationary_residuals(f, Potential::free(), k * k / 2);
    CHECK(exact.energy_max < 1e-12);
    CHECK(exact.continuity_max < 1e-12);
  }
  SUBCASE("harmonic ground state converges at second order") {
    double e[3];
    for (int lv = 0; lv < 3; ++lv) {
      const std::size_t n = 32u << lv;
      const CartesianGrid g(-4, 4, -4, 4, n + 1, n + 1);
      const auto f = decompose(build_field(g, [](Point p) { return Complex(gauss(p), 0); }));
      const auto r = stationary_residuals(f, Potential::harmonic(1.0), 1.0);
      CHECK(r.continuity_max == 0.0);
      CHECK_FALSE(r.unreliable);
      e[lv] = r.energy_l2;
    }
    CHECK(oracle::order(e[0], e[1]) > 1.9);
    CHECK(oracle::order(e[1], e[2]) > 1.9);
  }
  SUBCASE("masked fields are flagged") {
    const CartesianGrid g(-1, 1, -1, 1, 32, 32);
    const auto f = decompose(build_field(g, [](Point p) { return Complex(std::sin(20 * p.x), 0); }), {}, 0.3);
    CHECK(stationary_residuals(f, Potential::free(), 200.0).unreliable);
  }
}

TEST_CASE("singularity cancellation at a vortex") {
  const CartesianGrid g(-1.28, 1.28, -1.28, 1.28, 256, 256);
  const auto f1 = decompose(build_field(g, [](Point p) { return Complex(p.x, p.y) * gauss(p); }));
  const auto rep = singularity_cancellation_probe(f1, Potential::harmonic(1.0), 2.0, {}, {0, 0});
  CHECK(rep.winding == 1);
  CHECK(rep.rings.size() == 19);
  CHECK(std::abs(rep.kinetic_slope + 2) < 0.1);
  CHECK(std::abs(rep.quantum_slope + 2) < 0.1);
  CHECK(rep.inner_ratio < 0.05);

  const auto f2 = decompose(build_field(g, [](Point p) { return Complex(p.x, p.y) * Complex(p.x, p.y) * gauss(p); }));
  const auto rep2 = singularity_cancellation_probe(f2, Potential::harmonic(1.0), 3.0, {}, {0, 0});
  CHECK(rep2.winding == 2);
  CHECK(rep2.kinetic_coefficient / rep.kinetic_coefficient == doctest::Approx(4.0).epsilon(0.05));

  const auto flat = decompose(build_field(g, [](Point p) { return std::polar(1.0, 2.0 * p.x); }));
  CHECK_THROWS_AS(singularity_cancellation_probe(flat, Potential::free(), 2.0, {}, {0, 0}), InvalidArgument);
}
