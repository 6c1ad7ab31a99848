#include <cmath>
#include <random>

#include "doctest.h"
#include "qhydro/topology.hpp"

using namespace qhydro;

namespace {

double gauss(Point p) { return std::exp(-(p.x * p.x + p.y * p.y) / 2); }

// Product of (z - z_i) or conj(z - z_i) factors, one per winding unit.
ScalarField2D vortices(const CartesianGrid& g, const std::vector<std::pair<Point, int>>& vs) {
  return build_field(g, [&](Point p) {
    Complex v = gauss(p);
    for (const auto& [c, w] : vs) {
      const Complex z(p.x - c.x, p.y - c.y);
      for (int k = 0; k < std::abs(w); ++k) v *= w > 0 ? z : std::conj(z);
    }
    return v;
  });
}

}  // namespace

TEST_CASE("loop paths") {
  CHECK_THROWS_AS(LoopPath(std::vector<Point>(10)), InvalidArgument);
  const auto c = LoopPath::circle({0, 0}, 1.0);
  CHECK(c.size() == LoopPath::kDefaultSamples);
  CHECK(c.encloses({0.2, -0.3}));
  CHECK_FALSE(c.encloses({1.2, 0}));
  CHECK(c.reversed().encloses({0.2, -0.3}));
  CHECK(c.refined().size() == 2 * c.size());
  const auto s = LoopPath::square({1, 1}, 0.5, 128);
  CHECK(s.size() == 128);
  CHECK(s.encloses({1.4, 0.6}));
  CHECK_FALSE(s.encloses({1.6, 0.6}));
}

TEST_CASE("circulation of analytic fields") {
  const CartesianGrid g(-2, 2, -2, 2, 129, 129);
  const PhysicalConstants c;
  const auto z = build_field(g, [](Point p) { return Complex(p.x, p.y); });
  const auto w = circulation(z, LoopPath::circle({0, 0}, 1.0), c);
  CHECK(w.j == 1);
  CHECK(w.circulation == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(w.defect < 1e-12);

  const auto real = build_field(g, [](Point p) { return Complex(std::exp(-(p.x * p.x + p.y * p.y)), 0); });
  CHECK(circulation(real, LoopPath::circle({0.3, 0.1}, 1.2), c).j == 0);

  const auto z2 = build_field(g, [](Point p) { return Complex(p.x, p.y) * Complex(p.x, p.y); });
  CHECK(circulation(z2, LoopPath::circle({0, 0}, 1.0), c).j == 2);

  const auto pair = build_field(g, [](Point p) { return Complex(p.x - 0.3, p.y) * Complex(p.x + 0.3, p.y) * gauss(p); });
  CHECK(circulation(pair, LoopPath::circle({0, 0}, 1.0), c).j == 2);
  CHECK(circulation(pair, LoopPath::circle({0, 0}, 0.1), c).j == 0);

  const PhysicalConstants c2{0.5, 1.0};
  CHECK(circulation(z, LoopPath::circle({0, 0}, 1.0), c2).circulation == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("circulation invariances") {
  const CartesianGrid g(-3, 3, -3, 3, 160, 160);
  const auto psi = vortices(g, {{{0.2, 0.1}, 2}, {{-0.4, 0.3}, -1}});
  const auto ref = circulation(psi, LoopPath::circle({0, 0}, 1.0));
  CHECK(ref.j == 1);
  for (double r : {1.2, 1.5, 2.0})
    CHECK(std::abs(circulation(psi, LoopPath::circle({0, 0}, r)).circulation - ref.circulation) < 1e-6);
  CHECK(std::abs(circulation(psi, LoopPath::square({0, 0}, 1.1)).circulation - ref.circulation) < 1e-6);
  const auto loop = LoopPath::circle({0.1, 0}, 1.3);
  const auto fwd = circulation(psi, loop), back = circulation(psi, loop.reversed());
  CHECK(back.j == -fwd.j);
  CHECK(std::abs(back.circulation + fwd.circulation) < 1e-12);
}

TEST_CASE("circulation errors") {
  const CartesianGrid g(-2, 2, -2, 2, 64, 64);
  const auto z = build_field(g, [](Point p) { return Complex(p.x - 1.0, p.y); });
  CHECK_THROWS_AS(circulation(z, LoopPath::circle({0, 0}, 1.0)), MaskedSample);
  // A real field changes sign across x = 0 along the loop: the phase jumps by
  // pi no matter how finely the loop is sampled.
  const auto real = build_field(g, [](Point p) { return Complex(p.x + 1e-3, 0.0); });
  CHECK_THROWS_WITH_AS(circulation(real, LoopPath::circle({0, 0}, 1.0)), doctest::Contains("under-sampled"),
                       UnderSampledLoop);
}

TEST_CASE("refinement resolves fast phase winding") {
  const CartesianGrid g(-2, 2, -2, 2, 400, 400);
  const auto psi = build_field(g, [](Point p) { return std::polar(gauss(p), 31.0 * std::atan2(p.y, p.x)); });
  // 31 turns over 64 samples puts every step just above pi - 0.1.
  const auto w = circulation(psi, LoopPath::circle({0, 0}, 1.0, 64));
  CHECK(w.j == 31);
  CHECK(w.samples > 64);
}

TEST_CASE("nodal scan") {
  const CartesianGrid g(-1.05, 1.05, -1.05, 1.05, 43, 43);
  const auto one = nodal_scan(build_field(g, [](Point p) { return Complex(p.x, p.y); }));
  REQUIRE(one.size() == 1);
  CHECK(one[0].winding == 1);
  CHECK(std::hypot(one[0].location.x, one[0].location.y) < 1e-12);

  auto two = nodal_scan(build_field(g, [](Point p) { return Complex(p.x - 0.5, p.y) * Complex(p.x + 0.5, p.y); }));
  REQUIRE(two.size() == 2);
  if (two[0].location.x > two[1].location.x) std::swap(two[0], two[1]);
  CHECK(two[0].winding == 1);
  CHECK(two[1].winding == 1);
  CHECK(two[0].location.x == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(two[1].location.x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(two[0].location.y) < 1e-9);

  CHECK(nodal_scan(build_field(g, [](Point p) { return Complex(std::sin(3 * p.x), 0); })).empty());

  const auto anti = nodal_scan(build_field(g, [](Point p) { return Complex(p.x, -p.y); }));
  REQUIRE(anti.size() == 1);
  CHECK(anti[0].winding == -1);

  // Vortex exactly on a node is attributed to a single cell.
  const CartesianGrid on(-1, 1, -1, 1, 41, 41);
  const auto node = nodal_scan(build_field(on, [](Point p) { return Complex(p.x, p.y); }));
  REQUIRE(node.size() == 1);
  CHECK(node[0].winding == 1);

  const auto polar = build_field(PolarGrid::half_cell(1.0, 16, 16), [](Point) { return Complex(1, 0); });
  CHECK_THROWS_AS(nodal_scan(polar), InvalidArgument);
}

TEST_CASE("nodal scan locates off-grid vortices inside their cells") {
  const CartesianGrid g(-2, 2, -2, 2, 101, 101);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 20; ++t) {
    const Point c{u(rng), u(rng)};
    const auto pts = nodal_scan(vortices(g, {{c, 1}}));
    REQUIRE(pts.size() == 1);
    const auto& p = pts[0];
    CHECK(p.location.x >= g.x(p.cell_i));
    CHECK(p.location.x <= g.x(p.cell_i + 1));
    CHECK(p.location.y >= g.y(p.cell_j));
    CHECK(p.location.y <= g.y(p.cell_j + 1));
    CHECK(std::hypot(p.location.x - c.x, p.location.y - c.y) < 0.01);
  }
}

TEST_CASE("sum rule") {
  const CartesianGrid g(-2, 2, -2, 2, 200, 200);
  const auto loop = LoopPath::circle({0, 0}, 1.0);
  const auto both = sum_rule_check(vortices(g, {{{0.3, 0.1}, 1}, {{-0.4, -0.2}, 1}}), loop);
  CHECK(both.equal);
  CHECK(both.measured.j == 2);
  CHECK(both.enclosed.size() == 2);

  const auto pair = sum_rule_check(vortices(g, {{{0.3, 0.1}, 1}, {{-0.4, -0.2}, -1}}), loop);
  CHECK(pair.equal);
  CHECK(pair.measured.j == 0);
  CHECK(pair.enclosed_sum == 0);

  const auto empty = sum_rule_check(vortices(g, {{{1.5, 1.5}, 1}}), loop);
  CHECK(empty.equal);
  CHECK(empty.measured.j == 0);
  CHECK(empty.enclosed.empty());
}
