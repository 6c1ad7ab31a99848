#include "qhydro/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qhydro/error.hpp"
#include "qhydro/operators.hpp"
#include "qhydro/topology.hpp"
#include "stencil.hpp"

namespace qhydro {

double MadelungFields::masked_fraction() const {
  const auto n = static_cast<double>(std::count(node_mask.begin(), node_mask.end(), 1));
  return n / static_cast<double>(node_mask.size());
}

namespace {

double wrapped_step(Complex from, Complex to) { return std::arg(to * std::conj(from)); }

struct AxisInfo {
  double h0, h1;
  bool polar;
};

AxisInfo axis_info(const Grid& g) {
  if (const auto* c = std::get_if<CartesianGrid>(&g)) return {c->dx(), c->dy(), false};
  const auto& p = std::get<PolarGrid>(g);
  return {p.dr(), p.dphi(), true};
}

// Phase derivative along a line from the principal increments between
// neighbours; second order, one-sided at non-periodic ends. `ok` is
// cleared when a needed increment is unresolved.
template <typename Inc>
double phase_derivative(const Inc& inc, std::size_t i, std::size_t n, double h, bool periodic,
                        bool& ok) {
  // inc(k) is the increment from sample k to sample k + 1 (mod n if periodic).
  auto get = [&](std::size_t k) {
    const auto [value, resolved] = inc(k);
    if (!resolved) ok = false;
    return value;
  };
  if (periodic) return (get((i + n - 1) % n) + get(i)) / (2.0 * h);
  if (i == 0) return (3.0 * get(0) - get(1)) / (2.0 * h);
  if (i == n - 1) return (3.0 * get(n - 2) - get(n - 3)) / (2.0 * h);
  return (get(i - 1) + get(i)) / (2.0 * h);
}

}  // namespace

MadelungFields decompose(const ScalarField2D& psi, const PhysicalConstants& c, double node_threshold) {
  c.validate();
  if (!(node_threshold > 0.0)) throw InvalidArgument("decompose: node_threshold must be > 0");
  const double peak = max_abs(psi);
  if (peak == 0.0) throw InvalidArgument("decompose: psi vanishes identically");

  const Grid& grid = psi.grid();
  const std::size_t n0 = psi.n0(), n1 = psi.n1(), n = psi.size();
  const AxisInfo ax = axis_info(grid);
  const double cut = node_threshold * peak;

  std::vector<double> a(n), s(n, 0.0);
  std::vector<std::uint8_t> base(n), mask(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = std::abs(psi[k]);
    base[k] = a[k] < cut ? 1 : 0;
    if (!base[k]) s[k] = c.hbar * std::arg(psi[k]);
  }

  auto increment = [&](std::size_t ka, std::size_t kb) -> std::pair<double, bool> {
    if (base[ka] || base[kb]) return {0.0, false};
    const double d = wrapped_step(psi[ka], psi[kb]);
    return {d, std::abs(d) < kUnresolvedPhaseStep};
  };

  std::vector<double> v0(n, 0.0), v1(n, 0.0);
  const double scale = c.hbar / c.mass;
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      const std::size_t k = psi.index(i0, i1);
      bool ok = !base[k];
      auto inc0 = [&](std::size_t m) { return increment(psi.index(m, i1), psi.index(m + 1, i1)); };
      auto inc1 = [&](std::size_t m) {
        return increment(psi.index(i0, m), psi.index(i0, (m + 1) % n1));
      };
      const double g0 = phase_derivative(inc0, i0, n0, ax.h0, false, ok);
      double g1 = phase_derivative(inc1, i1, n1, ax.h1, ax.polar, ok);
      if (ax.polar) g1 /= std::get<PolarGrid>(grid).r(i0);
      mask[k] = ok ? 0 : 1;
      if (ok) {
        v0[k] = scale * g0;
        v1[k] = scale * g1;
      }
    }
  }

  RealField2D amplitude(grid, a);
  const RealField2D lap = laplacian(amplitude);
  std::vector<double> q(n, 0.0);
  const double kin = c.kinetic_prefactor();
  for (std::size_t k = 0; k < n; ++k) {
    if (!mask[k]) q[k] = -kin * lap[k] / a[k];
  }

  return MadelungFields{std::move(amplitude),
                        RealField2D(grid, std::move(s)),
                        VectorField2D(grid, std::move(v0), std::move(v1)),
                        RealField2D(grid, std::move(q)),
                        std::move(mask),
                        node_threshold};
}

ScalarField2D recompose(const MadelungFields& fields, const PhysicalConstants& c) {
  const std::size_t n = fields.amplitude.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!fields.masked(k)) out[k] = std::polar(fields.amplitude[k], fields.phase_action[k] / c.hbar);
  }
  return ScalarField2D(fields.grid(), std::move(out));
}

StationaryResidualReport stationary_residuals(const MadelungFields& fields, const Potential& u,
                                              double energy, const PhysicalConstants& c) {
  c.validate();
  validate_potential(u, c);
  const Grid& grid = fields.grid();
  const std::size_t n0 = axis0_size(grid), n1 = axis1_size(grid), n = n0 * n1;
  const AxisInfo ax = axis_info(grid);
  const auto v0 = fields.velocity.component0();
  const auto v1 = fields.velocity.component1();
  const auto idx = [n0](std::size_t i0, std::size_t i1) { return i1 * n0 + i0; };

  std::vector<double> e(n, 0.0), cont(n, 0.0);
  std::vector<std::uint8_t> e_ok(n, 0), c_ok(n, 0);
  // Flux components; the polar radial flux carries the extra factor r.
  std::vector<double> f0(n), f1(n);
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      const std::size_t k = idx(i0, i1);
      const double rho = fields.amplitude[k] * fields.amplitude[k];
      const double rfac = ax.polar ? std::get<PolarGrid>(grid).r(i0) : 1.0;
      f0[k] = rfac * rho * v0[k];
      f1[k] = rho * v1[k];
      if (!fields.masked(k)) {
        const double kinetic = 0.5 * c.mass * (v0[k] * v0[k] + v1[k] * v1[k]);
        e[k] = energy - kinetic - u(node_point(grid, i0, i1)) - fields.quantum_potential[k];
        e_ok[k] = 1;
      }
    }
  }

  auto clean = [&](std::size_t i0, std::size_t i1) {
    // Every sample the two first-derivative stencils touch must be unmasked.
    auto line_ok = [&](std::size_t i, std::size_t len, bool periodic, auto node) {
      if (periodic) return !fields.masked(node((i + len - 1) % len)) && !fields.masked(node((i + 1) % len));
      const std::size_t lo = i == 0 ? 0 : (i == len - 1 ? len - 3 : i - 1);
      for (std::size_t m = lo; m < lo + 3; ++m)
        if (fields.masked(node(m))) return false;
      return true;
    };
    return !fields.masked(idx(i0, i1)) &&
           line_ok(i0, n0, false, [&](std::size_t m) { return idx(m, i1); }) &&
           line_ok(i1, n1, ax.polar, [&](std::size_t m) { return idx(i0, m); });
  };

  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    auto along0 = [&](std::size_t m) { return f0[idx(m, i1)]; };
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      if (!clean(i0, i1)) continue;
      auto along1 = [&](std::size_t m) { return f1[idx(i0, m)]; };
      double d = detail::d1_line<double>(along0, i0, n0, ax.h0, false);
      double d1 = detail::d1_line<double>(along1, i1, n1, ax.h1, ax.polar);
      if (ax.polar) {
        const double r = std::get<PolarGrid>(grid).r(i0);
        d /= r;
        d1 /= r;
      }
      const std::size_t k = idx(i0, i1);
      cont[k] = d + d1;
      c_ok[k] = 1;
    }
  }

  StationaryResidualReport rep{RealField2D(grid, e), RealField2D(grid, cont), e_ok, c_ok};
  double e_num = 0.0, e_den = 0.0, c_num = 0.0, c_den = 0.0, rho_max = 0.0;
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      const std::size_t k = idx(i0, i1);
      const double w = node_weight(grid, i0, i1);
      const double rho = fields.amplitude[k] * fields.amplitude[k];
      rho_max = std::max(rho_max, rho);
      c_den += w * rho;
      if (e_ok[k]) {
        e_num += w * rho * e[k] * e[k];
        e_den += w * rho;
        rep.energy_max = std::max(rep.energy_max, std::abs(e[k]));
      }
      if (c_ok[k]) {
        c_num += w * cont[k] * cont[k];
        rep.continuity_max = std::max(rep.continuity_max, std::abs(cont[k]));
      }
    }
  }
  rep.energy_l2 = e_den > 0.0 ? std::sqrt(e_num / e_den) : 0.0;
  rep.continuity_l2 = std::sqrt(c_num) / c_den;
  rep.continuity_max /= rho_max;
  rep.masked_fraction = fields.masked_fraction();
  rep.unreliable = rep.masked_fraction >= kUnreliableMaskFraction;
  return rep;
}

namespace {

double loglog_slope(const std::vector<RingAverage>& rings, double RingAverage::*member) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& ring : rings) {
    const double v = ring.*member;
    if (!(v > 0.0)) continue;
    const double x = std::log(ring.radius), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

CancellationReport singularity_cancellation_probe(const MadelungFields& fields, const Potential& u,
                                                  double energy, const PhysicalConstants& c,
                                                  Point center, const ProbeOptions& opt) {
  const auto* g = std::get_if<CartesianGrid>(&fields.grid());
  if (!g) throw InvalidArgument("singularity_cancellation_probe: requires a Cartesian grid");
  if (opt.inner_ring < 1 || opt.outer_ring < opt.inner_ring + 2) {
    throw InvalidArgument("singularity_cancellation_probe: need at least three rings");
  }
  const double h = std::max(g->dx(), g->dy());

  CancellationReport rep;
  {
    const ScalarField2D psi = recompose(fields, c);
    const LoopPath loop = LoopPath::circle(center, opt.inner_ring * h, 64);
    try {
      rep.winding = static_cast<int>(circulation(psi, loop, c, fields.node_threshold).j);
    } catch (const Error& err) {
      throw InvalidArgument(std::string("singularity_cancellation_probe: no nodal centre: ") + err.what());
    }
    if (rep.winding == 0) {
      std::ostringstream os;
      os << "singularity_cancellation_probe: no phase winding around (" << center.x << ", "
         << center.y << "), not a nodal point";
      throw InvalidArgument(os.str());
    }
  }

  const auto v0 = fields.velocity.component0();
  const auto v1 = fields.velocity.component1();
  const int reach = opt.outer_ring + 1;
  const auto ci = static_cast<long>(std::lround((center.x - g->x_min()) / g->dx()));
  const auto cj = static_cast<long>(std::lround((center.y - g->y_min()) / g->dy()));
  for (int ring = opt.inner_ring; ring <= opt.outer_ring; ++ring) {
    RingAverage avg{};
    std::size_t touched = 0;
    for (long j = cj - reach; j <= cj + reach; ++j) {
      for (long i = ci - reach; i <= ci + reach; ++i) {
        if (i < 0 || j < 0 || i >= static_cast<long>(g->nx()) || j >= static_cast<long>(g->ny())) {
          continue;
        }
        const Point p = g->node(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        const double d = std::hypot(p.x - center.x, p.y - center.y);
        if (std::abs(d - ring * h) >= 0.5 * h) continue;
        ++touched;
        const std::size_t k = static_cast<std::size_t>(j) * g->nx() + static_cast<std::size_t>(i);
        if (fields.masked(k)) continue;
        const double kin = 0.5 * c.mass * (v0[k] * v0[k] + v1[k] * v1[k]);
        const double q = fields.quantum_potential[k];
        avg.radius += d;
        avg.kinetic += kin;
        avg.neg_quantum -= q;
        avg.sum += kin + q;
        avg.balance += energy - u(p);
        ++avg.count;
      }
    }
    if (avg.count == 0) {
      std::ostringstream os;
      os << "singularity_cancellation_probe: ring " << ring << " (r = " << ring * h << ", "
         << touched << " nodes) lies entirely on the mask or off the grid";
      throw MaskedSample(os.str());
    }
    const auto cnt = static_cast<double>(avg.count);
    avg.radius /= cnt;
    avg.kinetic /= cnt;
    avg.neg_quantum /= cnt;
    avg.sum /= cnt;
    avg.balance /= cnt;
    rep.rings.push_back(avg);
  }

  rep.kinetic_slope = loglog_slope(rep.rings, &RingAverage::kinetic);
  rep.quantum_slope = loglog_slope(rep.rings, &RingAverage::neg_quantum);
  for (const auto& ring : rep.rings) {
    rep.kinetic_coefficient += ring.radius * ring.radius * ring.kinetic;
    rep.quantum_coefficient += ring.radius * ring.radius * ring.neg_quantum;
  }
  rep.kinetic_coefficient /= static_cast<double>(rep.rings.size());
  rep.quantum_coefficient /= static_cast<double>(rep.rings.size());
  const RingAverage& inner = rep.rings.front();
  rep.inner_ratio = std::abs(inner.sum) / std::min(inner.kinetic, std::abs(inner.neg_quantum));
  return rep;
}

}  // namespace qhydro
