#include "qhydro/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qhydro/error.hpp"

namespace qhydro {

LoopPath::LoopPath(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < kMinSamples) {
    std::ostringstream os;
    os << "LoopPath: " << points_.size() << " samples, need at least " << kMinSamples;
    throw InvalidArgument(os.str());
  }
}

LoopPath LoopPath::circle(Point center, double radius, std::size_t samples) {
  if (!(radius > 0.0)) throw InvalidArgument("LoopPath::circle: radius must be > 0");
  std::vector<Point> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
    pts[k] = {center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
  }
  return LoopPath(std::move(pts));
}

LoopPath LoopPath::square(Point center, double half_side, std::size_t samples) {
  if (!(half_side > 0.0)) throw InvalidArgument("LoopPath::square: half_side must be > 0");
  const std::size_t per_side = std::max<std::size_t>(1, samples / 4);
  const std::array<Point, 4> corners = {Point{center.x - half_side, center.y - half_side},
                                        Point{center.x + half_side, center.y - half_side},
                                        Point{center.x + half_side, center.y + half_side},
                                        Point{center.x - half_side, center.y + half_side}};
  std::vector<Point> pts;
  pts.reserve(4 * per_side);
  for (std::size_t s = 0; s < 4; ++s) {
    const Point a = corners[s], b = corners[(s + 1) % 4];
    for (std::size_t k = 0; k < per_side; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(per_side);
      pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return LoopPath(std::move(pts));
}

LoopPath LoopPath::reversed() const {
  std::vector<Point> pts(points_.rbegin(), points_.rend());
  return LoopPath(std::move(pts));
}

LoopPath LoopPath::refined() const {
  std::vector<Point> pts;
  pts.reserve(2 * points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const Point a = points_[k], b = points_[(k + 1) % points_.size()];
    pts.push_back(a);
    pts.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }
  return LoopPath(std::move(pts));
}

bool LoopPath::encloses(Point p) const {
  int wn = 0;
  const std::size_t n = points_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = points_[k], b = points_[(k + 1) % n];
    const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && cross > 0) ++wn;
    } else if (b.y <= p.y && cross < 0) {
      --wn;
    }
  }
  return wn != 0;
}

namespace {

double principal_step(Complex from, Complex to) { return std::arg(to * std::conj(from)); }

}  // namespace

WindingResult circulation(const ScalarField2D& psi, const LoopPath& loop, const PhysicalConstants& c,
                          double node_threshold) {
  c.validate();
  const double cut = node_threshold * max_abs(psi);
  LoopPath current = loop;
  while (true) {
    const auto& pts = current.points();
    const std::size_t n = pts.size();
    std::vector<Complex> values(n);
    for (std::size_t k = 0; k < n; ++k) {
      values[k] = interpolate(psi, pts[k]);
      if (std::abs(values[k]) < cut) {
        std::ostringstream os;
        os << "circulation: loop sample (" << pts[k].x << ", " << pts[k].y
           << ") lies on the nodal mask";
        throw MaskedSample(os.str());
      }
    }
    double total = 0.0;
    std::size_t worst = 0;
    double worst_step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = principal_step(values[k], values[(k + 1) % n]);
      total += d;
      if (std::abs(d) > worst_step) {
        worst_step = std::abs(d);
        worst = k;
      }
    }
    if (worst_step < kPi - 0.1) {
      WindingResult out;
      out.circulation = c.hbar * total;
      const double turns = total / kTwoPi;
      out.j = std::lround(turns);
      out.defect = std::abs(turns - static_cast<double>(out.j));
      out.samples = n;
      return out;
    }
    if (2 * n > kMaxLoopSamples) {
      const Point a = pts[worst], b = pts[(worst + 1) % n];
      std::ostringstream os;
      os << "circulation: loop under-sampled near node: phase step " << worst_step
         << " on segment (" << a.x << ", " << a.y << ") -> (" << b.x << ", " << b.y << ") with "
         << n << " samples";
      throw UnderSampledLoop(os.str());
    }
    current = current.refined();
  }
}

namespace {

// Zero of a + b s + c t + d s t inside (or on) the unit square.
struct BilinearRoot {
  bool found = false;
  double s = 0.5, t = 0.5;
  bool transversal = false;
  int orientation = 0;
};

BilinearRoot bilinear_root(Complex p00, Complex p10, Complex p01, Complex p11) {
  const Complex a = p00, b = p10 - p00, c = p01 - p00, d = p11 - p10 - p01 + p00;
  // s = -(a + c t) / (b + d t) is real iff Im[(a + c t) conj(b + d t)] = 0.
  const double qa = std::imag(c * std::conj(d));
  const double qb = std::imag(a * std::conj(d) + c * std::conj(b));
  const double qc = std::imag(a * std::conj(b));
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  BilinearRoot best;
  if (scale == 0.0) return best;
  std::array<double, 2> ts{};
  int nt = 0;
  if (std::abs(qa) <= 1e-12 * scale) {
    if (std::abs(qb) > 1e-12 * scale) ts[nt++] = -qc / qb;
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (qb + std::copysign(sq, qb));
      ts[nt++] = q / qa;
      if (q != 0.0) ts[nt++] = qc / q;
    }
  }
  constexpr double kSlack = 1e-9;
  for (int m = 0; m < nt; ++m) {
    const double t = ts[m];
    if (t < -kSlack || t > 1 + kSlack) continue;
    const Complex den = b + d * t;
    if (std::norm(den) == 0.0) continue;
    const double s = -std::real((a + c * t) * std::conj(den)) / std::norm(den);
    if (s < -kSlack || s > 1 + kSlack) continue;
    const Complex ds = b + d * t, dt = c + d * s;
    const double jac = std::imag(std::conj(ds) * dt);
    best.found = true;
    best.s = std::clamp(s, 0.0, 1.0);
    best.t = std::clamp(t, 0.0, 1.0);
    best.transversal = std::abs(jac) > 1e-8 * std::abs(ds) * std::abs(dt);
    best.orientation = jac > 0 ? 1 : (jac < 0 ? -1 : 0);
    if (best.transversal) break;
  }
  return best;
}

}  // namespace

std::vector<NodalPoint> nodal_scan(const ScalarField2D& psi) {
  const auto* g = std::get_if<CartesianGrid>(&psi.grid());
  if (!g) throw InvalidArgument("nodal_scan: requires a Cartesian grid");
  const std::size_t nx = g->nx(), ny = g->ny();

  // Phase per node; exact zeros get a fixed generic phase so that a vortex
  // sitting on a node is attributed to exactly one adjacent cell.
  std::vector<double> phase(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) phase[k] = psi[k] == Complex{} ? 1.0 : std::arg(psi[k]);
  auto wrap = [](double d) {
    d = std::remainder(d, kTwoPi);
    return d <= -kPi ? d + kTwoPi : d;
  };

  std::vector<NodalPoint> out;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const std::array<std::size_t, 4> ring = {psi.index(i, j), psi.index(i + 1, j),
                                               psi.index(i + 1, j + 1), psi.index(i, j + 1)};
      // Re and Im must each reach zero somewhere on the cell.
      double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
      bool first = true;
      for (auto k : ring) {
        const double re = psi[k].real(), im = psi[k].imag();
        if (first) {
          re_lo = re_hi = re;
          im_lo = im_hi = im;
          first = false;
        }
        re_lo = std::min(re_lo, re);
        re_hi = std::max(re_hi, re);
        im_lo = std::min(im_lo, im);
        im_hi = std::max(im_hi, im);
      }
      const bool re_ok = re_lo <= 0 && re_hi >= 0 && (re_lo != 0 || re_hi != 0);
      const bool im_ok = im_lo <= 0 && im_hi >= 0 && (im_lo != 0 || im_hi != 0);
      if (!re_ok || !im_ok) continue;
      double total = 0.0, largest = 0.0;
      for (std::size_t m = 0; m < 4; ++m) {
        const double d = wrap(phase[ring[(m + 1) % 4]] - phase[ring[m]]);
        total += d;
        largest = std::max(largest, std::abs(d));
      }
      int winding = static_cast<int>(std::lround(total / kTwoPi));
      const BilinearRoot root = bilinear_root(psi[ring[0]], psi[ring[1]], psi[ring[3]], psi[ring[2]]);
      if (largest > kPi - 1e-9) {
        // A step of exactly pi: the corner phases alone cannot decide.
        winding = root.found && root.transversal ? root.orientation : 0;
      }
      if (winding == 0) continue;
      NodalPoint np;
      np.winding = winding;
      np.cell_i = i;
      np.cell_j = j;
      np.location = {g->x(i) + root.s * g->dx(), g->y(j) + root.t * g->dy()};
      out.push_back(np);
    }
  }
  return out;
}

SumRuleReport sum_rule_check(const ScalarField2D& psi, const LoopPath& loop, const PhysicalConstants& c,
                             double node_threshold) {
  SumRuleReport rep;
  rep.measured = circulation(psi, loop, c, node_threshold);
  for (const auto& np : nodal_scan(psi)) {
    if (loop.encloses(np.location)) {
      rep.enclosed.push_back(np);
      rep.enclosed_sum += np.winding;
    }
  }
  rep.equal = rep.enclosed_sum == rep.measured.j;
  return rep;
}

}  // namespace qhydro
