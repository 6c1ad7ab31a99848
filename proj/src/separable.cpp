#include "qhydro/separable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhydro/error.hpp"
#include "qhydro/special_functions.hpp"

namespace qhydro {

AngularSolution::AngularSolution(double nu, Complex coeff_plus, Complex coeff_minus)
    : nu_(nu), plus_(coeff_plus), minus_(coeff_minus) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("AngularSolution: nu must be >= 0");
  if (plus_ == Complex{} && minus_ == Complex{}) {
    throw InvalidArgument("AngularSolution: coefficients must not both vanish");
  }
}

AngularSolution AngularSolution::normalized_winding(int m) {
  const double amp = 1.0 / std::sqrt(kTwoPi);
  if (m >= 0) return AngularSolution(m, amp, 0.0);
  return AngularSolution(-m, 0.0, amp);
}

Complex AngularSolution::operator()(double phi) const {
  const double a = nu_ * phi;
  return plus_ * std::polar(1.0, a) + minus_ * std::polar(1.0, -a);
}

std::optional<double> AngularSolution::phase_action_slope(const PhysicalConstants& c) const {
  if (minus_ == Complex{}) return nu_ * c.hbar;
  if (plus_ == Complex{}) return -nu_ * c.hbar;
  return std::nullopt;
}

namespace {

template <typename Deviation>
PeriodicityCheck sweep(const AngularSolution& sol, Deviation deviation) {
  PeriodicityCheck out{true, 0.0, 0.0};
  for (int j = 0; j < kPeriodicitySweep; ++j) {
    const double phi = kTwoPi * j / kPeriodicitySweep;
    const double d = deviation(sol(phi + kTwoPi), sol(phi));
    if (d > out.max_deviation) {
      out.max_deviation = d;
      out.witness_phi = phi;
    }
  }
  out.periodic = out.max_deviation <= kPeriodicityTolerance;
  return out;
}

}  // namespace

PeriodicityCheck check_modulus_periodicity(const AngularSolution& sol) {
  return sweep(sol, [](Complex a, Complex b) { return std::abs(std::abs(a) - std::abs(b)); });
}

PeriodicityCheck check_full_periodicity(const AngularSolution& sol) {
  return sweep(sol, [](Complex a, Complex b) { return std::abs(a - b); });
}

// ---------------------------------------------------------------------------
// Radial shooting

namespace {

class RadialShooter {
 public:
  RadialShooter(const Potential& u, double nu, double r_max, const PhysicalConstants& c,
                const RadialOptions& opt)
      : u_(u), nu_(nu), steps_(opt.steps), two_m_over_hbar2_(2.0 * c.mass / (c.hbar * c.hbar)) {
    r_min_ = opt.r_min_fraction * r_max;
    h_ = (r_max - r_min_) / steps_;
    // Potential on the half-step lattice used by RK4.
    u_half_.resize(2 * static_cast<std::size_t>(steps_) + 1);
    for (std::size_t k = 0; k < u_half_.size(); ++k) {
      u_half_[k] = u.at_radius(r_min_ + 0.5 * h_ * static_cast<double>(k));
      if (!std::isfinite(u_half_[k])) {
        throw InvalidArgument("solve_radial: potential is not finite on (0, r_max]");
      }
    }
  }

  int steps() const { return steps_; }
  double r(int i) const { return r_min_ + h_ * i; }
  double u_node(int i) const { return u_half_[2 * static_cast<std::size_t>(i)]; }
  double u_min() const { return *std::min_element(u_half_.begin(), u_half_.end()); }
  double u_max() const { return *std::max_element(u_half_.begin(), u_half_.end()); }

  // Outward integration; returns the number of sign changes over all
  // consecutive sample pairs. Optionally stores R at the nodes.
  int outward(double energy, std::vector<double>* store = nullptr) const {
    // Two terms of the regular Frobenius series r^nu (1 + a r^2).
    const double a = two_m_over_hbar2_ * (u_half_[0] - energy) / (4.0 * (nu_ + 1.0));
    const double rn = std::pow(r_min_, nu_);
    double y = rn * (1.0 + a * r_min_ * r_min_);
    double p = (nu_ == 0.0 ? 0.0 : nu_ * rn / r_min_) + (nu_ + 2.0) * a * rn * r_min_;
    if (store) {
      store->assign(static_cast<std::size_t>(steps_) + 1, 0.0);
      (*store)[0] = y;
    }
    int nodes = 0;
    for (int i = 0; i < steps_; ++i) {
      const double y_old = y;
      step(energy, 2 * i, +1, y, p);
      if ((y < 0.0) != (y_old < 0.0)) ++nodes;
      if (store) (*store)[static_cast<std::size_t>(i) + 1] = y;
      if (std::abs(y) > 1e100) {
        y *= 1e-100;
        p *= 1e-100;
        if (store) for (auto& v : *store) v *= 1e-100;
      }
    }
    return nodes;
  }

  // Inward integration from R(r_max) = 0, R'(r_max) = -1 down to node
  // `stop`; fills store[stop..steps].
  void inward(double energy, int stop, std::vector<double>& store) const {
    store.assign(static_cast<std::size_t>(steps_) + 1, 0.0);
    double y = 0.0, p = -1.0;
    for (int i = steps_; i > stop; --i) {
      step(energy, 2 * i, -1, y, p);
      store[static_cast<std::size_t>(i) - 1] = y;
      if (std::abs(y) > 1e100) {
        y *= 1e-100;
        p *= 1e-100;
        for (auto& v : store) v *= 1e-100;
      }
    }
  }

 private:
  double coef(std::size_t half_index, double energy) const {
    const double r = r_min_ + 0.5 * h_ * static_cast<double>(half_index);
    return nu_ * nu_ / (r * r) + two_m_over_hbar2_ * (u_half_[half_index] - energy);
  }

  // One classical RK4 step of (R, R') from half-lattice index k0 in
  // direction dir (+1 outward, -1 inward).
  void step(double energy, int k0, int dir, double& y, double& p) const {
    const double r_start = r_min_ + 0.5 * h_ * static_cast<double>(k0);
    const double r_low = dir > 0 ? r_start : r_start - h_;
    // Near the origin the 1/r coefficients vary within a step; split it so
    // that each substep stays below a tenth of its distance to the origin.
    if (h_ > 0.1 * r_low) {
      const int m = static_cast<int>(std::ceil(10.0 * h_ / r_low));
      const double hs = dir * h_ / m;
      for (int s = 0; s < m; ++s) substep(energy, r_start + s * hs, hs, y, p);
      return;
    }
    const double h = dir * h_;
    const auto k = static_cast<std::size_t>(k0);
    const std::size_t km = dir > 0 ? k + 1 : k - 1;
    const std::size_t k1 = dir > 0 ? k + 2 : k - 2;
    const double r0 = r_min_ + 0.5 * h_ * static_cast<double>(k);
    const double rm = r0 + 0.5 * h;
    const double r1 = r0 + h;
    auto acc = [&](std::size_t kk, double rr, double yy, double pp) {
      return -pp / rr + coef(kk, energy) * yy;
    };
    const double ky1 = p, kp1 = acc(k, r0, y, p);
    const double ky2 = p + 0.5 * h * kp1, kp2 = acc(km, rm, y + 0.5 * h * ky1, p + 0.5 * h * kp1);
    const double ky3 = p + 0.5 * h * kp2, kp3 = acc(km, rm, y + 0.5 * h * ky2, p + 0.5 * h * kp2);
    const double ky4 = p + h * kp3, kp4 = acc(k1, r1, y + h * ky3, p + h * kp3);
    y += h / 6.0 * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4);
    p += h / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
  }

  void substep(double energy, double r0, double h, double& y, double& p) const {
    auto acc = [&](double rr, double yy, double pp) {
      const double cf = nu_ * nu_ / (rr * rr) + two_m_over_hbar2_ * (u_.at_radius(rr) - energy);
      return -pp / rr + cf * yy;
    };
    const double rm = r0 + 0.5 * h, r1 = r0 + h;
    const double ky1 = p, kp1 = acc(r0, y, p);
    const double ky2 = p + 0.5 * h * kp1, kp2 = acc(rm, y + 0.5 * h * ky1, p + 0.5 * h * kp1);
    const double ky3 = p + 0.5 * h * kp2, kp3 = acc(rm, y + 0.5 * h * ky2, p + 0.5 * h * kp2);
    const double ky4 = p + h * kp3, kp4 = acc(r1, y + h * ky3, p + h * kp3);
    y += h / 6.0 * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4);
    p += h / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
  }

  const Potential& u_;
  double nu_;
  int steps_;
  double two_m_over_hbar2_;
  double r_min_ = 0.0, h_ = 0.0;
  std::vector<double> u_half_;
};

}  // namespace

RadialSolution solve_radial(const Potential& u, double nu, double r_max, int n,
                            const PhysicalConstants& c, const RadialOptions& opt) {
  c.validate();
  validate_potential(u, c);
  if (!u.is_radial()) throw InvalidArgument("solve_radial: potential must be radially symmetric");
  if (!(nu >= 0.0) || !(nu < BesselOrder::kMax)) throw InvalidArgument("solve_radial: nu out of range");
  if (!(r_max > 0.0)) throw InvalidArgument("solve_radial: r_max must be > 0");
  if (n < 0) throw InvalidArgument("solve_radial: n must be >= 0");
  if (opt.steps < 16 || opt.scan_steps < 1) throw InvalidArgument("solve_radial: bad step counts");

  const RadialShooter shooter(u, nu, r_max, c, opt);

  const double e_free = c.hbar * c.hbar * std::pow(bessel_j_zero(nu, n + 1) / r_max, 2) / (2.0 * c.mass);
  const double e_lo = opt.energy_lo.value_or(shooter.u_min());
  const double e_hi =
      opt.energy_hi.value_or(e_lo + 4.0 * e_free + (shooter.u_max() - shooter.u_min()));
  if (!(e_hi > e_lo)) throw InvalidArgument("solve_radial: empty energy window");

  auto not_bracketed = [&](const char* why) {
    std::ostringstream os;
    os << "solve_radial: eigenvalue not bracketed (" << why << "): nu = " << nu << ", n = " << n
       << ", window [" << e_lo << ", " << e_hi << "] scanned in " << opt.scan_steps << " steps";
    return NotBracketed(os.str());
  };

  // Node count = number of eigenvalues strictly below E (Sturm).
  double lo = e_lo, hi = e_hi;
  if (shooter.outward(e_lo) > n) throw not_bracketed("window starts above the eigenvalue");
  bool found = false;
  for (int i = 1; i <= opt.scan_steps; ++i) {
    const double e = e_lo + (e_hi - e_lo) * i / opt.scan_steps;
    if (shooter.outward(e) > n) {
      lo = e_lo + (e_hi - e_lo) * (i - 1) / opt.scan_steps;
      hi = e;
      found = true;
      break;
    }
  }
  if (!found) throw not_bracketed("no sign change at r_max in the window");

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= opt.relative_tolerance * std::max(std::abs(mid), 1e-300)) break;
    if (shooter.outward(mid) > n) hi = mid;
    else lo = mid;
  }
  const double energy = 0.5 * (lo + hi);

  // Eigenfunction: outward up to the outer classical turning point, inward
  // from r_max beyond it, where outward integration picks up the growing
  // solution.
  const int steps = shooter.steps();
  std::vector<double> values;
  shooter.outward(energy, &values);
  const double centrifugal = c.hbar * c.hbar * nu * nu / (2.0 * c.mass);
  int turning = -1;
  for (int i = steps; i >= 0; --i) {
    const double ri = shooter.r(i);
    if (energy >= shooter.u_node(i) + centrifugal / (ri * ri)) {
      turning = i;
      break;
    }
  }
  if (turning >= 0 && turning < steps - 2) {
    int match = turning;
    double peak = 0.0;
    for (int i = 0; i <= turning; ++i) peak = std::max(peak, std::abs(values[i]));
    while (match > 0 && std::abs(values[match]) < 1e-3 * peak) --match;
    std::vector<double> tail;
    shooter.inward(energy, match, tail);
    if (tail[match] != 0.0) {
      const double scale = values[match] / tail[match];
      for (int i = match + 1; i <= steps; ++i) values[i] = scale * tail[i];
    }
  }

  RadialSolution sol;
  sol.nu = nu;
  sol.n = n;
  sol.energy = energy;
  sol.k = energy > 0.0 ? std::sqrt(2.0 * c.mass * energy) / c.hbar : 0.0;
  sol.r.resize(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) sol.r[i] = shooter.r(i);
  values.back() = 0.0;

  double norm = 0.0;
  for (int i = 0; i < steps; ++i) {
    norm += 0.5 * (values[i] * values[i] * sol.r[i] + values[i + 1] * values[i + 1] * sol.r[i + 1]) *
            (sol.r[i + 1] - sol.r[i]);
  }
  const double s = (values.front() < 0.0 ? -1.0 : 1.0) / std::sqrt(norm);
  for (auto& v : values) v *= s;
  sol.values = std::move(values);
  return sol;
}

double RadialSolution::operator()(double radius) const {
  const double r0 = r.front();
  if (radius < r0) return values.front() * std::pow(radius / r0, nu);
  const double rmax = r.back();
  if (radius > rmax) return 0.0;
  const std::size_t last = r.size() - 1;
  const double h = (rmax - r0) / static_cast<double>(last);
  const double u = (radius - r0) / h;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(last) - 2);
  const double t = u - static_cast<double>(i);  // in units of h from node i
  const double f0 = values[i - 1], f1 = values[i], f2 = values[i + 1], f3 = values[i + 2];
  // Lagrange basis on nodes -1, 0, 1, 2.
  const double l0 = -t * (t - 1) * (t - 2) / 6.0;
  const double l1 = (t + 1) * (t - 1) * (t - 2) / 2.0;
  const double l2 = -(t + 1) * t * (t - 2) / 2.0;
  const double l3 = (t + 1) * t * (t - 1) / 6.0;
  return l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3;
}

NearOriginMatch near_origin_match(const RadialSolution& sol, double fit_fraction) {
  if (!(sol.k > 0.0)) throw InvalidArgument("near_origin_match: requires positive energy");
  const double r_fit = fit_fraction * sol.r_max();
  double rj = 0.0, jj = 0.0;
  std::vector<std::pair<double, double>> window;  // (R, J)
  for (std::size_t i = 0; i < sol.r.size() && sol.r[i] <= r_fit; ++i) {
    const double j = bessel_j(sol.nu, sol.k * sol.r[i]);
    window.emplace_back(sol.values[i], j);
    rj += sol.values[i] * j;
    jj += j * j;
  }
  if (window.size() < 8) {
    std::ostringstream os;
    os << "near_origin_match: fit window (0, " << r_fit << "] holds " << window.size()
       << " samples, need at least 8";
    throw InvalidArgument(os.str());
  }
  const double scale = rj / jj;
  double dev = 0.0, peak = 0.0;
  for (const auto& [rv, jv] : window) {
    dev = std::max(dev, std::abs(rv - scale * jv));
    peak = std::max(peak, std::abs(rv));
  }
  return {scale, dev / peak, r_fit, window.size()};
}

ScalarField2D assemble_separable_state(const AngularSolution& ang, const RadialSolution& rad,
                                       const Grid& grid) {
  if (std::abs(ang.nu() - rad.nu) > 1e-12) {
    std::ostringstream os;
    os << "assemble_separable_state: angular order " << ang.nu() << " != radial order " << rad.nu;
    throw InvalidArgument(os.str());
  }
  const std::size_t n0 = axis0_size(grid), n1 = axis1_size(grid);
  std::vector<Complex> values(n0 * n1);
  if (const auto* g = std::get_if<PolarGrid>(&grid)) {
    for (std::size_t j = 0; j < n1; ++j) {
      const Complex phi_part = ang(g->phi(j));
      for (std::size_t i = 0; i < n0; ++i) values[j * n0 + i] = phi_part * rad(g->r(i));
    }
  } else {
    for (std::size_t j = 0; j < n1; ++j) {
      for (std::size_t i = 0; i < n0; ++i) {
        const Point p = node_point(grid, i, j);
        double phi = std::atan2(p.y, p.x);
        if (phi < 0.0) phi += kTwoPi;
        values[j * n0 + i] = ang(phi) * rad(std::hypot(p.x, p.y));
      }
    }
  }
  return ScalarField2D(grid, std::move(values));
}

RadialResidual radial_equation_residual(std::span<const double> r, std::span<const double> values,
                                        double nu, const Potential& u, double energy,
                                        const PhysicalConstants& c,
                                        bool include_first_derivative) {
  if (r.size() != values.size() || r.size() < 3) {
    throw InvalidArgument("radial_equation_residual: need matching samples, at least 3");
  }
  const double kin = c.kinetic_prefactor();
  const double h = r[1] - r[0];
  RadialResidual out;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double d2 = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
    const double d1 = (values[i + 1] - values[i - 1]) / (2.0 * h);
    double lhs = -kin * d2;
    if (include_first_derivative) lhs -= kin * d1 / r[i];
    lhs += (kin * nu * nu / (r[i] * r[i]) + u.at_radius(r[i]) - energy) * values[i];
    out.r.push_back(r[i]);
    out.residual.push_back(lhs);
    num += lhs * lhs * r[i];
    den += values[i] * values[i] * r[i];
  }
  out.l2_relative = std::sqrt(num / den);
  return out;
}

}  // namespace qhydro
