#include "qhydro/potential.hpp"

#include <cmath>
#include <sstream>

#include "qhydro/error.hpp"

namespace qhydro {

std::string to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::regular: return "regular";
    case SingularityClass::mild: return "mild";
    case SingularityClass::forbidden: return "forbidden";
  }
  return "unknown";
}

Potential::Potential(std::optional<std::function<double(double)>> radial,
                     std::function<double(double, double)> planar, SingularityClass cls,
                     std::string name)
    : radial_(std::move(radial)), planar_(std::move(planar)), class_(cls), name_(std::move(name)) {}

Potential Potential::radial(std::function<double(double)> u, SingularityClass cls, std::string name) {
  auto planar = [u](double x, double y) { return u(std::hypot(x, y)); };
  return Potential(std::move(u), planar, cls, std::move(name));
}

Potential Potential::planar(std::function<double(double, double)> u, SingularityClass cls,
                            std::string name) {
  return Potential(std::nullopt, std::move(u), cls, std::move(name));
}

Potential Potential::free() {
  return radial([](double) { return 0.0; }, SingularityClass::regular, "free");
}

Potential Potential::harmonic(double omega, double mass) {
  if (!(omega > 0.0)) throw InvalidArgument("harmonic potential: omega must be > 0");
  const double k = 0.5 * mass * omega * omega;
  return radial([k](double r) { return k * r * r; }, SingularityClass::regular, "harmonic");
}

Potential Potential::radial_polynomial(std::vector<double> coeffs) {
  auto u = [coeffs](double r) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
    return acc;
  };
  return radial(u, SingularityClass::regular, "polynomial");
}

Potential Potential::inverse_square(double strength) {
  return radial([strength](double r) { return strength / (r * r); }, SingularityClass::mild,
                "inverse-square");
}

double Potential::operator()(Point p) const { return planar_(p.x, p.y); }

double Potential::at_radius(double r) const {
  if (!radial_) throw InvalidArgument("potential '" + name_ + "' is not radially symmetric");
  return (*radial_)(r);
}

SingularityClass probe_singularity(const Potential& u, const PhysicalConstants& c) {
  if (!u.is_radial() || u.declared_class() == SingularityClass::forbidden) {
    return u.declared_class();
  }
  const double threshold = -c.hbar * c.hbar / (8.0 * c.mass);
  const double reference = std::abs(u.at_radius(1e-2));
  bool bounded = true;
  double r2u_smallest = 0.0;
  for (double r = 1e-2; r >= 1e-8 * 0.999; r *= 0.1) {
    const double v = u.at_radius(r);
    if (std::isnan(v)) throw InvalidArgument("potential '" + u.name() + "' is NaN near the origin");
    if (std::isinf(v)) {
      if (v < 0) return SingularityClass::forbidden;
      bounded = false;
      continue;
    }
    if (std::abs(v) > 10.0 * (1.0 + reference)) bounded = false;
    r2u_smallest = r * r * v;
  }
  // Relative slack so that exactly -hbar^2/(8m r^2) survives rounding in r^2 U.
  if (r2u_smallest <= threshold * (1.0 - 1e-12)) return SingularityClass::forbidden;
  if (!bounded) return SingularityClass::mild;
  return u.declared_class();
}

void validate_potential(const Potential& u, const PhysicalConstants& c) {
  if (probe_singularity(u, c) == SingularityClass::forbidden) {
    std::ostringstream os;
    os << "potential '" << u.name() << "' diverges to -infinity at least as fast as "
       << "-hbar^2/(8 m r^2): the particle falls to the origin, no stationary state exists";
    throw ForbiddenPotential(os.str());
  }
}

}  // namespace qhydro
