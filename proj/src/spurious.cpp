#include "qhydro/spurious.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qhydro/error.hpp"
#include "qhydro/operators.hpp"
#include "qhydro/special_functions.hpp"

namespace qhydro {

namespace {

double reduce_phi(double phi) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0) p += kTwoPi;
  return p >= kTwoPi ? 0.0 : p;
}

ScalarField2D sample_candidate(const CandidateState& self, const Grid& grid) {
  const std::size_t n0 = axis0_size(grid), n1 = axis1_size(grid);
  std::vector<Complex> v(n0 * n1);
  if (const auto* p = std::get_if<PolarGrid>(&grid)) {
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t i = 0; i < n0; ++i) v[j * n0 + i] = self(p->r(i), p->phi(j));
  } else {
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t i = 0; i < n0; ++i) {
        const Point q = node_point(grid, i, j);
        v[j * n0 + i] = self(std::hypot(q.x, q.y), std::atan2(q.y, q.x));
      }
  }
  return ScalarField2D(grid, std::move(v));
}

}  // namespace

CandidateState::CandidateState(double nu, double k, const Grid& grid)
    : nu_(nu), k_(k), field_(grid, std::vector<Complex>(node_count(grid))) {
  if (!(nu >= 0.0)) throw InvalidArgument("build_candidate: nu must be >= 0");
  if (!(k > 0.0)) throw InvalidArgument("build_candidate: k must be > 0");
  BesselOrder check(nu);
  (void)check;
  field_ = sample_candidate(*this, grid);
}

Complex CandidateState::operator()(double r, double phi) const {
  return std::polar(1.0, nu_ * reduce_phi(phi)) * bessel_j(nu_, k_ * r);
}

Complex CandidateState::upper_limit(double r) const {
  // exp(2 pi i nu) through the fractional part, so integers give exactly 1.
  const double frac = nu_ - std::floor(nu_);
  return std::polar(1.0, kTwoPi * frac) * bessel_j(nu_, k_ * r);
}

std::vector<double> CandidateState::cut_radii() const {
  std::vector<double> radii;
  if (const auto* p = std::get_if<PolarGrid>(&field_.grid())) {
    for (std::size_t i = 0; i < p->nr(); ++i) radii.push_back(p->r(i));
  } else {
    const auto& g = std::get<CartesianGrid>(field_.grid());
    for (std::size_t i = 0; i < g.nx(); ++i)
      if (g.x(i) > 0) radii.push_back(g.x(i));
  }
  return radii;
}

CandidateState build_candidate(double nu, double k, const Grid& grid) {
  return CandidateState(nu, k, grid);
}

double branch_jump(const CandidateState& candidate) {
  double jump = 0.0;
  for (double r : candidate.cut_radii())
    jump = std::max(jump, std::abs(candidate.upper_limit(r) - candidate(r, 0.0)));
  return jump;
}

PlaneWaveExpansion plane_wave_fit(const CandidateState& candidate, std::size_t n,
                                  const FitWindow& window) {
  if (n < 64 || (n & (n - 1)) != 0) {
    std::ostringstream os;
    os << "plane_wave_fit: coefficient count " << n << " must be a power of two >= 64";
    throw InvalidArgument(os.str());
  }
  if (!(window.kr_min > 0.0) || !(window.kr_max > window.kr_min) || window.radial_samples < 2 ||
      window.angular_samples < 8)
    throw InvalidArgument("plane_wave_fit: bad fit window");

  const double k = candidate.k();
  const std::size_t nr = window.radial_samples, na = window.angular_samples;
  const std::size_t rows = nr * na;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd target(static_cast<Eigen::Index>(rows));
  const double weight = kTwoPi / static_cast<double>(n);
  for (std::size_t a = 0; a < na; ++a) {
    const double phi = kTwoPi * static_cast<double>(a) / static_cast<double>(na);
    for (std::size_t b = 0; b < nr; ++b) {
      const double kr = window.kr_min + (window.kr_max - window.kr_min) * static_cast<double>(b) /
                                            static_cast<double>(nr - 1);
      const auto row = static_cast<Eigen::Index>(a * nr + b);
      target(row) = candidate(kr / k, phi);
      for (std::size_t c = 0; c < n; ++c) {
        const double alpha = kTwoPi * static_cast<double>(c) / static_cast<double>(n);
        m(row, static_cast<Eigen::Index>(c)) = weight * std::polar(1.0, kr * std::cos(phi - alpha));
      }
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  Eigen::VectorXcd utb = svd.matrixU().adjoint() * target;
  std::size_t rank = 0;
  double smin = smax;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > kSpectralCutoff * smax) {
      utb(i) /= s(i);
      smin = s(i);
      ++rank;
    } else {
      utb(i) = 0.0;
    }
  }
  const Eigen::VectorXcd coeff = svd.matrixV() * utb;
  const Eigen::VectorXcd fit = m * coeff;

  PlaneWaveExpansion out;
  out.k = k;
  out.coefficients.assign(coeff.data(), coeff.data() + coeff.size());
  out.max_relative_error = (fit - target).cwiseAbs().maxCoeff() / target.cwiseAbs().maxCoeff();
  out.condition_number = smax / smin;
  out.rank = rank;
  return out;
}

const char* to_string(Verdict v) { return v == Verdict::physical ? "physical" : "spurious"; }

SpuriosityReport classify(double nu, double k, const Grid& grid, const SpuriosityTolerances& tol) {
  if (!(tol.jump > 0.0) || !(tol.expansion > 0.0))
    throw InvalidArgument("classify: tolerances must be > 0");
  const CandidateState cand = build_candidate(nu, k, grid);
  const PlaneWaveExpansion fit = plane_wave_fit(cand, tol.coefficients, tol.window);
  SpuriosityReport rep;
  rep.nu = nu;
  rep.branch_jump = branch_jump(cand);
  rep.best_expansion_error = fit.max_relative_error;
  rep.condition_number = fit.condition_number;
  rep.verdict = rep.branch_jump <= tol.jump && rep.best_expansion_error <= tol.expansion
                    ? Verdict::physical
                    : Verdict::spurious;
  return rep;
}

CutResidual cut_residual(double nu, double k, const CartesianGrid& grid, const PhysicalConstants& c,
                         double core_cells) {
  c.validate();
  const CandidateState cand = build_candidate(nu, k, grid);
  const ScalarField2D& psi = cand.field();
  const ScalarField2D lap = laplacian(psi);
  const double kin = c.kinetic_prefactor();
  const double energy = kin * k * k;
  const double scale = max_abs(psi);
  const double h = std::max(grid.dx(), grid.dy());
  CutResidual out;
  for (std::size_t j = 1; j + 1 < grid.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < grid.nx(); ++i) {
      const double x = grid.x(i);
      if (std::hypot(x, grid.y(j)) < core_cells * h) continue;
      const std::size_t id = psi.index(i, j);
      const double res = std::abs(-kin * lap[id] - energy * psi[id]) / scale;
      // The 5-point stencil straddles the cut when a vertical neighbour
      // lies on the other side of the positive x axis.
      const bool straddles = x > 0 && grid.y(j - 1) < 0 && grid.y(j + 1) >= 0;
      out.included = std::max(out.included, res);
      if (!straddles) out.excluded = std::max(out.excluded, res);
    }
  }
  return out;
}

}  // namespace qhydro
