// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff
// all pass.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "config.hpp"
#include "qhydro/madelung.hpp"
#include "qhydro/operators.hpp"
#include "qhydro/separable.hpp"
#include "qhydro/spurious.hpp"
#include "qhydro/topology.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "support/oracles.hpp"

using namespace qhydro;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome circulation_quantization() {
  const CartesianGrid g(-4, 4, -4, 4, 256, 256);
  const Potential u = Potential::harmonic(1.0);
  bool ok = true;
  double worst_defect = 0.0, worst_spread = 0.0;
  for (int nu = -3; nu <= 3; ++nu) {
    const auto rad = solve_radial(u, std::abs(nu), 8.0, 0);
    const auto psi = assemble_separable_state(AngularSolution::normalized_winding(nu), rad, g);
    double lo = 1e300, hi = -1e300;
    for (double r : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      const auto w = circulation(psi, LoopPath::circle({0, 0}, r));
      ok = ok && w.j == nu;
      worst_defect = std::max(worst_defect, w.defect);
      lo = std::min(lo, w.circulation);
      hi = std::max(hi, w.circulation);
    }
    worst_spread = std::max(worst_spread, (hi - lo) / kTwoPi);
  }
  ok = ok && worst_defect <= 1e-3 && worst_spread <= 1e-6;
  return {ok, "j = nu for nu in -3..3, max defect " + num(worst_defect) + ", max radius spread " +
                  num(worst_spread) + " x 2 pi hbar"};
}

Outcome radial_correction() {
  bool ok = true;
  std::string d;
  for (int nu = 0; nu <= 2; ++nu) {
    const double k = oracle::bessel_zero_bisect(nu, 1);
    double with[3], without[3];
    for (int lv = 0; lv < 3; ++lv) {
      const int n = 400 << lv;
      std::vector<double> r(n), v(n);
      for (int i = 0; i < n; ++i) {
        r[i] = (i + 0.5) / n;
        v[i] = std::cyl_bessel_j(nu, k * r[i]);
      }
      with[lv] = radial_equation_residual(r, v, nu, Potential::free(), k * k / 2).l2_relative;
      without[lv] = radial_equation_residual(r, v, nu, Potential::free(), k * k / 2, {}, false).l2_relative;
    }
    const double p = std::min(oracle::order(with[0], with[1]), oracle::order(with[1], with[2]));
    const double ratio = without[2] / with[2];
    ok = ok && p >= 1.9 && ratio >= 10.0;
    d += (nu ? "; " : "") + std::string("nu=") + std::to_string(nu) + " order " + num(p) + ", dropped-term ratio " + num(ratio);
  }
  return {ok, d};
}

const PolarGrid kCandidateGrid = PolarGrid::half_cell(6.0, 64, 64);

Outcome spuriosity_classification() {
  bool ok = true;
  double worst = 0.0;
  for (double nu : {0.0, 1.0, 2.0, 3.0, 0.25, 0.5, 1.5}) {
    const auto rep = classify(nu, 1.0, kCandidateGrid);
    const bool integer = nu == std::floor(nu);
    ok = ok && rep.verdict == (integer ? Verdict::physical : Verdict::spurious);
    double peak = 0.0;
    for (double r : build_candidate(nu, 1.0, kCandidateGrid).cut_radii())
      peak = std::max(peak, std::abs(std::cyl_bessel_j(nu, r)));
    const double closed = std::abs(1.0 - std::polar(1.0, kTwoPi * nu)) * peak;
    worst = std::max(worst, std::abs(rep.branch_jump - closed));
  }
  ok = ok && worst <= 1e-10;
  return {ok, "integer orders physical, 0.25/0.5/1.5 spurious, branch jump vs closed form " + num(worst)};
}

Outcome plane_wave_expandability() {
  bool ok = true;
  double worst_int = 0.0, worst_gain = 0.0, lowest_floor = 1e300;
  for (double nu : {0.0, 1.0, 2.0, 3.0}) {
    const double e = plane_wave_fit(build_candidate(nu, 1.0, kCandidateGrid), 64).max_relative_error;
    worst_int = std::max(worst_int, e);
  }
  for (double nu : {0.25, 0.5, 1.5}) {
    const auto c = build_candidate(nu, 1.0, kCandidateGrid);
    const double e64 = plane_wave_fit(c, 64).max_relative_error;
    const double e256 = plane_wave_fit(c, 256).max_relative_error;
    worst_gain = std::max(worst_gain, e64 / e256);
    lowest_floor = std::min(lowest_floor, e256);
  }
  ok = worst_int <= 1e-8 && worst_gain <= 2.0 && lowest_floor >= 1e-2;
  return {ok, "integer max error " + num(worst_int) + " at N=64; non-integer gain 64->256 " + num(worst_gain) +
                  ", floor " + num(lowest_floor)};
}

Outcome stationary_equivalence() {
  struct State {
    Potential u;
    const char* label;
    double nu;
    int n;
    double r_max;
  };
  const std::vector<State> states = {{Potential::free(), "free", 0, 0, 1.0},      {Potential::free(), "free", 1, 0, 1.0},
                                     {Potential::harmonic(1.0), "harm", 0, 0, 5.0}, {Potential::harmonic(1.0), "harm", 1, 0, 5.0},
                                     {Potential::harmonic(1.0), "harm", 0, 1, 5.0}, {Potential::harmonic(1.0), "harm", 1, 1, 5.0}};
  bool ok = true;
  double min_energy = 1e300, min_cont = 1e300, floor = 0.0;
  int at_floor = 0;
  for (const auto& s : states) {
    const auto rad = solve_radial(s.u, s.nu, s.r_max, s.n);
    double e[3], c[3];
    for (int lv = 0; lv < 3; ++lv) {
      const auto g = PolarGrid::half_cell(s.r_max, 100u << lv, 32u << lv);
      const auto f = decompose(assemble_separable_state(AngularSolution::normalized_winding(static_cast<int>(s.nu)), rad, g));
      const auto rep = stationary_residuals(f, s.u, rad.energy);
      ok = ok && !rep.unreliable;
      e[lv] = rep.energy_l2;
      c[lv] = rep.continuity_l2;
    }
    min_energy = std::min({min_energy, oracle::order(e[0], e[1]), oracle::order(e[1], e[2])});
    if (std::max({c[0], c[1], c[2]}) <= 1e-10) {
      // The discrete divergence of a^2 v vanishes identically for these
      // states; only rounding noise is left, so there is no order to fit.
      ++at_floor;
      floor = std::max({floor, c[0], c[1], c[2]});
    } else {
      min_cont = std::min({min_cont, oracle::order(c[0], c[1]), oracle::order(c[1], c[2])});
    }
  }
  ok = ok && min_energy >= 1.9 && (at_floor == 6 || min_cont >= 1.9);
  std::string d = "6 states, min energy-balance order " + num(min_energy);
  if (at_floor) d += ", continuity at round-off floor (max " + num(floor) + ") for " + std::to_string(at_floor);
  if (at_floor < 6) d += ", min continuity order " + num(min_cont);
  return {ok, d};
}

Outcome sum_rule() {
  verify::ScenarioConfig cfg;
  cfg.kind = verify::ScenarioKind::sum_rule;
  cfg.name = "acceptance";
  cfg.grid = CartesianGrid(-2, 2, -2, 2, 256, 256);
  cfg.seed = 20240229;
  const auto rep = verify::run(cfg, 1);
  std::size_t passed = 0, trials = 0;
  bool pair_ok = false, empty_ok = false;
  for (const auto& c : rep.cases) {
    if (c.id == "pair") pair_ok = c.pass && c.details.at("j") == 0;
    else if (c.id == "empty") empty_ok = c.pass && c.details.at("j") == 0;
    else {
      ++trials;
      passed += c.pass ? 1 : 0;
    }
  }
  const bool ok = trials == 100 && passed == trials && pair_ok && empty_ok;
  return {ok, std::to_string(passed) + "/" + std::to_string(trials) + " random placements match; pair j=0 " +
                  (pair_ok ? "yes" : "no") + ", empty loop j=0 " + (empty_ok ? "yes" : "no")};
}

Outcome singularity_cancellation() {
  const CartesianGrid g(-1.28, 1.28, -1.28, 1.28, 256, 256);
  const auto f = decompose(build_field(g, [](Point p) { return Complex(p.x, p.y) * std::exp(-(p.x * p.x + p.y * p.y) / 2); }));
  const auto rep = singularity_cancellation_probe(f, Potential::harmonic(1.0), 2.0, {}, {0, 0});
  const bool ok = std::abs(rep.kinetic_slope + 2) <= 0.1 && std::abs(rep.quantum_slope + 2) <= 0.1 && rep.inner_ratio <= 0.05;
  return {ok, "slopes kinetic " + num(rep.kinetic_slope) + ", -Q " + num(rep.quantum_slope) + ", inner |K+Q|/min " +
                  num(rep.inner_ratio)};
}

Outcome half_integer_modulus() {
  const AngularSolution half(0.5, 0.5, 0.5);
  bool ok = check_modulus_periodicity(half).periodic && !check_full_periodicity(half).periodic;
  std::mt19937_64 rng(1729);
  std::uniform_int_distribution<int> kind(0, 2), whole(0, 6), zero(0, 4);
  std::uniform_real_distribution<double> any(0.0, 6.0), amp(-1.0, 1.0);
  int counter = 0, full = 0, modulus = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = kind(rng);
    const double nu = k == 0 ? whole(rng) : k == 1 ? whole(rng) + 0.5 : any(rng);
    Complex a(amp(rng), amp(rng)), b(amp(rng), amp(rng));
    if (zero(rng) == 0) b = 0.0;
    else if (zero(rng) == 0) a = 0.0;
    const AngularSolution s(nu, a, b);
    const bool f = check_full_periodicity(s).periodic, m = check_modulus_periodicity(s).periodic;
    full += f;
    modulus += m;
    counter += f && !m;
  }
  ok = ok && counter == 0;
  return {ok, "cos(phi/2) modulus-periodic only; 1000 trials: " + std::to_string(full) + " full, " +
                  std::to_string(modulus) + " modulus, " + std::to_string(counter) + " counterexamples"};
}

Outcome radial_eigenvalues() {
  double worst = 0.0;
  for (int nu = 0; nu <= 2; ++nu)
    for (int n = 0; n <= 1; ++n) {
      const double z = oracle::bessel_zero_bisect(nu, n + 1);
      worst = std::max(worst, std::abs(solve_radial(Potential::free(), nu, 1.0, n).k - z) / z);
    }
  const double e = solve_radial(Potential::harmonic(1.0), 0.0, 12.0, 0).energy;
  const double ref = oracle::harmonic_2d_ground(1.0, 10.0, 1999);
  const bool ok = worst <= 1e-6 && std::abs(e - ref) <= 1e-4;
  return {ok, "free k max rel error " + num(worst) + "; harmonic ground " + num(e) + " vs finite-difference oracle " +
                  std::to_string(ref)};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  verify::ScenarioConfig cfg;
  cfg.kind = verify::ScenarioKind::sum_rule;
  cfg.name = "determinism";
  cfg.grid = CartesianGrid(-2, 2, -2, 2, 128, 128);
  cfg.seed = 987654321;
  cfg.sum_rule.trials = 20;
  const fs::path base = fs::temp_directory_path() / ("qhydro-acceptance-" + std::to_string(::getpid()));
  verify::write_outputs(verify::run(cfg, 1), base / "a");
  verify::write_outputs(verify::run(cfg, 3), base / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = slurp(base / "a" / "report.json"), b = slurp(base / "b" / "report.json");
  fs::remove_all(base);
  const bool ok = !a.empty() && a == b;
  return {ok, "two runs (1 and 3 jobs), report.json " + std::to_string(a.size()) + " bytes, " +
                  (ok ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"circulation quantization", circulation_quantization},
      {"radial first-derivative term", radial_correction},
      {"spuriosity classification", spuriosity_classification},
      {"plane-wave expandability", plane_wave_expandability},
      {"stationary equivalence", stationary_equivalence},
      {"multi-vortex sum rule", sum_rule},
      {"singularity cancellation", singularity_cancellation},
      {"half-integer modulus case", half_integer_modulus},
      {"radial eigenvalues", radial_eigenvalues},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %2zu  %-30s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
