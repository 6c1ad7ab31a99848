#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "qhydro/madelung.hpp"
#include "qhydro/separable.hpp"
#include "qhydro/special_functions.hpp"
#include "qhydro/spurious.hpp"
#include "qhydro/topology.hpp"

namespace verify {

using nlohmann::json;
using namespace qhydro;

namespace {

struct CaseOutput {
  CaseResult result;
  std::vector<ConvergenceRow> convergence;
  std::vector<ProfileRow> profiles;
  std::vector<BranchRow> branch;
};

struct Task {
  std::string id;
  std::function<void(CaseOutput&)> body;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

LoopPath make_loop(const LoopSpec& l) {
  return l.shape == "square" ? LoopPath::square(l.center, l.size, l.samples)
                             : LoopPath::circle(l.center, l.size, l.samples);
}

AngularSolution winding_state(double nu) {
  if (nu == std::floor(nu)) return AngularSolution::normalized_winding(static_cast<int>(nu));
  return AngularSolution(nu, 1.0 / std::sqrt(kTwoPi));
}

// ---------------------------------------------------------------------------

void quantization_case(const ScenarioConfig& cfg, int nu, int n, CaseOutput& out) {
  const auto& q = cfg.quantization;
  const auto& c = cfg.constants;
  const Potential u = cfg.potential.make(c);
  const RadialSolution rad = solve_radial(u, std::abs(nu), q.r_max, n, c);
  const ScalarField2D psi = assemble_separable_state(AngularSolution::normalized_winding(nu), rad, *cfg.grid);

  auto& d = out.result.details;
  d["nu"] = nu;
  d["n"] = n;
  d["energy"] = rad.energy;
  json loops = json::array();
  bool all_j = true;
  double max_defect = 0.0, lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < q.loops.size(); ++i) {
    const WindingResult w = circulation(psi, make_loop(q.loops[i]), c);
    loops.push_back({{"shape", q.loops[i].shape}, {"size", q.loops[i].size}, {"j", w.j},
                     {"circulation", w.circulation}, {"defect", w.defect}, {"samples", w.samples}});
    all_j = all_j && w.j == nu;
    max_defect = std::max(max_defect, w.defect);
    lo = i ? std::min(lo, w.circulation) : w.circulation;
    hi = i ? std::max(hi, w.circulation) : w.circulation;
  }
  const double spread = (hi - lo) / (kTwoPi * c.hbar);
  d["j"] = loops.front()["j"];
  d["circulation"] = loops.front()["circulation"];
  d["max_defect"] = max_defect;
  d["spread"] = spread;
  d["loops"] = std::move(loops);
  out.result.pass = all_j && max_defect <= cfg.tolerances.defect && spread <= cfg.tolerances.spread;

  if (q.profiles && nu != 0) {
    try {
      const auto fields = decompose(psi, c);
      const auto probe = singularity_cancellation_probe(fields, u, rad.energy, c, {0.0, 0.0});
      for (const auto& ring : probe.rings)
        out.profiles.push_back({out.result.id, ring.radius, ring.kinetic, ring.neg_quantum, ring.sum});
      d["kinetic_slope"] = probe.kinetic_slope;
      d["quantum_slope"] = probe.quantum_slope;
      d["inner_ratio"] = probe.inner_ratio;
    } catch (const Error& e) {
      d["profile_error"] = e.what();
    }
  }
}

// ---------------------------------------------------------------------------

void spuriosity_case(const ScenarioConfig& cfg, const SpuriosityCase& sc, CaseOutput& out) {
  const auto& s = cfg.spuriosity;
  SpuriosityTolerances tol;
  tol.jump = cfg.tolerances.jump;
  tol.expansion = cfg.tolerances.expansion;
  tol.coefficients = s.coefficients;
  tol.window = s.window;
  const SpuriosityReport rep = classify(sc.nu, s.k, *cfg.grid, tol);
  const CandidateState cand = build_candidate(sc.nu, s.k, *cfg.grid);
  double peak = 0.0;
  for (double r : cand.cut_radii()) peak = std::max(peak, std::abs(bessel_j(sc.nu, s.k * r)));
  const double frac = sc.nu - std::floor(sc.nu);
  const double closed = std::abs(1.0 - std::polar(1.0, kTwoPi * frac)) * peak;

  auto& d = out.result.details;
  d["nu"] = sc.nu;
  d["k"] = s.k;
  d["branch_jump"] = rep.branch_jump;
  d["closed_form"] = closed;
  d["expansion_error"] = rep.best_expansion_error;
  d["condition_number"] = rep.condition_number;
  d["verdict"] = to_string(rep.verdict);
  const Verdict expect = sc.expect.value_or(sc.nu == std::floor(sc.nu) ? Verdict::physical : Verdict::spurious);
  d["expected"] = to_string(expect);

  json sweep = json::array();
  for (std::size_t n : s.sweep) {
    const double err = n == s.coefficients ? rep.best_expansion_error
                                           : plane_wave_fit(cand, n, s.window).max_relative_error;
    sweep.push_back({{"coefficients", n}, {"error", err}});
    out.branch.push_back({sc.nu, rep.branch_jump, closed, n, err});
  }
  d["sweep"] = std::move(sweep);
  if (s.cross_check) {
    const CutResidual cr = cut_residual(sc.nu, s.k, *s.cross_check, cfg.constants);
    d["cut_residual_excluded"] = cr.excluded;
    d["cut_residual_included"] = cr.included;
  }
  const bool closed_ok = std::abs(rep.branch_jump - closed) <= cfg.tolerances.round_off;
  d["closed_form_match"] = closed_ok;
  out.result.pass = rep.verdict == expect && closed_ok;
}

// ---------------------------------------------------------------------------

double observed_order(double coarse, double fine, double h_coarse, double h_fine) {
  return std::log(coarse / fine) / std::log(h_coarse / h_fine);
}

void equivalence_case(const ScenarioConfig& cfg, const EquivalenceState& st, CaseOutput& out) {
  const auto& c = cfg.constants;
  const auto& tol = cfg.tolerances;
  const Potential u = st.potential.make(c);
  const RadialSolution rad = solve_radial(u, st.nu, st.r_max, st.n, c);
  auto& d = out.result.details;
  d["nu"] = st.nu;
  d["n"] = st.n;
  d["potential"] = st.potential.name;
  d["r_max"] = st.r_max;
  d["energy"] = rad.energy;

  std::vector<double> h, e, q;
  bool reliable = true;
  for (std::size_t lv = 0; lv < cfg.equivalence.levels.size(); ++lv) {
    const auto& level = cfg.equivalence.levels[lv];
    const PolarGrid g = PolarGrid::half_cell(st.r_max, level.nr, level.nphi);
    const auto fields = decompose(assemble_separable_state(winding_state(st.nu), rad, g), c);
    const auto rep = stationary_residuals(fields, u, rad.energy, c);
    reliable = reliable && !rep.unreliable;
    h.push_back(g.dr());
    e.push_back(rep.energy_l2);
    q.push_back(rep.continuity_l2);
    out.convergence.push_back({out.result.id, static_cast<int>(lv), g.dr(), rep.energy_l2, rep.continuity_l2,
                               rep.masked_fraction});
  }
  // A residual already at the round-off floor on both levels has nothing
  // left to converge; its order is reported as null.
  auto orders = [&](const std::vector<double>& v, bool& ok) {
    json arr = json::array();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] <= tol.round_off && v[i + 1] <= tol.round_off) {
        arr.push_back(nullptr);
        continue;
      }
      const double p = observed_order(v[i], v[i + 1], h[i], h[i + 1]);
      arr.push_back(p);
      worst = std::min(worst, p);
      if (!(p >= tol.min_order)) ok = false;
    }
    return std::make_pair(arr, worst);
  };
  bool ok_e = true, ok_q = true;
  auto [eo, ew] = orders(e, ok_e);
  auto [qo, qw] = orders(q, ok_q);
  d["energy_orders"] = eo;
  d["continuity_orders"] = qo;
  d["min_energy_order"] = std::isfinite(ew) ? json(ew) : json(nullptr);
  d["min_continuity_order"] = std::isfinite(qw) ? json(qw) : json(nullptr);
  d["continuity_at_floor"] = !std::isfinite(qw);
  d["reliable"] = reliable;
  out.result.pass = ok_e && ok_q && reliable;
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Vortex {
  Point at;
  int winding;
};

ScalarField2D vortex_field(const CartesianGrid& g, const std::vector<Vortex>& vs) {
  // Each factor z / sqrt(1 + |z|^2) keeps the zero and its winding but stays
  // bounded, so distant vortices do not swamp the node threshold.
  return build_field(g, [&](Point p) {
    Complex v = 1.0;
    for (const auto& vx : vs) {
      Complex z(p.x - vx.at.x, p.y - vx.at.y);
      z /= std::sqrt(1.0 + std::norm(z));
      for (int k = 0; k < std::abs(vx.winding); ++k) v *= vx.winding > 0 ? z : std::conj(z);
    }
    return v;
  });
}

void sum_rule_case(const ScenarioConfig& cfg, const std::vector<Vortex>& vs, CaseOutput& out) {
  const auto& s = cfg.sum_rule;
  const auto& grid = std::get<CartesianGrid>(*cfg.grid);
  const LoopPath loop = LoopPath::circle(s.loop_center, s.loop_radius);
  long inside = 0;
  json placed = json::array();
  for (const auto& v : vs) {
    const bool in = std::hypot(v.at.x - s.loop_center.x, v.at.y - s.loop_center.y) < s.loop_radius;
    inside += in ? v.winding : 0;
    placed.push_back({{"x", v.at.x}, {"y", v.at.y}, {"winding", v.winding}, {"inside", in}});
  }
  const SumRuleReport rep = sum_rule_check(vortex_field(grid, vs), loop, cfg.constants);
  auto& d = out.result.details;
  d["vortices"] = std::move(placed);
  d["j"] = rep.measured.j;
  d["circulation"] = rep.measured.circulation;
  d["max_defect"] = rep.measured.defect;
  d["enclosed_sum"] = rep.enclosed_sum;
  d["placed_sum"] = inside;
  d["detected"] = rep.enclosed.size();
  out.result.pass = rep.equal && rep.measured.j == inside;
}

std::vector<Vortex> random_placement(const ScenarioConfig& cfg, int trial) {
  const auto& s = cfg.sum_rule;
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
  std::uniform_int_distribution<int> count(1, s.max_vortices);
  std::uniform_int_distribution<int> wind(1, s.max_winding);
  std::uniform_int_distribution<int> sign(0, 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int n = count(rng);
  std::vector<Vortex> vs;
  for (int attempt = 0; static_cast<int>(vs.size()) < n && attempt < 100000; ++attempt) {
    const Point p{s.loop_center.x + s.placement_radius * unit(rng), s.loop_center.y + s.placement_radius * unit(rng)};
    const double r = std::hypot(p.x - s.loop_center.x, p.y - s.loop_center.y);
    if (r > s.placement_radius) continue;
    if (std::abs(r - s.loop_radius) < s.loop_clearance) continue;
    bool crowded = false;
    for (const auto& v : vs) crowded = crowded || std::hypot(p.x - v.at.x, p.y - v.at.y) < s.separation;
    if (crowded) continue;
    const int w = wind(rng);
    vs.push_back({p, sign(rng) ? w : -w});
  }
  return vs;
}

// ---------------------------------------------------------------------------

std::vector<Task> build_tasks(const ScenarioConfig& cfg) {
  std::vector<Task> tasks;
  switch (cfg.kind) {
    case ScenarioKind::quantization:
      for (int n : cfg.quantization.n)
        for (int nu : cfg.quantization.nu)
          tasks.push_back({"nu=" + std::to_string(nu) + ",n=" + std::to_string(n),
                           [&cfg, nu, n](CaseOutput& o) { quantization_case(cfg, nu, n, o); }});
      break;
    case ScenarioKind::spuriosity:
      for (const auto& sc : cfg.spuriosity.cases)
        tasks.push_back({"nu=" + fmt(sc.nu), [&cfg, sc](CaseOutput& o) { spuriosity_case(cfg, sc, o); }});
      break;
    case ScenarioKind::equivalence:
      for (const auto& st : cfg.equivalence.states)
        tasks.push_back({st.potential.name + ":nu=" + fmt(st.nu) + ",n=" + std::to_string(st.n),
                         [&cfg, st](CaseOutput& o) { equivalence_case(cfg, st, o); }});
      break;
    case ScenarioKind::sum_rule: {
      const auto& s = cfg.sum_rule;
      if (s.fixed_cases) {
        const Point c = s.loop_center;
        const double r = s.loop_radius;
        const std::vector<Vortex> pair = {{{c.x + 0.3 * r, c.y + 0.1 * r}, 1}, {{c.x - 0.4 * r, c.y - 0.2 * r}, -1}};
        const std::vector<Vortex> empty = {{{c.x + 0.5 * (r + s.placement_radius), c.y}, 1}};
        tasks.push_back({"pair", [&cfg, pair](CaseOutput& o) { sum_rule_case(cfg, pair, o); }});
        tasks.push_back({"empty", [&cfg, empty](CaseOutput& o) { sum_rule_case(cfg, empty, o); }});
      }
      for (int t = 0; t < s.trials; ++t)
        tasks.push_back({"trial=" + std::to_string(t),
                         [&cfg, t](CaseOutput& o) { sum_rule_case(cfg, random_placement(cfg, t), o); }});
      break;
    }
  }
  return tasks;
}

}  // namespace

RunReport run(const ScenarioConfig& cfg, std::size_t jobs) {
  const std::vector<Task> tasks = build_tasks(cfg);
  std::vector<CaseOutput> outputs(tasks.size());
  std::vector<double> seconds(tasks.size(), 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      auto& out = outputs[i];
      out.result.id = tasks[i].id;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        tasks[i].body(out);
      } catch (const std::exception& e) {
        out.result.pass = false;
        out.result.error = e.what();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t n = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  RunReport report;
  report.scenario = to_string(cfg.kind);
  report.name = cfg.name;
  report.seed = cfg.seed;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    auto& o = outputs[i];
    report.timings.push_back({o.result.id, seconds[i]});
    report.cases.push_back(std::move(o.result));
    for (auto& r : o.convergence) report.convergence.push_back(std::move(r));
    for (auto& r : o.profiles) report.profiles.push_back(std::move(r));
    for (auto& r : o.branch) report.branch_jump.push_back(std::move(r));
  }
  return report;
}

}  // namespace verify
