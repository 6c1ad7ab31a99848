#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhydro/constants.hpp"
#include "qhydro/grid.hpp"
#include "qhydro/potential.hpp"
#include "qhydro/spurious.hpp"

namespace verify {

// Config problems, always prefixed with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { quantization, spuriosity, equivalence, sum_rule };

const char* to_string(ScenarioKind k);

struct PotentialSpec {
  std::string name = "free";  // free | harmonic | polynomial
  double omega = 0.0;
  std::vector<double> coefficients;

  qhydro::Potential make(const qhydro::PhysicalConstants& c) const;
};

struct LoopSpec {
  std::string shape = "circle";  // circle | square
  qhydro::Point center;
  double size = 1.0;  // radius or half side
  std::size_t samples = 720;
};

struct Tolerances {
  double defect = 1e-3;     // quantization defect
  double spread = 1e-6;     // loop-to-loop circulation change, in units of 2 pi hbar
  double jump = 1e-8;       // branch jump
  double expansion = 1e-6;  // plane-wave reconstruction
  double min_order = 1.9;   // refinement order
  double round_off = 1e-10; // residuals below this count as converged
};

struct QuantizationSpec {
  std::vector<int> nu;
  std::vector<int> n{0};
  double r_max = 8.0;
  std::vector<LoopSpec> loops;
  bool profiles = true;
};

struct SpuriosityCase {
  double nu = 0.0;
  std::optional<qhydro::Verdict> expect;  // default: physical iff nu is an integer
};

struct SpuriositySpec {
  std::vector<SpuriosityCase> cases;
  double k = 1.0;
  std::size_t coefficients = 64;
  std::vector<std::size_t> sweep{64, 128, 256};
  qhydro::FitWindow window;
  std::optional<qhydro::CartesianGrid> cross_check;
};

struct EquivalenceState {
  PotentialSpec potential;
  double nu = 0.0;
  int n = 0;
  double r_max = 1.0;
};

struct GridLevel {
  std::size_t nr = 0, nphi = 0;
};

struct EquivalenceSpec {
  std::vector<EquivalenceState> states;
  std::vector<GridLevel> levels;
};

struct SumRuleSpec {
  int trials = 100;
  int max_vortices = 4;
  int max_winding = 2;
  qhydro::Point loop_center;
  double loop_radius = 1.0;
  double loop_clearance = 0.15;  // minimum |distance to loop| of a vortex
  double separation = 0.1;       // minimum vortex-vortex distance
  double placement_radius = 1.6; // vortices are drawn in this disc
  bool fixed_cases = true;       // also run the pair and empty-loop cases
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::quantization;
  std::string name;
  qhydro::PhysicalConstants constants;
  PotentialSpec potential;
  std::optional<qhydro::Grid> grid;
  std::uint64_t seed = 20240229;
  Tolerances tolerances;
  std::optional<std::string> out_dir;

  QuantizationSpec quantization;
  SpuriositySpec spuriosity;
  EquivalenceSpec equivalence;
  SumRuleSpec sum_rule;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

}  // namespace verify
