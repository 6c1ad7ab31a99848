#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace verify {

// One row per case in config order. `details` holds the scenario-specific
// metrics (see README for the field list).
struct CaseResult {
  std::string id;
  bool pass = false;
  std::optional<std::string> error;
  nlohmann::json details = nlohmann::json::object();
};

struct ConvergenceRow {
  std::string case_id;
  int level = 0;
  double h = 0.0;
  double energy_l2 = 0.0;
  double continuity_l2 = 0.0;
  double masked_fraction = 0.0;
};

struct ProfileRow {
  std::string case_id;
  double radius = 0.0;
  double kinetic = 0.0;
  double neg_quantum = 0.0;
  double sum = 0.0;
};

struct BranchRow {
  double nu = 0.0;
  double branch_jump = 0.0;
  double closed_form = 0.0;
  std::size_t coefficients = 0;
  double expansion_error = 0.0;
};

struct Timing {
  std::string case_id;
  double seconds = 0.0;
};

struct RunReport {
  std::string scenario;
  std::string name;
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;
  std::vector<ConvergenceRow> convergence;
  std::vector<ProfileRow> profiles;
  std::vector<BranchRow> branch_jump;
  // Wall-clock data is kept out of report.json so that reruns compare
  // byte for byte; it goes to timings.csv instead.
  std::vector<Timing> timings;

  bool all_pass() const;
};

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

// Writes report.json, cases.csv, convergence.csv, profiles.csv,
// branch_jump.csv, timings.csv and plot.py into dir (created if needed).
// Throws std::runtime_error naming the path when it cannot be written.
void write_outputs(const RunReport& r, const std::filesystem::path& dir);

// Human-readable summary, one line per case plus a total.
std::string summary_text(const RunReport& r);

}  // namespace verify
