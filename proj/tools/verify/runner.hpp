#pragma once

#include <cstddef>

#include "config.hpp"
#include "report.hpp"

namespace verify {

// Runs every case of the scenario, up to `jobs` at a time. Numerical
// errors are recorded on the failing case; the report is ordered by
// config order and does not depend on `jobs`.
RunReport run(const ScenarioConfig& cfg, std::size_t jobs = 1);

}  // namespace verify
