// verify <config-path> [--out DIR] [--jobs N] [--seed U64]
//
// Environment: VERIFY_OUT_DIR and VERIFY_JOBS supply defaults; flags win.
// Exit status: 0 all cases pass, 1 some case failed, 2 bad config or
// unwritable output.

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "report.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Batch verification of stationary Madelung / Schroedinger scenarios"};
  std::string config_path;
  std::optional<std::string> out_flag;
  std::optional<std::size_t> jobs_flag;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("config", config_path, "scenario config (JSON)")->required();
  app.add_option("--out", out_flag, "output directory (env VERIFY_OUT_DIR)");
  app.add_option("--jobs", jobs_flag, "concurrent cases (env VERIFY_JOBS)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_flag, "RNG seed, overrides the config");
  CLI11_PARSE(app, argc, argv);

  try {
    verify::ScenarioConfig cfg = verify::load_config(config_path);
    if (seed_flag) cfg.seed = *seed_flag;

    std::string out_dir = cfg.out_dir.value_or("verify-out");
    if (const char* env = std::getenv("VERIFY_OUT_DIR"); env && *env) out_dir = env;
    if (out_flag) out_dir = *out_flag;

    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("VERIFY_JOBS"); env && *env) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (*end != '\0' || v == 0) throw verify::ConfigError(std::string("VERIFY_JOBS: expected a positive integer, got '") + env + "'");
      jobs = v;
    }
    if (jobs_flag) jobs = *jobs_flag;

    const verify::RunReport report = verify::run(cfg, jobs);
    verify::write_outputs(report, out_dir);
    std::cout << verify::summary_text(report) << "outputs in " << out_dir << '\n';
    return report.all_pass() ? 0 : 1;
  } catch (const verify::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
