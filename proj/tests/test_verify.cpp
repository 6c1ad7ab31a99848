#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "report.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string parse_error(const json& doc) {
  try {
    verify::parse_config(doc);
  } catch (const verify::ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("qhydro-verify-" + tag);
  fs::remove_all(p);
  return p;
}

const json kSumRule = {{"scenario", "sum-rule"},
                       {"name", "small"},
                       {"seed", 42},
                       {"grid", {{"kind", "cartesian"}, {"x_min", -2}, {"x_max", 2}, {"y_min", -2}, {"y_max", 2}, {"nx", 96}, {"ny", 96}}},
                       {"sum-rule", {{"trials", 8}}}};

}  // namespace

TEST_CASE("config errors name the offending field") {
  json doc = {{"scenario", "quantization"},
              {"potential", {{"name", "harmonic"}}},
              {"grid", {{"kind", "cartesian"}, {"x_min", -4}, {"x_max", 4}, {"y_min", -4}, {"y_max", 4}, {"nx", 64}, {"ny", 64}}},
              {"quantization", {{"nu", {1}}, {"r_max", 8.0}, {"loops", {{{"radius", 1.0}}}}}}};
  CHECK(parse_error(doc).find("potential.omega") != std::string::npos);

  doc["potential"]["omega"] = 1.0;
  CHECK(parse_error(doc).empty());

  doc["potential"]["omgea"] = 1.0;
  CHECK(parse_error(doc).find("potential.omgea") != std::string::npos);
  doc["potential"].erase("omgea");

  doc["scenario"] = "vorticity";
  CHECK(parse_error(doc).find("scenario") != std::string::npos);
  doc["scenario"] = "quantization";

  doc["grid"]["nx"] = -3;
  CHECK(parse_error(doc).find("grid.nx") != std::string::npos);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"quantization", "spuriosity", "equivalence", "sum_rule"}) {
    CAPTURE(name);
    CHECK_NOTHROW(verify::load_config(std::string(QHYDRO_CONFIG_DIR) + "/" + name + ".json"));
  }
  CHECK_THROWS_AS(verify::load_config("/nonexistent/config.json"), verify::ConfigError);
}

TEST_CASE("report json round trip") {
  const auto rep = verify::run(verify::parse_config(kSumRule), 1);
  REQUIRE(rep.cases.size() == 10);
  const json j = verify::to_json(rep);
  CHECK(j.at("schema_version") == verify::kReportSchemaVersion);
  CHECK(j.at("summary").at("cases") == 10);
  const auto back = verify::report_from_json(j);
  CHECK(verify::to_json(back) == j);
  CHECK(back.all_pass() == rep.all_pass());
  CHECK(rep.all_pass());
}

TEST_CASE("reruns with the same seed are byte identical; a new seed is not") {
  auto cfg = verify::parse_config(kSumRule);
  const auto dir = scratch("rerun");
  verify::write_outputs(verify::run(cfg, 1), dir / "a");
  verify::write_outputs(verify::run(cfg, 2), dir / "b");
  cfg.seed = 43;
  verify::write_outputs(verify::run(cfg, 1), dir / "c");
  const auto a = slurp(dir / "a" / "report.json");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b" / "report.json"));
  CHECK(a != slurp(dir / "c" / "report.json"));
  CHECK(slurp(dir / "a" / "cases.csv") == slurp(dir / "b" / "cases.csv"));
  fs::remove_all(dir);
}

TEST_CASE("equivalence run writes one convergence row per level") {
  const json doc = {{"scenario", "equivalence"},
                    {"potential", {{"name", "free"}}},
                    {"equivalence",
                     {{"states", {{{"nu", 0}, {"n", 0}, {"r_max", 1.0}}, {{"nu", 1}, {"n", 0}, {"r_max", 1.0}}}},
                      {"levels", {{{"nr", 100}, {"nphi", 32}}, {{"nr", 200}, {"nphi", 64}}, {{"nr", 400}, {"nphi", 128}}}}}}};
  const auto rep = verify::run(verify::parse_config(doc), 1);
  CHECK(rep.all_pass());
  CHECK(rep.convergence.size() == 6);
  for (const auto& c : rep.cases) {
    CAPTURE(c.id);
    int rows = 0;
    for (const auto& r : rep.convergence) rows += r.case_id == c.id;
    CHECK(rows == 3);
  }

  const auto dir = scratch("csv");
  verify::write_outputs(rep, dir);
  CHECK(first_line(dir / "cases.csv") ==
        "case,pass,error,j,defect,circulation,energy_order,continuity_order,branch_jump,expansion_error,verdict,enclosed_sum");
  CHECK(first_line(dir / "convergence.csv").rfind("case,level,h,", 0) == 0);
  for (const char* f : {"report.json", "profiles.csv", "branch_jump.csv", "timings.csv", "plot.py"}) CHECK(fs::exists(dir / f));
  fs::remove_all(dir);
}

TEST_CASE("spuriosity verdicts through the runner") {
  const json doc = {{"scenario", "spuriosity"},
                    {"grid", {{"kind", "polar"}, {"r_max", 6.0}, {"nr", 64}, {"nphi", 64}}},
                    {"spuriosity", {{"cases", {0, 0.5, 1.5, 2, 3}}, {"k", 1.0}, {"sweep", {64}}}}};
  const auto rep = verify::run(verify::parse_config(doc), 1);
  REQUIRE(rep.cases.size() == 5);
  const char* expected[] = {"physical", "spurious", "spurious", "physical", "physical"};
  for (int i = 0; i < 5; ++i) {
    CAPTURE(rep.cases[i].id);
    CHECK(rep.cases[i].details.at("verdict") == expected[i]);
    CHECK(rep.cases[i].pass);
  }
  CHECK(rep.branch_jump.size() == 5);

  // A wrong expectation fails the case rather than the run.
  json wrong = doc;
  wrong["spuriosity"]["cases"] = {{{"nu", 0.5}, {"expect", "physical"}}};
  const auto bad = verify::run(verify::parse_config(wrong), 1);
  CHECK_FALSE(bad.all_pass());
}
