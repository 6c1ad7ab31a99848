#include "report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace verify {

using nlohmann::json;

bool RunReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return !cases.empty();
}

json to_json(const RunReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = r.scenario;
  j["name"] = r.name;
  j["seed"] = r.seed;
  json cases = json::array();
  std::size_t passed = 0;
  for (const auto& c : r.cases) {
    json cj;
    cj["id"] = c.id;
    cj["pass"] = c.pass;
    cj["error"] = c.error ? json(*c.error) : json(nullptr);
    cj["details"] = c.details;
    cases.push_back(std::move(cj));
    passed += c.pass ? 1 : 0;
  }
  j["cases"] = std::move(cases);
  json conv = json::array();
  for (const auto& row : r.convergence)
    conv.push_back({{"case", row.case_id}, {"level", row.level}, {"h", row.h}, {"energy_l2", row.energy_l2},
                    {"continuity_l2", row.continuity_l2}, {"masked_fraction", row.masked_fraction}});
  j["convergence"] = std::move(conv);
  json prof = json::array();
  for (const auto& row : r.profiles)
    prof.push_back({{"case", row.case_id}, {"radius", row.radius}, {"kinetic", row.kinetic},
                    {"neg_quantum", row.neg_quantum}, {"sum", row.sum}});
  j["profiles"] = std::move(prof);
  json br = json::array();
  for (const auto& row : r.branch_jump)
    br.push_back({{"nu", row.nu}, {"branch_jump", row.branch_jump}, {"closed_form", row.closed_form},
                  {"coefficients", row.coefficients}, {"expansion_error", row.expansion_error}});
  j["branch_jump"] = std::move(br);
  j["summary"] = {{"cases", r.cases.size()}, {"passed", passed}, {"all_pass", r.all_pass()}};
  return j;
}

RunReport report_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::runtime_error("report: unsupported schema_version");
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.name = j.at("name").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& cj : j.at("cases")) {
    CaseResult c;
    c.id = cj.at("id").get<std::string>();
    c.pass = cj.at("pass").get<bool>();
    if (!cj.at("error").is_null()) c.error = cj.at("error").get<std::string>();
    c.details = cj.at("details");
    r.cases.push_back(std::move(c));
  }
  for (const auto& row : j.at("convergence"))
    r.convergence.push_back({row.at("case").get<std::string>(), row.at("level").get<int>(), row.at("h").get<double>(),
                             row.at("energy_l2").get<double>(), row.at("continuity_l2").get<double>(),
                             row.at("masked_fraction").get<double>()});
  for (const auto& row : j.at("profiles"))
    r.profiles.push_back({row.at("case").get<std::string>(), row.at("radius").get<double>(),
                          row.at("kinetic").get<double>(), row.at("neg_quantum").get<double>(),
                          row.at("sum").get<double>()});
  for (const auto& row : j.at("branch_jump"))
    r.branch_jump.push_back({row.at("nu").get<double>(), row.at("branch_jump").get<double>(),
                             row.at("closed_form").get<double>(), row.at("coefficients").get<std::size_t>(),
                             row.at("expansion_error").get<double>()});
  return r;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
  out << std::setprecision(12);
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& p) {
  out.close();
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// Scalar details flattened into a fixed column set for cases.csv.
std::string detail(const json& d, const char* key) {
  if (!d.contains(key)) return "";
  const auto& v = d.at(key);
  if (v.is_null()) return "";
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    return os.str();
  }
  return "";
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plots for a verify run. Usage: python3 plot.py [output-dir]"""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))


def rows(name):
    path = os.path.join(here, name)
    if not os.path.exists(path):
        return []
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def by_case(data):
    out = {}
    for r in data:
        out.setdefault(r["case"], []).append(r)
    return out


conv = by_case(rows("convergence.csv"))
if conv:
    fig, ax = plt.subplots(1, 2, figsize=(10, 4))
    for case, rs in conv.items():
        h = [float(r["h"]) for r in rs]
        ax[0].loglog(h, [float(r["energy_l2"]) for r in rs], "o-", label=case)
        c = [float(r["continuity_l2"]) for r in rs]
        if all(v > 0 for v in c):
            ax[1].loglog(h, c, "o-", label=case)
    ax[0].set_title("energy balance residual")
    ax[1].set_title("continuity residual")
    for a in ax:
        a.set_xlabel("h")
        a.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "convergence.png"), dpi=120)

prof = by_case(rows("profiles.csv"))
if prof:
    fig, ax = plt.subplots(figsize=(6, 4))
    for case, rs in prof.items():
        r = [float(x["radius"]) for x in rs]
        ax.loglog(r, [float(x["kinetic"]) for x in rs], "-", label=case + " kinetic")
        ax.loglog(r, [float(x["neg_quantum"]) for x in rs], "--", label=case + " -Q")
    ax.set_xlabel("distance from node")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "profiles.png"), dpi=120)

bj = rows("branch_jump.csv")
if bj:
    fig, ax = plt.subplots(1, 2, figsize=(10, 4))
    seen = set()
    nus = []
    for r in bj:
        if r["nu"] not in seen:
            seen.add(r["nu"])
            nus.append(r)
    ax[0].plot([float(r["nu"]) for r in nus], [float(r["branch_jump"]) for r in nus], "o", label="measured")
    ax[0].plot([float(r["nu"]) for r in nus], [float(r["closed_form"]) for r in nus], "x", label="closed form")
    ax[0].set_xlabel("nu")
    ax[0].set_title("branch jump")
    ax[0].legend()
    for nu in sorted({r["nu"] for r in bj}, key=float):
        pts = [r for r in bj if r["nu"] == nu]
        ax[1].semilogy([int(r["coefficients"]) for r in pts],
                       [max(float(r["expansion_error"]), 1e-17) for r in pts], "o-", label="nu=" + nu)
    ax[1].set_xlabel("N")
    ax[1].set_title("plane-wave fit error")
    ax[1].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "branch_jump.png"), dpi=120)
)PY";

}  // namespace

void write_outputs(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error(dir.string() + ": cannot create output directory");

  {
    const auto p = dir / "report.json";
    auto out = open_out(p);
    out << to_json(r).dump(2) << '\n';
    close_out(out, p);
  }
  {
    const auto p = dir / "cases.csv";
    auto out = open_out(p);
    out << "case,pass,error,j,defect,circulation,energy_order,continuity_order,branch_jump,"
           "expansion_error,verdict,enclosed_sum\n";
    for (const auto& c : r.cases) {
      const auto& d = c.details;
      out << csv_field(c.id) << ',' << (c.pass ? "true" : "false") << ',' << csv_field(c.error.value_or("")) << ','
          << detail(d, "j") << ',' << detail(d, "max_defect") << ',' << detail(d, "circulation") << ','
          << detail(d, "min_energy_order") << ',' << detail(d, "min_continuity_order") << ','
          << detail(d, "branch_jump") << ',' << detail(d, "expansion_error") << ',' << detail(d, "verdict") << ','
          << detail(d, "enclosed_sum") << '\n';
    }
    close_out(out, p);
  }
  {
    const auto p = dir / "convergence.csv";
    auto out = open_out(p);
    out << "case,level,h,energy_l2,continuity_l2,masked_fraction\n";
    for (const auto& row : r.convergence)
      out << csv_field(row.case_id) << ',' << row.level << ',' << row.h << ',' << row.energy_l2 << ','
          << row.continuity_l2 << ',' << row.masked_fraction << '\n';
    close_out(out, p);
  }
  {
    const auto p = dir / "profiles.csv";
    auto out = open_out(p);
    out << "case,radius,kinetic,neg_quantum,sum\n";
    for (const auto& row : r.profiles)
      out << csv_field(row.case_id) << ',' << row.radius << ',' << row.kinetic << ',' << row.neg_quantum << ','
          << row.sum << '\n';
    close_out(out, p);
  }
  {
    const auto p = dir / "branch_jump.csv";
    auto out = open_out(p);
    out << "nu,branch_jump,closed_form,coefficients,expansion_error\n";
    for (const auto& row : r.branch_jump)
      out << row.nu << ',' << row.branch_jump << ',' << row.closed_form << ',' << row.coefficients << ','
          << row.expansion_error << '\n';
    close_out(out, p);
  }
  {
    const auto p = dir / "timings.csv";
    auto out = open_out(p);
    out << "case,seconds\n";
    for (const auto& t : r.timings) out << csv_field(t.case_id) << ',' << t.seconds << '\n';
    close_out(out, p);
  }
  {
    const auto p = dir / "plot.py";
    auto out = open_out(p);
    out << kPlotScript;
    close_out(out, p);
  }
}

std::string summary_text(const RunReport& r) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : r.cases) {
    os << (c.pass ? "PASS " : "FAIL ") << r.scenario << ' ' << c.id;
    if (c.error) os << "  error: " << *c.error;
    os << '\n';
    passed += c.pass ? 1 : 0;
  }
  os << passed << '/' << r.cases.size() << " cases passed (" << r.name << ", seed " << r.seed << ")\n";
  return os.str();
}

}  // namespace verify
