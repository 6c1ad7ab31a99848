#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace verify {

using nlohmann::json;

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::quantization: return "quantization";
    case ScenarioKind::spuriosity: return "spuriosity";
    case ScenarioKind::equivalence: return "equivalence";
    case ScenarioKind::sum_rule: return "sum-rule";
  }
  return "?";
}

qhydro::Potential PotentialSpec::make(const qhydro::PhysicalConstants& c) const {
  if (name == "harmonic") return qhydro::Potential::harmonic(omega, c.mass);
  if (name == "polynomial") return qhydro::Potential::radial_polynomial(coefficients);
  return qhydro::Potential::free();
}

namespace {

// A json value together with its path in the document, so that every
// complaint names the field.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) Node(j_, child(key)).fail("missing required field");
    return Node(j_.at(key), child(key));
  }

  std::optional<Node> find(const char* key) const {
    if (!has(key)) return std::nullopt;
    return Node(j_.at(key), child(key));
  }

  Node item(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items())
      if (!allowed.count(k)) Node(v, child(k.c_str())).fail("unknown field");
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  std::size_t count(long long min) const {
    const long long v = integer();
    if (v < min) fail("must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  qhydro::Point point() const {
    if (array_size() != 2) fail("expected [x, y]");
    return {item(0).number(), item(1).number()};
  }

 private:
  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

template <typename T, typename F>
std::vector<T> list(const Node& n, F each) {
  std::vector<T> out;
  const std::size_t size = n.array_size();
  if (size == 0) n.fail("must not be empty");
  for (std::size_t i = 0; i < size; ++i) out.push_back(each(n.item(i)));
  return out;
}

PotentialSpec parse_potential(const Node& n) {
  PotentialSpec p;
  p.name = n.at("name").string();
  if (p.name == "free") {
    n.only({"name"});
  } else if (p.name == "harmonic") {
    n.only({"name", "omega"});
    p.omega = n.at("omega").positive();
  } else if (p.name == "polynomial") {
    n.only({"name", "coefficients"});
    p.coefficients = list<double>(n.at("coefficients"), [](const Node& c) { return c.number(); });
  } else {
    n.at("name").fail("unknown potential '" + p.name + "' (free | harmonic | polynomial)");
  }
  return p;
}

template <typename Make>
auto guarded(const Node& n, Make make) {
  try {
    return make();
  } catch (const qhydro::Error& e) {
    n.fail(e.what());
  }
}

qhydro::CartesianGrid parse_cartesian(const Node& n) {
  n.only({"kind", "x_min", "x_max", "y_min", "y_max", "nx", "ny"});
  const double x0 = n.at("x_min").number(), x1 = n.at("x_max").number();
  const double y0 = n.at("y_min").number(), y1 = n.at("y_max").number();
  const std::size_t nx = n.at("nx").count(16), ny = n.at("ny").count(16);
  return guarded(n, [&] { return qhydro::CartesianGrid(x0, x1, y0, y1, nx, ny); });
}

qhydro::Grid parse_grid(const Node& n) {
  const std::string kind = n.at("kind").string();
  if (kind == "cartesian") return parse_cartesian(n);
  if (kind == "polar") {
    n.only({"kind", "r_max", "nr", "nphi"});
    const double r_max = n.at("r_max").positive();
    const std::size_t nr = n.at("nr").count(4), nphi = n.at("nphi").count(4);
    return guarded(n, [&] { return qhydro::PolarGrid::half_cell(r_max, nr, nphi); });
  }
  n.at("kind").fail("unknown grid kind '" + kind + "' (cartesian | polar)");
}

LoopSpec parse_loop(const Node& n) {
  n.only({"shape", "center", "radius", "half_side", "samples"});
  LoopSpec l;
  if (auto s = n.find("shape")) l.shape = s->string();
  if (auto c = n.find("center")) l.center = c->point();
  if (l.shape == "circle") {
    l.size = n.at("radius").positive();
  } else if (l.shape == "square") {
    l.size = n.at("half_side").positive();
  } else {
    n.at("shape").fail("unknown loop shape '" + l.shape + "' (circle | square)");
  }
  if (auto s = n.find("samples")) l.samples = s->count(64);
  return l;
}

void parse_tolerances(const Node& n, Tolerances& t) {
  n.only({"defect", "spread", "jump", "expansion", "min_order", "round_off"});
  if (auto v = n.find("defect")) t.defect = v->positive();
  if (auto v = n.find("spread")) t.spread = v->positive();
  if (auto v = n.find("jump")) t.jump = v->positive();
  if (auto v = n.find("expansion")) t.expansion = v->positive();
  if (auto v = n.find("min_order")) t.min_order = v->positive();
  if (auto v = n.find("round_off")) t.round_off = v->positive();
}

void parse_quantization(const Node& n, ScenarioConfig& cfg) {
  n.only({"nu", "n", "r_max", "loops", "profiles"});
  auto& q = cfg.quantization;
  q.nu = list<int>(n.at("nu"), [](const Node& v) { return static_cast<int>(v.integer()); });
  for (std::size_t i = 0; i < q.nu.size(); ++i)
    if (std::abs(q.nu[i]) >= 50) n.at("nu").item(i).fail("|nu| must be < 50");
  if (auto v = n.find("n")) q.n = list<int>(*v, [](const Node& x) { return static_cast<int>(x.count(0)); });
  q.r_max = n.at("r_max").positive();
  q.loops = list<LoopSpec>(n.at("loops"), parse_loop);
  if (auto v = n.find("profiles")) q.profiles = v->boolean();
  if (!cfg.grid || !std::holds_alternative<qhydro::CartesianGrid>(*cfg.grid))
    Node(json(), "grid").fail("quantization needs a cartesian grid");
}

void parse_spuriosity(const Node& n, ScenarioConfig& cfg) {
  n.only({"cases", "k", "coefficients", "sweep", "window", "cross_check"});
  auto& s = cfg.spuriosity;
  s.cases = list<SpuriosityCase>(n.at("cases"), [](const Node& c) {
    SpuriosityCase out;
    if (c.raw().is_number()) {
      out.nu = c.number();
    } else {
      c.only({"nu", "expect"});
      out.nu = c.at("nu").number();
      if (auto e = c.find("expect")) {
        const std::string v = e->string();
        if (v == "physical") out.expect = qhydro::Verdict::physical;
        else if (v == "spurious") out.expect = qhydro::Verdict::spurious;
        else e->fail("expected \"physical\" or \"spurious\"");
      }
    }
    if (!(out.nu >= 0.0 && out.nu < 50.0)) c.fail("nu must lie in [0, 50)");
    return out;
  });
  s.k = n.at("k").positive();
  auto pow2 = [](const Node& v) {
    const std::size_t c = v.count(64);
    if ((c & (c - 1)) != 0) v.fail("must be a power of two");
    return c;
  };
  if (auto v = n.find("coefficients")) s.coefficients = pow2(*v);
  if (auto v = n.find("sweep")) s.sweep = list<std::size_t>(*v, pow2);
  if (auto w = n.find("window")) {
    w->only({"kr_min", "kr_max", "radial_samples", "angular_samples"});
    if (auto v = w->find("kr_min")) s.window.kr_min = v->positive();
    if (auto v = w->find("kr_max")) s.window.kr_max = v->positive();
    if (auto v = w->find("radial_samples")) s.window.radial_samples = v->count(2);
    if (auto v = w->find("angular_samples")) s.window.angular_samples = v->count(8);
    if (!(s.window.kr_max > s.window.kr_min)) w->fail("kr_max must exceed kr_min");
  }
  if (auto c = n.find("cross_check")) s.cross_check = parse_cartesian(*c);
  if (!cfg.grid) Node(json(), "grid").fail("missing required field");
}

void parse_equivalence(const Node& n, ScenarioConfig& cfg) {
  n.only({"states", "levels"});
  auto& e = cfg.equivalence;
  e.states = list<EquivalenceState>(n.at("states"), [&](const Node& s) {
    s.only({"potential", "nu", "n", "r_max"});
    EquivalenceState st;
    st.potential = s.has("potential") ? parse_potential(s.at("potential")) : cfg.potential;
    st.nu = s.at("nu").number();
    if (!(st.nu >= 0.0 && st.nu < 50.0)) s.at("nu").fail("must lie in [0, 50)");
    st.n = static_cast<int>(s.at("n").count(0));
    st.r_max = s.at("r_max").positive();
    return st;
  });
  e.levels = list<GridLevel>(n.at("levels"), [](const Node& l) {
    l.only({"nr", "nphi"});
    GridLevel g{l.at("nr").count(4), l.at("nphi").count(4)};
    if (g.nphi % 2) l.at("nphi").fail("must be even");
    return g;
  });
  if (e.levels.size() < 2) n.at("levels").fail("need at least two grid levels");
}

void parse_sum_rule(const Node& n, ScenarioConfig& cfg) {
  n.only({"trials", "max_vortices", "max_winding", "loop_center", "loop_radius", "loop_clearance",
          "separation", "placement_radius", "fixed_cases"});
  auto& s = cfg.sum_rule;
  if (auto v = n.find("trials")) s.trials = static_cast<int>(v->count(1));
  if (auto v = n.find("max_vortices")) s.max_vortices = static_cast<int>(v->count(1));
  if (auto v = n.find("max_winding")) s.max_winding = static_cast<int>(v->count(1));
  if (auto v = n.find("loop_center")) s.loop_center = v->point();
  if (auto v = n.find("loop_radius")) s.loop_radius = v->positive();
  if (auto v = n.find("loop_clearance")) s.loop_clearance = v->positive();
  if (auto v = n.find("separation")) s.separation = v->positive();
  if (auto v = n.find("placement_radius")) s.placement_radius = v->positive();
  if (auto v = n.find("fixed_cases")) s.fixed_cases = v->boolean();
  if (!cfg.grid || !std::holds_alternative<qhydro::CartesianGrid>(*cfg.grid))
    Node(json(), "grid").fail("sum-rule needs a cartesian grid");
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  const Node root(doc, "");
  root.only({"scenario", "name", "constants", "potential", "grid", "seed", "tolerances", "output",
             "quantization", "spuriosity", "equivalence", "sum-rule"});
  ScenarioConfig cfg;
  const std::string kind = root.at("scenario").string();
  if (kind == "quantization") cfg.kind = ScenarioKind::quantization;
  else if (kind == "spuriosity") cfg.kind = ScenarioKind::spuriosity;
  else if (kind == "equivalence") cfg.kind = ScenarioKind::equivalence;
  else if (kind == "sum-rule") cfg.kind = ScenarioKind::sum_rule;
  else root.at("scenario").fail("unknown scenario '" + kind + "' (quantization | spuriosity | equivalence | sum-rule)");

  cfg.name = root.has("name") ? root.at("name").string() : kind;
  if (auto c = root.find("constants")) {
    c->only({"hbar", "mass"});
    if (auto v = c->find("hbar")) cfg.constants.hbar = v->positive();
    if (auto v = c->find("mass")) cfg.constants.mass = v->positive();
  }
  if (auto p = root.find("potential")) cfg.potential = parse_potential(*p);
  if (auto g = root.find("grid")) cfg.grid = parse_grid(*g);
  if (auto s = root.find("seed")) {
    const json& v = s->raw();
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      s->fail("expected a non-negative integer");
    cfg.seed = s->raw().get<std::uint64_t>();
  }
  if (auto t = root.find("tolerances")) parse_tolerances(*t, cfg.tolerances);
  if (auto o = root.find("output")) cfg.out_dir = o->string();

  switch (cfg.kind) {
    case ScenarioKind::quantization: parse_quantization(root.at("quantization"), cfg); break;
    case ScenarioKind::spuriosity: parse_spuriosity(root.at("spuriosity"), cfg); break;
    case ScenarioKind::equivalence: parse_equivalence(root.at("equivalence"), cfg); break;
    case ScenarioKind::sum_rule: parse_sum_rule(root.at("sum-rule"), cfg); break;
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace verify
