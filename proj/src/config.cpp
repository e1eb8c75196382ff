#include "gtoci/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "gtoci/errors.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigurationError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigurationError("unknown key '" + key + "' in config section '" + section + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Vec3 read_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigurationError("centers must be 3-element arrays");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

RunConfig::RunConfig() {
  const auto m = MorseParams::benchmark(morse.depth_hw);
  morse.r_min_dho = m.r_min_dho();
  morse.stiffness_per_dho = m.stiffness_per_dho();
}

MorseParams RunConfig::morse_params() const { return morse_params(morse.depth_hw); }

MorseParams RunConfig::morse_params(double depth_hw) const {
  return MorseParams::from_trap_units(depth_hw, morse.r_min_dho, morse.stiffness_per_dho);
}

TrapParams RunConfig::trap_params() const {
  TrapParams t;
  if (trap.kind == "harmonic") {
    t.kind = TrapKind::harmonic_isotropic;
    t.omega = trap.omega;
  } else if (trap.kind == "gaussian_wells") {
    t.kind = TrapKind::gaussian_wells;
    for (const auto& w : trap.wells) {
      GaussianWell g;
      for (int a = 0; a < 3; ++a) g.center[a] = units::length_from_dho(w.center_dho[a]);
      g.depth = units::energy_from_hw(w.depth_hw);
      g.width = units::length_from_dho(w.width_dho);
      t.wells.push_back(g);
    }
  } else {
    throw ConfigurationError("unknown trap kind '" + trap.kind + "' (expected harmonic or gaussian_wells)");
  }
  t.validate();
  return t;
}

BasisSet RunConfig::basis_set() const {
  if (basis.shells.empty()) return named_basis(basis.name);
  std::vector<ShellSpec> specs;
  for (const auto& s : basis.shells) {
    ShellSpec spec;
    spec.sigma = s.sigma;
    spec.exponents = s.exponents;
    for (int a = 0; a < 3; ++a) spec.center[a] = units::length_from_dho(s.center_dho[a]);
    specs.push_back(spec);
  }
  return expand_shells(specs, basis.name);
}

std::vector<double> RunConfig::sweep_depths() const {
  if (!sweep.values.empty()) return sweep.values;
  std::vector<double> out(static_cast<std::size_t>(sweep.points));
  if (sweep.points == 1) {
    out[0] = sweep.lo;
    return out;
  }
  const double ratio = std::log(sweep.hi / sweep.lo);
  for (int i = 0; i < sweep.points; ++i) out[i] = sweep.lo * std::exp(ratio * i / (sweep.points - 1));
  return out;
}

void RunConfig::validate() const {
  morse_params();
  trap_params();
  if (!(solver.lindep > 0.0 && solver.lindep < 1.0)) throw ConfigurationError("solver.lindep must lie in (0, 1)");
  if (solver.route != "canonical" && solver.route != "congruence")
    throw ConfigurationError("solver.route must be canonical or congruence");
  if (!(solver.integral_threshold >= 0.0)) throw ConfigurationError("solver.integral_threshold must be >= 0");
  if (!(solver.degeneracy_tol > 0.0)) throw ConfigurationError("solver.degeneracy_tol must be > 0");
  if (solver.report_states < 1) throw ConfigurationError("solver.report_states must be >= 1");
  if (sweep.values.empty()) {
    if (sweep.points < 1) throw ConfigurationError("sweep.points must be >= 1");
    if (!(sweep.lo > 0.0 && sweep.hi >= sweep.lo)) throw ConfigurationError("sweep range must satisfy 0 < lo <= hi");
  }
  for (double d : sweep.values)
    if (!(d >= 0.0)) throw ConfigurationError("sweep depths must be >= 0");
  if (scatter.points < 1 || !(scatter.lo >= 0.0) || scatter.hi < scatter.lo)
    throw ConfigurationError("scatter range must satisfy 0 <= lo <= hi with points >= 1");
  if (scatter.pole_count < 0 || !(scatter.pole_hi > scatter.pole_lo))
    throw ConfigurationError("scatter pole range must satisfy pole_lo < pole_hi");
  if (reference.n_points < 5000 || !(reference.r_max_dho >= 10.0) || reference.n_com_max < 2)
    throw ConfigurationError("reference needs n_points >= 5000, r_max >= 10 d_ho and n_com_max >= 2");
  if (converge.depths.empty() || converge.rungs.empty())
    throw ConfigurationError("converge needs at least one depth and one basis rung");
  if (density.points < 2 || !(density.z_max_dho > 0.0))
    throw ConfigurationError("density grid needs points >= 2 and z_max > 0");
  if (threads < 0) throw ConfigurationError("threads must be >= 0");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    check_keys(j, "root",
               {"trap", "morse", "basis", "solver", "sweep", "scatter", "reference", "converge", "density", "output",
                "threads"});
    if (j.contains("trap")) {
      const auto& t = j["trap"];
      check_keys(t, "trap", {"kind", "omega", "wells"});
      read(t, "kind", c.trap.kind);
      read(t, "omega", c.trap.omega);
      if (t.contains("wells")) {
        for (const auto& w : t["wells"]) {
          check_keys(w, "trap.wells", {"center", "depth", "width"});
          Well well;
          if (w.contains("center")) well.center_dho = read_vec3(w["center"]);
          read(w, "depth", well.depth_hw);
          read(w, "width", well.width_dho);
          c.trap.wells.push_back(well);
        }
      }
    }
    if (j.contains("morse")) {
      const auto& m = j["morse"];
      check_keys(m, "morse", {"De", "Rm", "am"});
      read(m, "De", c.morse.depth_hw);
      read(m, "Rm", c.morse.r_min_dho);
      read(m, "am", c.morse.stiffness_per_dho);
    }
    if (j.contains("basis")) {
      const auto& b = j["basis"];
      check_keys(b, "basis", {"name", "shells"});
      read(b, "name", c.basis.name);
      if (b.contains("shells")) {
        for (const auto& s : b["shells"]) {
          check_keys(s, "basis.shells", {"sigma", "exponents", "center"});
          Shell shell;
          read(s, "sigma", shell.sigma);
          read(s, "exponents", shell.exponents);
          if (s.contains("center")) shell.center_dho = read_vec3(s["center"]);
          c.basis.shells.push_back(shell);
        }
      }
    }
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      check_keys(s, "solver", {"lindep", "route", "integral_threshold", "degeneracy_tol", "report_states"});
      read(s, "lindep", c.solver.lindep);
      read(s, "route", c.solver.route);
      read(s, "integral_threshold", c.solver.integral_threshold);
      read(s, "degeneracy_tol", c.solver.degeneracy_tol);
      read(s, "report_states", c.solver.report_states);
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      check_keys(s, "sweep", {"values", "lo", "hi", "points"});
      read(s, "values", c.sweep.values);
      read(s, "lo", c.sweep.lo);
      read(s, "hi", c.sweep.hi);
      read(s, "points", c.sweep.points);
    }
    if (j.contains("scatter")) {
      const auto& s = j["scatter"];
      check_keys(s, "scatter", {"lo", "hi", "points", "pole_lo", "pole_hi", "pole_count"});
      read(s, "lo", c.scatter.lo);
      read(s, "hi", c.scatter.hi);
      read(s, "points", c.scatter.points);
      read(s, "pole_lo", c.scatter.pole_lo);
      read(s, "pole_hi", c.scatter.pole_hi);
      read(s, "pole_count", c.scatter.pole_count);
    }
    if (j.contains("reference")) {
      const auto& r = j["reference"];
      check_keys(r, "reference", {"n_points", "r_max", "n_com_max"});
      read(r, "n_points", c.reference.n_points);
      read(r, "r_max", c.reference.r_max_dho);
      read(r, "n_com_max", c.reference.n_com_max);
    }
    if (j.contains("converge")) {
      const auto& v = j["converge"];
      check_keys(v, "converge", {"depths", "rungs"});
      read(v, "depths", c.converge.depths);
      read(v, "rungs", c.converge.rungs);
    }
    if (j.contains("density")) {
      const auto& d = j["density"];
      check_keys(d, "density", {"states", "z_max", "points"});
      read(d, "states", c.density.states);
      read(d, "z_max", c.density.z_max_dho);
      read(d, "points", c.density.points);
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      check_keys(o, "output", {"dir", "cache_dir"});
      if (o.contains("dir")) c.out_dir = o["dir"].get<std::string>();
      if (o.contains("cache_dir")) c.cache_dir = o["cache_dir"].get<std::string>();
    }
    read(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config has a field of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

std::string RunConfig::to_json_text() const {
  json j;
  j["trap"] = {{"kind", trap.kind}, {"omega", trap.omega}};
  if (!trap.wells.empty()) {
    j["trap"]["wells"] = json::array();
    for (const auto& w : trap.wells)
      j["trap"]["wells"].push_back({{"center", w.center_dho}, {"depth", w.depth_hw}, {"width", w.width_dho}});
  }
  j["morse"] = {{"De", morse.depth_hw}, {"Rm", morse.r_min_dho}, {"am", morse.stiffness_per_dho}};
  j["basis"] = {{"name", basis.name}};
  if (!basis.shells.empty()) {
    j["basis"]["shells"] = json::array();
    for (const auto& s : basis.shells)
      j["basis"]["shells"].push_back({{"sigma", s.sigma}, {"exponents", s.exponents}, {"center", s.center_dho}});
  }
  j["solver"] = {{"lindep", solver.lindep},
                 {"route", solver.route},
                 {"integral_threshold", solver.integral_threshold},
                 {"degeneracy_tol", solver.degeneracy_tol},
                 {"report_states", solver.report_states}};
  j["sweep"] = {{"lo", sweep.lo}, {"hi", sweep.hi}, {"points", sweep.points}};
  if (!sweep.values.empty()) j["sweep"]["values"] = sweep.values;
  j["scatter"] = {{"lo", scatter.lo},           {"hi", scatter.hi},           {"points", scatter.points},
                  {"pole_lo", scatter.pole_lo}, {"pole_hi", scatter.pole_hi}, {"pole_count", scatter.pole_count}};
  j["reference"] = {
      {"n_points", reference.n_points}, {"r_max", reference.r_max_dho}, {"n_com_max", reference.n_com_max}};
  j["converge"] = {{"depths", converge.depths}, {"rungs", converge.rungs}};
  j["density"] = {{"states", density.states}, {"z_max", density.z_max_dho}, {"points", density.points}};
  j["output"] = {{"dir", out_dir.string()}, {"cache_dir", cache_dir.string()}};
  j["threads"] = threads;
  return j.dump(2);
}

}  // namespace gtoci
