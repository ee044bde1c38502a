#include "pw/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace pw {

ConfigError::ConfigError(const std::string& msg, int l)
    : std::runtime_error(l >= 0 ? "line " + std::to_string(l) + ": " + msg : msg), line(l) {}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::plane_wave: return "plane_wave";
    case ScenarioKind::reflection: return "reflection";
    case ScenarioKind::splitting: return "splitting";
    case ScenarioKind::scatterer: return "scatterer";
    case ScenarioKind::femur: return "femur";
    case ScenarioKind::zeta_sweep: return "zeta_sweep";
  }
  return "?";
}

namespace {

struct Unit {
  const char* name;
  Dimension dim;
  double scale;
};

constexpr double kDarcy = 9.869233e-13;

const Unit kUnits[] = {
    {"Pa", Dimension::pressure, 1.0},
    {"kPa", Dimension::pressure, 1e3},
    {"MPa", Dimension::pressure, 1e6},
    {"GPa", Dimension::pressure, 1e9},
    {"kg/m^3", Dimension::density, 1.0},
    {"g/cm^3", Dimension::density, 1e3},
    {"m^2", Dimension::area, 1.0},
    {"mm^2", Dimension::area, 1e-6},
    {"um^2", Dimension::area, 1e-12},
    {"μm^2", Dimension::area, 1e-12},
    {"D", Dimension::area, kDarcy},
    {"mD", Dimension::area, kDarcy * 1e-3},
    {"Pa*s", Dimension::viscosity, 1.0},
    {"Pa.s", Dimension::viscosity, 1.0},
    {"kg/(m*s)", Dimension::viscosity, 1.0},
    {"mPa*s", Dimension::viscosity, 1e-3},
    {"cP", Dimension::viscosity, 1e-3},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"rad/s", Dimension::angular_frequency, 1.0},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"μs", Dimension::time, 1e-6},
    {"ns", Dimension::time, 1e-9},
    {"m", Dimension::length, 1.0},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"μm", Dimension::length, 1e-6},
    {"rad", Dimension::angle, 1.0},
    {"deg", Dimension::angle, std::numbers::pi / 180.0},
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? -1 : n.Mark().line + 1; }

/// Map node whose keys are checked against an allow-list.
class Section {
 public:
  Section(const YAML::Node& node, std::string name, std::set<std::string> allowed)
      : node_(node), name_(std::move(name)) {
    if (!node_.IsMap()) throw ConfigError("'" + name_ + "' must be a mapping", line_of(node_));
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in '" + name_ + "'", line_of(kv.first));
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  YAML::Node get(const std::string& key) const { return node_[key]; }

  std::string str(const std::string& key, const std::string& def = {}) const {
    const YAML::Node n = node_[key];
    if (!n) return def;
    if (!n.IsScalar()) throw ConfigError("'" + key + "' must be a string", line_of(n));
    return n.as<std::string>();
  }
  std::string required_str(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing '" + key + "' in '" + name_ + "'", line_of(node_));
    return str(key);
  }
  double quantity(const std::string& key, Dimension dim, double def) const {
    const YAML::Node n = node_[key];
    if (!n) return def;
    return quantity_of(n, key, dim);
  }
  int integer(const std::string& key, int def) const {
    const YAML::Node n = node_[key];
    if (!n) return def;
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      throw ConfigError("'" + key + "' must be an integer", line_of(n));
    }
  }
  bool boolean(const std::string& key, bool def) const {
    const YAML::Node n = node_[key];
    if (!n) return def;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError("'" + key + "' must be true or false", line_of(n));
    }
  }
  std::vector<double> quantity_list(const std::string& key, Dimension dim) const {
    std::vector<double> out;
    const YAML::Node n = node_[key];
    if (!n) return out;
    if (!n.IsSequence()) throw ConfigError("'" + key + "' must be a list", line_of(n));
    for (const auto& e : n) out.push_back(quantity_of(e, key, dim));
    return out;
  }
  std::vector<int> int_list(const std::string& key) const {
    std::vector<int> out;
    const YAML::Node n = node_[key];
    if (!n) return out;
    if (!n.IsSequence()) throw ConfigError("'" + key + "' must be a list", line_of(n));
    for (const auto& e : n) {
      try {
        out.push_back(e.as<int>());
      } catch (const YAML::Exception&) {
        throw ConfigError("'" + key + "' entries must be integers", line_of(e));
      }
    }
    return out;
  }
  int line() const { return line_of(node_); }

  static double quantity_of(const YAML::Node& n, const std::string& key, Dimension dim) {
    if (!n.IsScalar()) throw ConfigError("'" + key + "' must be a scalar quantity", line_of(n));
    try {
      return parse_quantity(n.as<std::string>(), dim);
    } catch (const ConfigError& e) {
      throw ConfigError("'" + key + "': " + e.what(), line_of(n));
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
};

WaveFamily parse_family(const std::string& s, int line) {
  if (s == "fast_P") return WaveFamily::fast_P;
  if (s == "S") return WaveFamily::S;
  if (s == "slow_P") return WaveFamily::slow_P;
  if (s == "acoustic") return WaveFamily::acoustic;
  throw ConfigError("unknown wave family '" + s + "' (fast_P, S, slow_P, acoustic)", line);
}

Material parse_material(const YAML::Node& n) {
  const Section sec(n, "materials",
                    {"name", "preset", "kind", "K_s", "rho_s", "c11", "c12", "c13", "c33", "c55", "phi", "kappa1",
                     "kappa3", "T1", "T3", "K_f", "rho_f", "eta", "theta", "biot_max_frequency"});
  const std::string name = sec.required_str("name");
  Material m;
  if (sec.has("preset")) {
    const auto p = preset_material(sec.str("preset"));
    if (!p) throw ConfigError("unknown preset '" + sec.str("preset") + "'", line_of(sec.get("preset")));
    m = *p;
  } else {
    const std::string kind = sec.required_str("kind");
    if (kind == "poroelastic") {
      m.kind = MaterialKind::poroelastic;
    } else if (kind == "fluid") {
      m.kind = MaterialKind::fluid;
    } else {
      throw ConfigError("kind must be 'poroelastic' or 'fluid'", line_of(sec.get("kind")));
    }
  }
  m.name = name;
  try {
    if (m.kind == MaterialKind::fluid) {
      for (const char* k : {"K_s", "rho_s", "c11", "c12", "c13", "c33", "c55", "phi", "kappa1", "kappa3", "T1", "T3",
                            "eta", "theta", "biot_max_frequency"})
        if (sec.has(k)) throw ConfigError(std::string("'") + k + "' does not apply to a fluid", line_of(sec.get(k)));
      m.fluid.K_f = sec.quantity("K_f", Dimension::pressure, m.fluid.K_f);
      m.fluid.rho_f = sec.quantity("rho_f", Dimension::density, m.fluid.rho_f);
      validate(m.fluid);
    } else {
      PoroMaterial& p = m.poro;
      p.K_s = sec.quantity("K_s", Dimension::pressure, p.K_s);
      p.rho_s = sec.quantity("rho_s", Dimension::density, p.rho_s);
      p.c11 = sec.quantity("c11", Dimension::pressure, p.c11);
      p.c12 = sec.quantity("c12", Dimension::pressure, p.c12);
      p.c13 = sec.quantity("c13", Dimension::pressure, p.c13);
      p.c33 = sec.quantity("c33", Dimension::pressure, p.c33);
      p.c55 = sec.quantity("c55", Dimension::pressure, p.c55);
      p.phi = sec.quantity("phi", Dimension::none, p.phi);
      p.kappa1 = sec.quantity("kappa1", Dimension::area, p.kappa1);
      p.kappa3 = sec.quantity("kappa3", Dimension::area, p.kappa3);
      p.T1 = sec.quantity("T1", Dimension::none, p.T1);
      p.T3 = sec.quantity("T3", Dimension::none, p.T3);
      p.K_f = sec.quantity("K_f", Dimension::pressure, p.K_f);
      p.rho_f = sec.quantity("rho_f", Dimension::density, p.rho_f);
      p.eta = sec.quantity("eta", Dimension::viscosity, p.eta);
      p.theta = sec.quantity("theta", Dimension::angle, p.theta);
      validate(p);
      const double fmax = sec.quantity("biot_max_frequency", Dimension::frequency, 0.0);
      if (fmax < 0) throw ConfigError("biot_max_frequency must be non-negative", line_of(sec.get("biot_max_frequency")));
      m = Material::make_poro(name, p);
      m.biot_max_frequency = fmax;
    }
  } catch (const MaterialError& e) {
    throw ConfigError("material '" + name + "': " + e.what(), sec.line());
  }
  return m;
}

Limiter parse_limiter(const std::string& s, int line) {
  if (s == "none") return Limiter::none;
  if (s == "mc" || s == "monotonized_centered") return Limiter::monotonized_centered;
  throw ConfigError("limiter must be 'none' or 'mc'", line);
}

SecondOrder parse_second_order(const std::string& s, int line) {
  if (s == "everywhere") return SecondOrder::everywhere;
  if (s == "omit_at_material_interfaces") return SecondOrder::omit_at_material_interfaces;
  if (s == "omit_on_line") return SecondOrder::omit_on_line;
  if (s == "off") return SecondOrder::off;
  throw ConfigError("second_order must be everywhere, omit_at_material_interfaces, omit_on_line or off", line);
}

Boundary parse_boundary(const std::string& s, int line) {
  if (s == "analytic") return Boundary::analytic_fill;
  if (s == "extrapolate") return Boundary::extrapolate_zero_order;
  throw ConfigError("boundary must be 'analytic' or 'extrapolate'", line);
}

void check_material(const ScenarioConfig& c, const std::string& name, const std::string& role, int line) {
  if (name.empty()) throw ConfigError("missing material for '" + role + "'", line);
  for (const auto& m : c.materials)
    if (m.name == name) return;
  throw ConfigError("'" + role + "' refers to undefined material '" + name + "'", line);
}

}  // namespace

double parse_quantity(const std::string& text_in, Dimension dim) {
  const std::string text = trim(text_in);
  if (text.empty()) throw ConfigError("empty quantity");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ConfigError("not a number: '" + text + "'");
  const std::string unit = trim(std::string(end));
  if (!std::isfinite(value)) throw ConfigError("non-finite value '" + text + "'");
  if (unit.empty()) return value;
  for (const Unit& u : kUnits) {
    if (unit == u.name) {
      if (u.dim != dim) throw ConfigError("unit '" + unit + "' has the wrong dimension here");
      return value * u.scale;
    }
  }
  throw ConfigError("unknown unit '" + unit + "'");
}

std::optional<Material> preset_material(const std::string& p) {
  if (p == "sandstone") return Material::make_poro("sandstone", presets::sandstone());
  if (p == "shale") return Material::make_poro("shale", presets::shale());
  if (p == "cortical_bone") return Material::make_poro("cortical_bone", presets::cortical_bone());
  if (p == "cancellous_bone") return Material::make_poro("cancellous_bone", presets::cancellous_bone());
  if (p == "brine") return Material::make_fluid("brine", presets::brine());
  if (p == "water") return Material::make_fluid("water", presets::water());
  return std::nullopt;
}

int ScenarioConfig::material_index(const std::string& n) const {
  for (size_t i = 0; i < materials.size(); ++i)
    if (materials[i].name == n) return static_cast<int>(i);
  throw ConfigError("undefined material '" + n + "'");
}

ScenarioConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  const Section top(root, "config",
                    {"name", "scenario", "materials", "wave", "interface", "solver", "grids", "periods", "output",
                     "plane_wave", "reflection", "splitting", "scatterer", "femur", "zeta_sweep"});
  ScenarioConfig c;
  c.name = top.str("name", "unnamed");
  const std::string kind = top.required_str("scenario");
  const int kind_line = line_of(top.get("scenario"));
  if (kind == "plane_wave") c.kind = ScenarioKind::plane_wave;
  else if (kind == "reflection") c.kind = ScenarioKind::reflection;
  else if (kind == "splitting") c.kind = ScenarioKind::splitting;
  else if (kind == "scatterer") c.kind = ScenarioKind::scatterer;
  else if (kind == "femur") c.kind = ScenarioKind::femur;
  else if (kind == "zeta_sweep") c.kind = ScenarioKind::zeta_sweep;
  else throw ConfigError("unknown scenario '" + kind + "'", kind_line);

  const YAML::Node mats = top.get("materials");
  if (!mats || !mats.IsSequence() || mats.size() == 0)
    throw ConfigError("'materials' must be a non-empty list", mats ? line_of(mats) : top.line());
  for (const auto& m : mats) {
    Material mat = parse_material(m);
    for (const auto& other : c.materials)
      if (other.name == mat.name) throw ConfigError("duplicate material '" + mat.name + "'", line_of(m));
    c.materials.push_back(std::move(mat));
  }

  if (top.has("wave")) {
    const Section w(top.get("wave"), "wave", {"frequency", "omega", "direction", "family", "viscous"});
    if (w.has("frequency") && w.has("omega"))
      throw ConfigError("give either 'frequency' or 'omega', not both", w.line());
    if (w.has("frequency")) c.wave.omega = 2 * std::numbers::pi * w.quantity("frequency", Dimension::frequency, 0);
    if (w.has("omega")) c.wave.omega = w.quantity("omega", Dimension::angular_frequency, 0);
    if (!(c.wave.omega > 0)) throw ConfigError("wave frequency must be positive", w.line());
    c.wave.direction = w.quantity("direction", Dimension::angle, 0.0);
    if (w.has("family")) c.wave.family = parse_family(w.str("family"), line_of(w.get("family")));
    c.wave.viscous = w.boolean("viscous", false);
  }

  if (top.has("interface")) {
    const Section s(top.get("interface"), "interface", {"eta_d", "zeta"});
    c.interface.eta_d = s.quantity("eta_d", Dimension::none, 1.0);
    c.interface.zeta = s.quantity("zeta", Dimension::none, 0.5);
    if (c.interface.eta_d < 0 || c.interface.eta_d > 1 || c.interface.zeta < 0 || c.interface.zeta > 1)
      throw ConfigError("eta_d and zeta must lie in [0, 1]", s.line());
  }

  if (top.has("solver")) {
    const Section s(top.get("solver"), "solver",
                    {"cfl", "limiter", "transverse", "second_order", "omit_line", "boundary", "threads"});
    c.solver.cfl_target = s.quantity("cfl", Dimension::none, 0.9);
    if (!(c.solver.cfl_target > 0 && c.solver.cfl_target <= 1)) throw ConfigError("cfl must lie in (0, 1]", s.line());
    if (s.has("limiter")) c.solver.limiter = parse_limiter(s.str("limiter"), line_of(s.get("limiter")));
    c.solver.transverse = s.boolean("transverse", true);
    if (s.has("second_order"))
      c.solver.second_order = parse_second_order(s.str("second_order"), line_of(s.get("second_order")));
    c.solver.omit_line = s.integer("omit_line", -1);
    if (s.has("boundary")) c.solver.boundary = parse_boundary(s.str("boundary"), line_of(s.get("boundary")));
    c.solver.threads = s.integer("threads", 1);
    if (c.solver.threads < 1) throw ConfigError("threads must be at least 1", s.line());
  }

  c.grids = top.int_list("grids");
  for (int n : c.grids)
    if (n < 4) throw ConfigError("grid sizes must be at least 4", line_of(top.get("grids")));
  c.periods = top.quantity("periods", Dimension::none, 1.25);

  if (top.has("output")) {
    const Section s(top.get("output"), "output", {"dir"});
    c.output_dir = s.str("dir", c.output_dir);
  }

  switch (c.kind) {
    case ScenarioKind::plane_wave: {
      const Section s(top.has("plane_wave") ? top.get("plane_wave") : YAML::Node(YAML::NodeType::Map), "plane_wave",
                      {"medium", "domain_wavelengths", "omit_line"});
      c.plane_wave.medium = s.str("medium");
      c.plane_wave.domain_wavelengths = s.quantity("domain_wavelengths", Dimension::none, 2.0);
      c.plane_wave.omit_line = s.boolean("omit_line", false);
      check_material(c, c.plane_wave.medium, "plane_wave.medium", s.line());
      break;
    }
    case ScenarioKind::reflection: {
      if (!top.has("reflection")) throw ConfigError("missing 'reflection' section", top.line());
      const Section s(top.get("reflection"), "reflection",
                      {"upper", "lower", "domain_wavelengths", "wavelength_medium", "angles"});
      c.reflection.upper = s.str("upper");
      c.reflection.lower = s.str("lower");
      c.reflection.domain_wavelengths = s.quantity("domain_wavelengths", Dimension::none, 2.0);
      c.reflection.wavelength_medium = s.str("wavelength_medium", c.reflection.upper);
      c.reflection.angles = s.quantity_list("angles", Dimension::angle);
      check_material(c, c.reflection.upper, "reflection.upper", s.line());
      check_material(c, c.reflection.lower, "reflection.lower", s.line());
      check_material(c, c.reflection.wavelength_medium, "reflection.wavelength_medium", s.line());
      break;
    }
    case ScenarioKind::splitting: {
      if (!top.has("splitting")) throw ConfigError("missing 'splitting' section", top.line());
      const Section s(top.get("splitting"), "splitting",
                      {"medium", "viscosity_scale", "N", "domain_wavelengths", "dt", "dt_base", "levels", "end_time",
                       "core_fraction"});
      c.splitting.medium = s.str("medium");
      c.splitting.viscosity_scale = s.quantity("viscosity_scale", Dimension::none, 1.0);
      c.splitting.N = s.integer("N", 64);
      c.splitting.domain_wavelengths = s.quantity("domain_wavelengths", Dimension::none, 2.0);
      c.splitting.dt = s.quantity_list("dt", Dimension::time);
      c.splitting.dt_base = s.quantity("dt_base", Dimension::time, 0.0);
      c.splitting.levels = s.integer("levels", 3);
      c.splitting.end_time = s.quantity("end_time", Dimension::time, 0.0);
      c.splitting.core_fraction = s.quantity("core_fraction", Dimension::none, 1.0);
      if (!(c.splitting.core_fraction > 0 && c.splitting.core_fraction <= 1))
        throw ConfigError("splitting core_fraction must lie in (0, 1]", s.line());
      check_material(c, c.splitting.medium, "splitting.medium", s.line());
      if (c.splitting.dt.empty() && !(c.splitting.dt_base > 0))
        throw ConfigError("splitting needs 'dt' or a positive 'dt_base'", s.line());
      if (!(c.splitting.end_time > 0)) throw ConfigError("splitting needs a positive 'end_time'", s.line());
      break;
    }
    case ScenarioKind::scatterer: {
      if (!top.has("scatterer")) throw ConfigError("missing 'scatterer' section", top.line());
      const Section s(top.get("scatterer"), "scatterer",
                      {"host", "cylinder", "half_width", "radius", "frequency", "pulse_width", "pulse_center",
                       "cycles"});
      ScattererConfig& sc = c.scatterer;
      sc.host = s.str("host");
      sc.cylinder = s.str("cylinder");
      sc.half_width = s.quantity("half_width", Dimension::length, sc.half_width);
      sc.radius = s.quantity("radius", Dimension::length, sc.radius);
      sc.frequency = s.quantity("frequency", Dimension::frequency, sc.frequency);
      sc.pulse_width = s.quantity("pulse_width", Dimension::length, sc.pulse_width);
      sc.pulse_center = s.quantity("pulse_center", Dimension::length, sc.pulse_center);
      sc.cycles = s.quantity("cycles", Dimension::none, sc.cycles);
      check_material(c, sc.host, "scatterer.host", s.line());
      check_material(c, sc.cylinder, "scatterer.cylinder", s.line());
      if (!(sc.frequency > 0)) throw ConfigError("frequency must be positive", s.line());
      break;
    }
    case ScenarioKind::femur: {
      if (!top.has("femur")) throw ConfigError("missing 'femur' section", top.line());
      const Section s(top.get("femur"), "femur",
                      {"bath", "shell", "core", "half_width", "core_radius", "outer_radius", "N", "frequency_width",
                       "peak_pressure", "peak_offset", "end_time", "output_interval"});
      FemurConfig& f = c.femur;
      f.bath = s.str("bath");
      f.shell = s.str("shell");
      f.core = s.str("core");
      f.half_width = s.quantity("half_width", Dimension::length, f.half_width);
      f.core_radius = s.quantity("core_radius", Dimension::length, f.core_radius);
      f.outer_radius = s.quantity("outer_radius", Dimension::length, f.outer_radius);
      f.N = s.integer("N", f.N);
      f.frequency_width = s.quantity("frequency_width", Dimension::frequency, f.frequency_width);
      f.peak_pressure = s.quantity("peak_pressure", Dimension::pressure, f.peak_pressure);
      f.peak_offset = s.quantity("peak_offset", Dimension::length, f.peak_offset);
      f.end_time = s.quantity("end_time", Dimension::time, f.end_time);
      f.output_interval = s.quantity("output_interval", Dimension::time, f.output_interval);
      check_material(c, f.bath, "femur.bath", s.line());
      check_material(c, f.shell, "femur.shell", s.line());
      check_material(c, f.core, "femur.core", s.line());
      if (!(f.frequency_width > 0)) throw ConfigError("frequency_width must be positive", s.line());
      if (!(f.output_interval > 0)) throw ConfigError("output_interval must be positive", s.line());
      break;
    }
    case ScenarioKind::zeta_sweep: {
      if (!top.has("zeta_sweep")) throw ConfigError("missing 'zeta_sweep' section", top.line());
      const Section s(top.get("zeta_sweep"), "zeta_sweep", {"pairs", "eta_d", "samples", "normal_angles"});
      const YAML::Node pairs = s.get("pairs");
      if (!pairs || !pairs.IsSequence()) throw ConfigError("'pairs' must be a list of [left, right]", s.line());
      for (const auto& p : pairs) {
        if (!p.IsSequence() || p.size() != 2) throw ConfigError("each pair must be [left, right]", line_of(p));
        const std::string a = p[0].as<std::string>(), b = p[1].as<std::string>();
        check_material(c, a, "zeta_sweep.pairs", line_of(p));
        check_material(c, b, "zeta_sweep.pairs", line_of(p));
        c.zeta_sweep.pairs.emplace_back(a, b);
      }
      if (s.has("eta_d")) c.zeta_sweep.eta_d = s.quantity_list("eta_d", Dimension::none);
      c.zeta_sweep.samples = s.integer("samples", 21);
      if (c.zeta_sweep.samples < 2) throw ConfigError("samples must be at least 2", s.line());
      if (s.has("normal_angles")) c.zeta_sweep.normal_angles = s.quantity_list("normal_angles", Dimension::angle);
      break;
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    ConfigError wrapped(path + ": " + e.what());
    wrapped.line = e.line;
    throw wrapped;
  }
}

}  // namespace pw
