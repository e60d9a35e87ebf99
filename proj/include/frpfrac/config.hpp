#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "frpfrac/discrete_model.hpp"

namespace frpfrac {

/// Raw simulation configuration in file units.  Heat capacities are given in
/// kJ/(m^3 K), critical energies in kJ/m^2 and conductivities in W/(m K); the
/// conversion into the N-mm-s-K working system happens in to_physics().
struct SimulationConfig {
  // [scenario]
  std::string type = "tension_uni";
  double fiber_angle_deg = 0.0;
  double temperature = 293.0;
  bool coupled_thermal = false;
  double rate = 0.5;                // grip / load-point speed [mm/s]
  double total_displacement = 10.0; // ramp target [mm]

  // [geometry]
  double length = 125.0, width = 25.0, height = 2.0;
  std::array<int, 3> elements{16, 4, 1};
  int degree = 2;

  // [matrix]
  std::vector<double> mu{1630.0};
  std::vector<double> alpha{2.0};
  double kappa = 6250.0, beta = -2.0;
  double epsilon = 106e-6, gamma_exp = 1.0;
  double theta0 = 293.0;
  double c_mat = 1860.0;  // kJ/(m^3 K)
  double zeta = 0.53;

  // [fiber]
  double a = 79000.0, b = 0.0;
  double c_par = 16.46, c_perp = 16.46;
  double upsilon = 5e-6;
  double c_fib = 2080.0;  // kJ/(m^3 K)

  // [plastic]
  bool plastic_enabled = true;
  double y0 = 22.0, y1 = 56.8, y2 = 30.0;
  double omega_p1 = 1.0, omega_p2 = 115.0;
  double omega_t0 = 0.4, omega_t1 = 0.4, omega_t2 = 0.4;
  double eta_p = 5000.0, n_p = 1.0;
  double l_p = 3.1, f0 = 0.01;
  double q1 = 3.0, q2 = 0.8;
  double theta_ref = 293.0;

  // [fracture]
  bool fracture_enabled = true;
  double gc_e = 500.0, gc_p = 50.0;  // kJ/m^2
  double omega_f = 3.0;
  double gc_L = 500.0, gc_M = 500.0;
  double l_f = 3.1, l_fL = 3.1, l_fM = 3.1;
  double eta_f = 1e-7, eta_fL = 1e-7, eta_fM = 1e-7;
  double a_g = 0.001, a_gL = 0.001, a_gM = 0.001;
  double nu_p = 0.9, nu_fmat = 0.9, nu_ffib = 0.9;
  bool healing = false;

  // [thermal]
  double conductivity = 0.25;        // W/(m K)
  double conductivity_fiber = 0.25;  // W/(m K)
  double convection = 0.0;           // W/(m K)

  // [solver]
  double dt = 0.0;  // 0 = derive from the rate (0.1 mm per step)
  double newton_rtol = 1e-9;
  int newton_max = 60;
  int passes = 1;
  double beta_pen = 1e6;
  int max_cuts = 8;
  int threads = 1;

  // [output]
  std::string directory = "out";
  int cadence = 5;

  /// material parameters in the working unit system
  PhysicsParams to_physics() const {
    PhysicsParams p;
    p.matrix.mu = mu;
    p.matrix.alpha_exp = alpha;
    p.matrix.kappa = kappa;
    p.matrix.beta = beta;
    p.matrix.eps = epsilon;
    p.matrix.gamma = gamma_exp;
    p.matrix.theta0 = theta0;
    p.matrix.c_mat = c_mat * 1e-3;  // kJ/(m^3 K) = 1e-3 MPa/K
    p.matrix.zeta = zeta;

    const double th = fiber_angle_deg * M_PI / 180.0;
    p.fiber.a = a;
    p.fiber.b = b;
    p.fiber.c_par = c_par;
    p.fiber.c_perp = c_perp;
    p.fiber.upsilon = upsilon;
    p.fiber.c_fib = c_fib * 1e-3;
    p.fiber.theta0 = theta0;
    p.fiber.L = Vec3(std::cos(th), std::sin(th), 0.0);
    p.fiber.M = Vec3(-std::sin(th), std::cos(th), 0.0);
    p.fiber.a_gL = a_gL;
    p.fiber.a_gM = a_gM;
    // family weights: bidirectional shares (1-zeta) between the families,
    // unidirectional puts it all on the L family
    if (type == "tension_uni") {
      p.fiber.wL = 1.0 - zeta;
      p.fiber.wM = 0.0;
    } else if (type == "in_plane_bending") {
      // single fiber bundle carrying the full cross-section stiffness
      p.fiber.wL = 1.0;
      p.fiber.wM = 0.0;
    } else {
      p.fiber.wL = p.fiber.wM = 0.5 * (1.0 - zeta);
    }

    p.plastic.y0_ref = y0;
    p.plastic.y1_ref = y1;
    p.plastic.y2_ref = y2;
    p.plastic.om_p1 = omega_p1;
    p.plastic.om_p2 = omega_p2;
    p.plastic.om_t0 = omega_t0;
    p.plastic.om_t1 = omega_t1;
    p.plastic.om_t2 = omega_t2;
    p.plastic.eta_p = eta_p;
    p.plastic.n_p = n_p;
    p.plastic.l_p = l_p;
    p.plastic.f0 = f0;
    p.plastic.q1 = q1;
    p.plastic.q2 = q2;
    p.plastic.theta_ref = theta_ref;

    p.fracture.gce = gc_e;  // 1 kJ/m^2 = 1 N/mm
    p.fracture.gcp = gc_p;
    p.fracture.om_f = omega_f;
    p.fracture.gcL = gc_L;
    p.fracture.gcM = gc_M;
    p.fracture.lf = l_f;
    p.fracture.lfL = l_fL;
    p.fracture.lfM = l_fM;
    p.fracture.eta_f = eta_f;
    p.fracture.eta_fL = eta_fL;
    p.fracture.eta_fM = eta_fM;
    p.fracture.a_g = a_g;
    p.fracture.a_gL = a_gL;
    p.fracture.a_gM = a_gM;
    p.fracture.nu_pmat = nu_p;
    p.fracture.nu_fmat = nu_fmat;
    p.fracture.nu_ffib = nu_ffib;
    p.fracture.healing = healing;

    // 1 W/(m K) = 1 N/(s K): the metre cancels against the joule
    p.thermal.K_mat = conductivity;
    p.thermal.K_fib = conductivity_fiber;
    p.thermal.K_conv = convection;
    p.thermal.theta_ref = theta_ref;

    p.plasticity_on = plastic_enabled;
    p.fracture_on = fracture_enabled;
    p.thermal_coupled = coupled_thermal;
    p.theta_init = temperature;
    p.validate();
    return p;
  }

  SolverOptions to_solver_options() const {
    SolverOptions o;
    o.newton_rtol = newton_rtol;
    o.newton_max = newton_max;
    o.passes = passes;
    o.beta_pen = beta_pen;
    o.max_cuts = max_cuts;
    o.threads = threads;
    return o;
  }

  double step_size() const { return dt > 0.0 ? dt : 0.1 / rate; }
  double end_time() const { return total_displacement / rate; }
};

namespace detail {

struct ConfigSchema {
  // section -> keys
  std::map<std::string, std::set<std::string>> keys = {
      {"scenario",
       {"type", "fiber_angle_deg", "temperature", "coupled_thermal", "rate", "total_displacement"}},
      {"geometry", {"length", "width", "height", "elements", "degree"}},
      {"matrix", {"mu", "alpha", "kappa", "beta", "epsilon", "gamma", "theta0", "c_mat", "zeta"}},
      {"fiber", {"a", "b", "c_par", "c_perp", "upsilon", "c_fib"}},
      {"plastic",
       {"enabled", "y0", "y1", "y2", "omega_p1", "omega_p2", "omega_t0", "omega_t1", "omega_t2", "eta_p",
        "n_p", "l_p", "f0", "q1", "q2", "theta_ref"}},
      {"fracture",
       {"enabled", "gc_e", "gc_p", "omega_f", "gc_L", "gc_M", "l_f", "l_fL", "l_fM", "eta_f", "eta_fL",
        "eta_fM", "a_g", "a_gL", "a_gM", "nu_p", "nu_fmat", "nu_ffib", "healing"}},
      {"thermal", {"conductivity", "conductivity_fiber", "convection"}},
      {"solver",
       {"dt", "newton_rtol", "newton_max", "passes", "beta_pen", "max_cuts", "threads"}},
      {"output", {"directory", "cadence"}}};
};

inline double parse_number(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(sec + "." + key + ": cannot parse number from '" + v + "'");
  }
}

inline bool parse_bool(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(sec + "." + key + ": expected a boolean, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& sec, const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number(sec, key, tok));
  if (out.empty()) throw ConfigError(sec + "." + key + ": empty list");
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses the sectioned key = value format.  Unknown sections or keys are
/// errors; keys listed in required_keys() must be present.
inline SimulationConfig parse_config(std::istream& in, std::vector<std::string>* defaults_applied = nullptr) {
  detail::ConfigSchema schema;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (std::size_t h = t.find('#'); h != std::string::npos) t = detail::trim(t.substr(0, h));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = t.substr(1, t.size() - 2);
      if (!schema.keys.count(section))
        throw ConfigError("unknown section [" + section + "] at line " + std::to_string(lineno));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    if (!schema.keys[section].count(key))
      throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    if (raw[section].count(key)) throw ConfigError("duplicate key " + section + "." + key);
    raw[section][key] = val;
  }

  static const std::vector<std::pair<std::string, std::string>> required = {
      {"scenario", "type"},   {"matrix", "mu"},    {"matrix", "alpha"}, {"matrix", "kappa"},
      {"matrix", "beta"},     {"matrix", "zeta"},  {"fiber", "a"},      {"fiber", "c_par"},
      {"fiber", "c_perp"},
  };
  std::string missing;
  for (const auto& [sec, key] : required)
    if (!raw.count(sec) || !raw[sec].count(key)) missing += " " + sec + "." + key;
  if (!missing.empty()) throw ConfigError("missing required keys:" + missing);

  SimulationConfig c;
  auto num = [&](const char* sec, const char* key, double& target) {
    if (raw.count(sec) && raw[sec].count(key))
      target = detail::parse_number(sec, key, raw[sec][key]);
    else if (defaults_applied)
      defaults_applied->push_back(std::string(sec) + "." + key);
  };
  auto boolean = [&](const char* sec, const char* key, bool& target) {
    if (raw.count(sec) && raw[sec].count(key))
      target = detail::parse_bool(sec, key, raw[sec][key]);
    else if (defaults_applied)
      defaults_applied->push_back(std::string(sec) + "." + key);
  };
  auto integer = [&](const char* sec, const char* key, int& target) {
    double d = target;
    num(sec, key, d);
    target = int(d);
  };

  c.type = raw["scenario"]["type"];
  if (c.type != "tension_uni" && c.type != "tension_bi" && c.type != "in_plane_bending" &&
      c.type != "four_point_bending" && c.type != "custom")
    throw ConfigError("scenario.type: unknown scenario '" + c.type + "'");
  num("scenario", "fiber_angle_deg", c.fiber_angle_deg);
  num("scenario", "temperature", c.temperature);
  boolean("scenario", "coupled_thermal", c.coupled_thermal);
  num("scenario", "rate", c.rate);
  num("scenario", "total_displacement", c.total_displacement);

  num("geometry", "length", c.length);
  num("geometry", "width", c.width);
  num("geometry", "height", c.height);
  if (raw.count("geometry") && raw["geometry"].count("elements")) {
    std::vector<double> parts;
    std::stringstream ss(raw["geometry"]["elements"]);
    std::string tok;
    while (ss >> tok) parts.push_back(detail::parse_number("geometry", "elements", tok));
    if (parts.size() != 3) throw ConfigError("geometry.elements: expected three space-separated counts");
    for (int d = 0; d < 3; ++d) {
      c.elements[d] = int(parts[d]);
      if (c.elements[d] < 1) throw ConfigError("geometry.elements: counts must be positive");
    }
  } else if (defaults_applied) {
    defaults_applied->push_back("geometry.elements");
  }
  integer("geometry", "degree", c.degree);

  if (raw["matrix"].count("mu")) c.mu = detail::parse_list("matrix", "mu", raw["matrix"]["mu"]);
  if (raw["matrix"].count("alpha")) c.alpha = detail::parse_list("matrix", "alpha", raw["matrix"]["alpha"]);
  if (c.mu.size() != c.alpha.size())
    throw ConfigError("matrix.mu and matrix.alpha must list the same number of Ogden pairs");
  num("matrix", "kappa", c.kappa);
  num("matrix", "beta", c.beta);
  num("matrix", "epsilon", c.epsilon);
  num("matrix", "gamma", c.gamma_exp);
  num("matrix", "theta0", c.theta0);
  num("matrix", "c_mat", c.c_mat);
  num("matrix", "zeta", c.zeta);

  num("fiber", "a", c.a);
  num("fiber", "b", c.b);
  num("fiber", "c_par", c.c_par);
  num("fiber", "c_perp", c.c_perp);
  num("fiber", "upsilon", c.upsilon);
  num("fiber", "c_fib", c.c_fib);

  boolean("plastic", "enabled", c.plastic_enabled);
  num("plastic", "y0", c.y0);
  num("plastic", "y1", c.y1);
  num("plastic", "y2", c.y2);
  num("plastic", "omega_p1", c.omega_p1);
  num("plastic", "omega_p2", c.omega_p2);
  num("plastic", "omega_t0", c.omega_t0);
  num("plastic", "omega_t1", c.omega_t1);
  num("plastic", "omega_t2", c.omega_t2);
  num("plastic", "eta_p", c.eta_p);
  num("plastic", "n_p", c.n_p);
  num("plastic", "l_p", c.l_p);
  num("plastic", "f0", c.f0);
  num("plastic", "q1", c.q1);
  num("plastic", "q2", c.q2);
  num("plastic", "theta_ref", c.theta_ref);

  boolean("fracture", "enabled", c.fracture_enabled);
  num("fracture", "gc_e", c.gc_e);
  num("fracture", "gc_p", c.gc_p);
  num("fracture", "omega_f", c.omega_f);
  num("fracture", "gc_L", c.gc_L);
  num("fracture", "gc_M", c.gc_M);
  num("fracture", "l_f", c.l_f);
  num("fracture", "l_fL", c.l_fL);
  num("fracture", "l_fM", c.l_fM);
  num("fracture", "eta_f", c.eta_f);
  num("fracture", "eta_fL", c.eta_fL);
  num("fracture", "eta_fM", c.eta_fM);
  num("fracture", "a_g", c.a_g);
  num("fracture", "a_gL", c.a_gL);
  num("fracture", "a_gM", c.a_gM);
  num("fracture", "nu_p", c.nu_p);
  num("fracture", "nu_fmat", c.nu_fmat);
  num("fracture", "nu_ffib", c.nu_ffib);
  boolean("fracture", "healing", c.healing);

  num("thermal", "conductivity", c.conductivity);
  num("thermal", "conductivity_fiber", c.conductivity_fiber);
  num("thermal", "convection", c.convection);

  num("solver", "dt", c.dt);
  num("solver", "newton_rtol", c.newton_rtol);
  integer("solver", "newton_max", c.newton_max);
  integer("solver", "passes", c.passes);
  num("solver", "beta_pen", c.beta_pen);
  integer("solver", "max_cuts", c.max_cuts);
  integer("solver", "threads", c.threads);

  if (raw.count("output") && raw["output"].count("directory"))
    c.directory = raw["output"]["directory"];
  else if (defaults_applied)
    defaults_applied->push_back("output.directory");
  integer("output", "cadence", c.cadence);

  if (c.plastic_enabled && c.fracture_enabled && c.l_p < c.l_f - 1e-12)
    throw ConfigError(
        "plastic.l_p must not be smaller than fracture.l_f (the regularized crack zone must lie inside "
        "the plastic zone)");
  return c;
}

inline SimulationConfig load_config(const std::string& path, std::vector<std::string>* defaults = nullptr) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, defaults);
}

inline std::string serialize_config(const SimulationConfig& c) {
  std::ostringstream os;
  auto w = [&os](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << key << " = " << buf << "\n";
  };
  auto wl = [&os](const char* key, const std::vector<double>& v) {
    os << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  };
  os << "[scenario]\n";
  os << "type = " << c.type << "\n";
  w("fiber_angle_deg", c.fiber_angle_deg);
  w("temperature", c.temperature);
  os << "coupled_thermal = " << (c.coupled_thermal ? "true" : "false") << "\n";
  w("rate", c.rate);
  w("total_displacement", c.total_displacement);
  os << "\n[geometry]\n";
  w("length", c.length);
  w("width", c.width);
  w("height", c.height);
  os << "elements = " << c.elements[0] << " " << c.elements[1] << " " << c.elements[2] << "\n";
  os << "degree = " << c.degree << "\n";
  os << "\n[matrix]\n";
  wl("mu", c.mu);
  wl("alpha", c.alpha);
  w("kappa", c.kappa);
  w("beta", c.beta);
  w("epsilon", c.epsilon);
  w("gamma", c.gamma_exp);
  w("theta0", c.theta0);
  w("c_mat", c.c_mat);
  w("zeta", c.zeta);
  os << "\n[fiber]\n";
  w("a", c.a);
  w("b", c.b);
  w("c_par", c.c_par);
  w("c_perp", c.c_perp);
  w("upsilon", c.upsilon);
  w("c_fib", c.c_fib);
  os << "\n[plastic]\n";
  os << "enabled = " << (c.plastic_enabled ? "true" : "false") << "\n";
  w("y0", c.y0);
  w("y1", c.y1);
  w("y2", c.y2);
  w("omega_p1", c.omega_p1);
  w("omega_p2", c.omega_p2);
  w("omega_t0", c.omega_t0);
  w("omega_t1", c.omega_t1);
  w("omega_t2", c.omega_t2);
  w("eta_p", c.eta_p);
  w("n_p", c.n_p);
  w("l_p", c.l_p);
  w("f0", c.f0);
  w("q1", c.q1);
  w("q2", c.q2);
  w("theta_ref", c.theta_ref);
  os << "\n[fracture]\n";
  os << "enabled = " << (c.fracture_enabled ? "true" : "false") << "\n";
  w("gc_e", c.gc_e);
  w("gc_p", c.gc_p);
  w("omega_f", c.omega_f);
  w("gc_L", c.gc_L);
  w("gc_M", c.gc_M);
  w("l_f", c.l_f);
  w("l_fL", c.l_fL);
  w("l_fM", c.l_fM);
  w("eta_f", c.eta_f);
  w("eta_fL", c.eta_fL);
  w("eta_fM", c.eta_fM);
  w("a_g", c.a_g);
  w("a_gL", c.a_gL);
  w("a_gM", c.a_gM);
  w("nu_p", c.nu_p);
  w("nu_fmat", c.nu_fmat);
  w("nu_ffib", c.nu_ffib);
  os << "healing = " << (c.healing ? "true" : "false") << "\n";
  os << "\n[thermal]\n";
  w("conductivity", c.conductivity);
  w("conductivity_fiber", c.conductivity_fiber);
  w("convection", c.convection);
  os << "\n[solver]\n";
  w("dt", c.dt);
  w("newton_rtol", c.newton_rtol);
  os << "newton_max = " << c.newton_max << "\n";
  os << "passes = " << c.passes << "\n";
  w("beta_pen", c.beta_pen);
  os << "max_cuts = " << c.max_cuts << "\n";
  os << "threads = " << c.threads << "\n";
  os << "\n[output]\n";
  os << "directory = " << c.directory << "\n";
  os << "cadence = " << c.cadence << "\n";
  return os.str();
}

}  // namespace frpfrac
