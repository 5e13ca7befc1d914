#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace floquet::app {

namespace {

const std::map<std::string, Method> method_names{{"vnegf", Method::vnegf},
                                                 {"mnegf", Method::mnegf},
                                                 {"finegf", Method::finegf},
                                                 {"hsqme", Method::hsqme},
                                                 {"fsqme", Method::fsqme}};

const std::map<std::string, Variable> variable_names{{"none", Variable::none},   {"mu_L", Variable::mu_L},
                                                     {"omega", Variable::omega}, {"amplitude", Variable::amplitude},
                                                     {"u", Variable::u},         {"spin_drive", Variable::spin_drive}};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  if (used != value.size() || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return x;
}

int to_int(const std::string& key, const std::string& value) {
  const double x = to_double(key, value);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return int(x);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

Variable to_variable(const std::string& key, const std::string& value) {
  auto it = variable_names.find(value);
  if (it == variable_names.end()) throw ConfigError(key + ": unknown variable '" + value + "'");
  return it->second;
}

// Shortest of %.15g / %.17g that reads back exactly.
std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  if (std::stod(buf) != x) std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string method_name(Method m) {
  for (const auto& [name, value] : method_names)
    if (value == m) return name;
  return "?";
}

Method parse_method(const std::string& name) {
  auto it = method_names.find(name);
  if (it == method_names.end()) throw ConfigError("unknown method '" + name + "'");
  return it->second;
}

bool is_qme(Method m) { return m == Method::hsqme || m == Method::fsqme; }

std::string variable_name(Variable v) {
  for (const auto& [name, value] : variable_names)
    if (value == v) return name;
  return "?";
}

std::string variable_unit(Variable v) {
  switch (v) {
    case Variable::mu_L:
    case Variable::omega:
    case Variable::amplitude:
    case Variable::u:
      return "eV";
    default:
      return "1";
  }
}

std::vector<double> SweepConfig::points() const {
  std::vector<double> out;
  const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(start + double(i) * step);
  return out;
}

void ExperimentConfig::validate() const {
  if (!(model.omega > 0.0)) throw ConfigError("model.omega must be positive");
  if (model.amplitude < 0.0) throw ConfigError("model.amplitude must be non-negative");
  if (model.driving != "cosine" && model.driving != "circular")
    throw ConfigError("model.driving must be cosine or circular");
  if (model.spin_drive != "same" && model.spin_drive != "conjugate")
    throw ConfigError("model.spin_drive must be same or conjugate");
  if (model.u < 0.0) throw ConfigError("model.u must be non-negative");
  if (!model.spinful && model.u != 0.0) throw ConfigError("model.u requires model.spinful = true");
  if (leads.gamma_L < 0.0 || leads.gamma_R < 0.0 || leads.gamma_L + leads.gamma_R <= 0.0)
    throw ConfigError("lead couplings must be non-negative and not both zero");
  if (!(leads.kT > 0.0)) throw ConfigError("leads.kT must be positive");
  if (methods.empty()) throw ConfigError("methods.list must not be empty");
  if (numerics.truncation < 1) throw ConfigError("numerics.N must be at least 1");
  if (numerics.energy_step < 0.0) throw ConfigError("numerics.energy_step must be non-negative");
  if (numerics.steps_per_period < 4) throw ConfigError("numerics.steps_per_period must be at least 4");
  if (!(numerics.steady_tol > 0.0)) throw ConfigError("numerics.steady_tol must be positive");
  if (numerics.max_periods < 1) throw ConfigError("numerics.max_periods must be at least 1");
  if (numerics.finegf_occupations != "fixed_half" && numerics.finegf_occupations != "self_consistent")
    throw ConfigError("numerics.finegf_occupations must be fixed_half or self_consistent");
  if (output.name.empty() || output.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("output.name must be a plain file stem");
  std::set<Method> seen;
  for (Method m : methods) {
    if (!seen.insert(m).second) throw ConfigError("methods.list repeats " + method_name(m));
    if (m == Method::finegf && !model.spinful) throw ConfigError("finegf requires model.spinful = true");
    if ((m == Method::vnegf || m == Method::mnegf) && model.spinful && (model.u != 0.0 || series.variable == Variable::u ||
                                                                        sweep.variable == Variable::u))
      throw ConfigError(method_name(m) + " is non-interacting; use finegf, hsqme or fsqme when u is set");
  }
  if (mode == RunMode::sweep) {
    if (!(sweep.step > 0.0)) throw ConfigError("sweep.step must be positive");
    if (sweep.stop < sweep.start) throw ConfigError("sweep.stop must not be below sweep.start");
    if (sweep.variable == Variable::none || sweep.variable == Variable::spin_drive)
      throw ConfigError("sweep.variable must be mu_L, omega, amplitude or u");
    if (sweep.points().size() > 100000) throw ConfigError("sweep has too many points");
  } else {
    for (Method m : methods)
      if (!is_qme(m)) throw ConfigError("trajectory mode supports hsqme and fsqme only");
    if (trajectory.periods < 1 || trajectory.samples_per_period < 1)
      throw ConfigError("trajectory.periods and trajectory.samples_per_period must be positive");
    if (numerics.steps_per_period % trajectory.samples_per_period != 0)
      throw ConfigError("trajectory.samples_per_period must divide numerics.steps_per_period");
  }
  if (series.variable != Variable::none) {
    if (series.values.empty()) throw ConfigError("series.values must not be empty");
    if (series.variable == sweep.variable && mode == RunMode::sweep)
      throw ConfigError("series.variable must differ from sweep.variable");
    if ((series.variable == Variable::u || sweep.variable == Variable::u) && !model.spinful)
      throw ConfigError("varying u requires model.spinful = true");
    for (double v : series.values) with_value(*this, series.variable, v);
  }
}

std::string ExperimentConfig::canonical() const {
  ConfigEntries e;
  e["run.mode"] = mode == RunMode::sweep ? "sweep" : "trajectory";
  e["model.eps1"] = format_double(model.eps1);
  e["model.eps2"] = format_double(model.eps2);
  e["model.amplitude"] = format_double(model.amplitude);
  e["model.omega"] = format_double(model.omega);
  e["model.driving"] = model.driving;
  e["model.spinful"] = model.spinful ? "true" : "false";
  e["model.u"] = format_double(model.u);
  e["model.spin_drive"] = model.spin_drive;
  e["leads.gamma_L"] = format_double(leads.gamma_L);
  e["leads.gamma_R"] = format_double(leads.gamma_R);
  e["leads.mu_L"] = format_double(leads.mu_L);
  e["leads.mu_R"] = format_double(leads.mu_R);
  e["leads.kT"] = format_double(leads.kT);
  e["sweep.variable"] = variable_name(sweep.variable);
  e["sweep.start"] = format_double(sweep.start);
  e["sweep.stop"] = format_double(sweep.stop);
  e["sweep.step"] = format_double(sweep.step);
  e["series.variable"] = variable_name(series.variable);
  std::string values;
  for (double v : series.values) values += (values.empty() ? "" : ",") + format_double(v);
  e["series.values"] = values;
  e["trajectory.periods"] = std::to_string(trajectory.periods);
  e["trajectory.samples_per_period"] = std::to_string(trajectory.samples_per_period);
  e["numerics.N"] = std::to_string(numerics.truncation);
  e["numerics.energy_step"] = format_double(numerics.energy_step);
  e["numerics.steps_per_period"] = std::to_string(numerics.steps_per_period);
  e["numerics.steady_tol"] = format_double(numerics.steady_tol);
  e["numerics.max_periods"] = std::to_string(numerics.max_periods);
  e["numerics.finegf_occupations"] = numerics.finegf_occupations;
  std::string list;
  for (Method m : methods) list += (list.empty() ? "" : ",") + method_name(m);
  e["methods.list"] = list;
  e["output.name"] = output.name;
  e["output.title"] = output.title;
  e["output.plot"] = output.plot ? "true" : "false";
  std::string out;
  for (const auto& [k, v] : e) out += k + " = " + v + "\n";
  return out;
}

ConfigEntries parse_ini(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ConfigEntries entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must be inside a [section]");
    for (const auto& [key, value] : body) entries[section + "." + key] = trim(value.get_value<std::string>());
  }
  return entries;
}

ConfigEntries read_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

void apply_override(ConfigEntries& entries, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' must look like section.key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.find('.') == std::string::npos) throw ConfigError("override key '" + key + "' must be section.key");
  entries[key] = trim(assignment.substr(eq + 1));
}

ExperimentConfig build_config(const ConfigEntries& entries) {
  ExperimentConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "run.mode") {
      if (value == "sweep") c.mode = RunMode::sweep;
      else if (value == "trajectory") c.mode = RunMode::trajectory;
      else throw ConfigError(key + ": expected sweep or trajectory");
    } else if (key == "model.eps1") c.model.eps1 = to_double(key, value);
    else if (key == "model.eps2") c.model.eps2 = to_double(key, value);
    else if (key == "model.amplitude") c.model.amplitude = to_double(key, value);
    else if (key == "model.omega") c.model.omega = to_double(key, value);
    else if (key == "model.driving") c.model.driving = value;
    else if (key == "model.spinful") c.model.spinful = to_bool(key, value);
    else if (key == "model.u") c.model.u = to_double(key, value);
    else if (key == "model.spin_drive") c.model.spin_drive = value;
    else if (key == "leads.gamma_L") c.leads.gamma_L = to_double(key, value);
    else if (key == "leads.gamma_R") c.leads.gamma_R = to_double(key, value);
    else if (key == "leads.mu_L") c.leads.mu_L = to_double(key, value);
    else if (key == "leads.mu_R") c.leads.mu_R = to_double(key, value);
    else if (key == "leads.kT") c.leads.kT = to_double(key, value);
    else if (key == "sweep.variable") c.sweep.variable = to_variable(key, value);
    else if (key == "sweep.start") c.sweep.start = to_double(key, value);
    else if (key == "sweep.stop") c.sweep.stop = to_double(key, value);
    else if (key == "sweep.step") c.sweep.step = to_double(key, value);
    else if (key == "series.variable") c.series.variable = to_variable(key, value);
    else if (key == "series.values") {
      c.series.values.clear();
      for (const auto& item : split_list(value)) {
        if (item == "same") c.series.values.push_back(0.0);
        else if (item == "conjugate") c.series.values.push_back(1.0);
        else c.series.values.push_back(to_double(key, item));
      }
    } else if (key == "trajectory.periods") c.trajectory.periods = to_int(key, value);
    else if (key == "trajectory.samples_per_period") c.trajectory.samples_per_period = to_int(key, value);
    else if (key == "numerics.N") c.numerics.truncation = to_int(key, value);
    else if (key == "numerics.energy_step") c.numerics.energy_step = to_double(key, value);
    else if (key == "numerics.steps_per_period") c.numerics.steps_per_period = to_int(key, value);
    else if (key == "numerics.steady_tol") c.numerics.steady_tol = to_double(key, value);
    else if (key == "numerics.max_periods") c.numerics.max_periods = to_int(key, value);
    else if (key == "numerics.finegf_occupations") c.numerics.finegf_occupations = value;
    else if (key == "methods.list") {
      c.methods.clear();
      for (const auto& item : split_list(value)) c.methods.push_back(parse_method(item));
    } else if (key == "output.name") c.output.name = value;
    else if (key == "output.title") c.output.title = value;
    else if (key == "output.plot") c.output.plot = to_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ConfigEntries entries = read_ini_file(path);
  for (const auto& o : overrides) apply_override(entries, o);
  return build_config(entries);
}

ExperimentConfig config_from_text(const std::string& text, const std::vector<std::string>& overrides) {
  ConfigEntries entries = parse_ini(text);
  for (const auto& o : overrides) apply_override(entries, o);
  return build_config(entries);
}

ExperimentConfig with_value(const ExperimentConfig& cfg, Variable v, double value) {
  ExperimentConfig c = cfg;
  switch (v) {
    case Variable::none:
      break;
    case Variable::mu_L:
      c.leads.mu_L = value;
      break;
    case Variable::omega:
      if (!(value > 0.0)) throw ConfigError("omega values must be positive");
      c.model.omega = value;
      break;
    case Variable::amplitude:
      if (value < 0.0) throw ConfigError("amplitude values must be non-negative");
      c.model.amplitude = value;
      break;
    case Variable::u:
      if (value < 0.0) throw ConfigError("u values must be non-negative");
      c.model.u = value;
      break;
    case Variable::spin_drive:
      if (value != 0.0 && value != 1.0) throw ConfigError("spin_drive values must be same or conjugate");
      c.model.spin_drive = value == 0.0 ? "same" : "conjugate";
      break;
  }
  return c;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace floquet::app
