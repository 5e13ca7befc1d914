#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace floquet::app {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { vnegf, mnegf, finegf, hsqme, fsqme };

std::string method_name(Method m);
Method parse_method(const std::string& name);
bool is_qme(Method m);

// Parameters that a sweep or series may vary.
enum class Variable { none, mu_L, omega, amplitude, u, spin_drive };

std::string variable_name(Variable v);
std::string variable_unit(Variable v);

enum class RunMode { sweep, trajectory };

struct ModelConfig {
  double eps1 = -0.1;
  double eps2 = 0.1;
  double amplitude = 0.1;
  double omega = 0.2;
  std::string driving = "cosine";  // cosine | circular
  bool spinful = false;
  double u = 0.0;
  std::string spin_drive = "same";  // same | conjugate (spin-down drive is the complex conjugate)
};

struct LeadConfig {
  double gamma_L = 0.0025;
  double gamma_R = 0.0025;
  double mu_L = 0.0;
  double mu_R = -0.4;
  double kT = 0.0036;
};

struct SweepConfig {
  Variable variable = Variable::mu_L;
  double start = -0.4;
  double stop = 0.4;
  double step = 0.01;
  std::vector<double> points() const;
};

struct SeriesConfig {
  Variable variable = Variable::none;
  std::vector<double> values;  // for spin_drive: 0 = same, 1 = conjugate
};

struct TrajectoryConfig {
  int periods = 60;
  int samples_per_period = 20;
};

struct NumericsConfig {
  int truncation = 3;
  double energy_step = 0.0;  // 0 selects the automatic step
  int steps_per_period = 2000;
  double steady_tol = 1e-7;
  int max_periods = 5000;
  std::string finegf_occupations = "fixed_half";  // fixed_half | self_consistent
};

struct OutputConfig {
  std::string name = "run";
  std::string title;
  bool plot = true;
};

struct ExperimentConfig {
  RunMode mode = RunMode::sweep;
  ModelConfig model;
  LeadConfig leads;
  SweepConfig sweep;
  SeriesConfig series;
  TrajectoryConfig trajectory;
  NumericsConfig numerics;
  std::vector<Method> methods{Method::vnegf, Method::mnegf};
  OutputConfig output;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;
  // Sorted key = value lines; equal configs give equal text.
  std::string canonical() const;
};

// Flat key-value view of a config: "section.key" -> value text.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_ini(const std::string& text);
ConfigEntries read_ini_file(const std::string& path);
// "section.key=value"
void apply_override(ConfigEntries& entries, const std::string& assignment);
// Unknown keys and malformed values are config errors.
ExperimentConfig build_config(const ConfigEntries& entries);

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
ExperimentConfig config_from_text(const std::string& text, const std::vector<std::string>& overrides = {});

// Copy of cfg with one variable set (series or sweep value).
ExperimentConfig with_value(const ExperimentConfig& cfg, Variable v, double value);

std::uint64_t fnv1a(const std::string& text);

}  // namespace floquet::app
