#pragma once

#include <array>
#include <string>
#include <vector>

#include "config.hpp"
#include "floquet/model.hpp"

namespace floquet::app {

struct MethodResult {
  std::string status = "ok";  // ok | not_converged | error: <message>
  double n = 0.0;
  double current_L = 0.0;
  double current_R = 0.0;
  bool spin_resolved = false;
  std::array<double, 2> n_spin{};
  std::array<double, 2> current_L_spin{};
  std::array<double, 2> current_R_spin{};
  int work = 0;  // QME periods or occupation iterations
  double seconds = 0.0;
  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<double> series_values;  // one NaN entry when there is no series
  std::vector<double> points;
  // results[series][point][method]
  std::vector<std::vector<std::vector<MethodResult>>> results;
  double seconds = 0.0;
  int failures() const;
  int non_converged() const;
};

struct TrajectoryResult {
  ExperimentConfig config;
  std::vector<double> series_values;
  std::vector<double> times;
  // n[series][method][sample], current_L likewise
  std::vector<std::vector<std::vector<double>>> n, current_L;
  double seconds = 0.0;
};

struct DotModel {
  OneBodyFourierHamiltonian up;
  OneBodyFourierHamiltonian down;
  std::vector<LeadSpec> leads;
};

DotModel build_model(const ExperimentConfig& cfg);
double energy_step(const ExperimentConfig& cfg, const DotModel& model);

// One method at the parameters held in cfg. Numerical failures are reported in the status field.
MethodResult evaluate(const ExperimentConfig& cfg, Method method);

SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 0);
TrajectoryResult run_trajectory(const ExperimentConfig& cfg);

}  // namespace floquet::app
