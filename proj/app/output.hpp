#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "experiment.hpp"

namespace floquet::app {

inline constexpr const char* version = "1.0.0";

// RFC-4180 field quoting and CRLF record separators.
std::string csv_field(const std::string& field);
std::string csv_record(const std::vector<std::string>& fields);
std::string format_number(double x);

std::string sweep_csv(const SweepResult& sweep);
std::string trajectory_csv(const TrajectoryResult& trajectory);
std::string sweep_svg(const SweepResult& sweep);
std::string trajectory_svg(const TrajectoryResult& trajectory);

struct ManifestInput {
  std::string command;
  const ExperimentConfig* config = nullptr;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> method_seconds;
  std::vector<std::string> files;
  int failures = 0;
  int non_converged = 0;
};
std::string manifest_json(const ManifestInput& input);

void write_text(const std::filesystem::path& path, const std::string& text);

// Writes <name>.csv, <name>.svg (when enabled) and <name>.manifest.json into dir; returns the paths.
std::vector<std::filesystem::path> write_sweep(const std::filesystem::path& dir, const SweepResult& sweep,
                                               const std::string& command);
std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir, const TrajectoryResult& trajectory,
                                                    const std::string& command);

}  // namespace floquet::app
