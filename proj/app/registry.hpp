#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace floquet::app {

struct RegistryEntry {
  int figure;
  std::string name;
  std::vector<std::string> overrides;  // section.key=value applied to the shared base

  std::string text() const;  // merged INI text
  ExperimentConfig config(const std::vector<std::string>& extra = {}) const;
};

const std::vector<RegistryEntry>& registry();
// Entries for one figure; throws ConfigError for unknown figures.
std::vector<RegistryEntry> figure_entries(int figure);

}  // namespace floquet::app
