#pragma once

#include <string>
#include <vector>

#include "experiment.hpp"

namespace floquet::app {

// Rising steps of y(x) on a uniform grid. A step is a contiguous run where the central-difference
// derivative exceeds `fraction` times its maximum; its onset is the derivative peak, refined to sub-grid
// resolution by a parabola through the three samples around the peak.
std::vector<double> detect_onsets(const std::vector<double>& x, const std::vector<double>& y, double fraction = 0.25);

struct SeriesComparison {
  double series_value = 0.0;
  std::vector<double> max_pairwise_current_deviation;  // per sweep point, over methods that succeeded
  std::vector<std::vector<double>> current_onsets;     // per method
  std::vector<std::vector<double>> number_onsets;      // per method
};

std::vector<SeriesComparison> compare_methods(const SweepResult& sweep);
std::string comparison_report(const SweepResult& sweep, const std::vector<SeriesComparison>& comparison);

}  // namespace floquet::app
