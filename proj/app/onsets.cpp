#include "onsets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace floquet::app {

std::vector<double> detect_onsets(const std::vector<double>& x, const std::vector<double>& y, double fraction) {
  if (x.size() != y.size()) throw std::invalid_argument("onset detection needs matching x and y");
  const std::size_t n = x.size();
  if (n < 3) return {};
  const double h = x[1] - x[0];
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / h;
  d[n - 1] = (y[n - 1] - y[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  const double peak = *std::max_element(d.begin(), d.end());
  if (!(peak > 0.0)) return {};
  const double threshold = fraction * peak;

  std::vector<double> onsets;
  std::size_t i = 0;
  while (i < n) {
    if (!(d[i] > threshold)) {
      ++i;
      continue;
    }
    std::size_t best = i;
    while (i < n && d[i] > threshold) {
      if (d[i] > d[best]) best = i;
      ++i;
    }
    double position = x[best];
    if (best > 0 && best + 1 < n) {
      const double curvature = d[best - 1] - 2.0 * d[best] + d[best + 1];
      if (curvature < 0.0) position += 0.5 * h * (d[best - 1] - d[best + 1]) / curvature;
    }
    onsets.push_back(position);
  }
  return onsets;
}

std::vector<SeriesComparison> compare_methods(const SweepResult& sweep) {
  std::vector<SeriesComparison> out;
  const std::size_t M = sweep.config.methods.size();
  for (std::size_t s = 0; s < sweep.series_values.size(); ++s) {
    SeriesComparison c;
    c.series_value = sweep.series_values[s];
    for (const auto& point : sweep.results[s]) {
      double worst = 0.0;
      for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = a + 1; b < M; ++b)
          if (point[a].ok() && point[b].ok()) worst = std::max(worst, std::abs(point[a].current_L - point[b].current_L));
      c.max_pairwise_current_deviation.push_back(worst);
    }
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<double> x, n, j;
      for (std::size_t p = 0; p < sweep.points.size(); ++p) {
        const MethodResult& r = sweep.results[s][p][m];
        if (!r.ok()) continue;
        x.push_back(sweep.points[p]);
        n.push_back(r.n);
        j.push_back(r.current_L);
      }
      // Onsets need an unbroken uniform grid.
      const bool complete = x.size() == sweep.points.size();
      c.number_onsets.push_back(complete ? detect_onsets(x, n) : std::vector<double>{});
      c.current_onsets.push_back(complete ? detect_onsets(x, j) : std::vector<double>{});
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::string list(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.4f", x);
    out += (out.empty() ? "" : " ") + std::string(buf);
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string comparison_report(const SweepResult& sweep, const std::vector<SeriesComparison>& comparison) {
  const ExperimentConfig& cfg = sweep.config;
  std::string out;
  char buf[256];
  for (const auto& c : comparison) {
    if (cfg.series.variable != Variable::none) {
      std::snprintf(buf, sizeof buf, "series %s = %.6g\n", variable_name(cfg.series.variable).c_str(), c.series_value);
      out += buf;
    }
    double worst = 0.0, scale = 0.0;
    for (double d : c.max_pairwise_current_deviation) worst = std::max(worst, d);
    for (const auto& point : sweep.results[std::size_t(&c - comparison.data())])
      for (const auto& r : point)
        if (r.ok()) scale = std::max(scale, std::abs(r.current_L));
    std::snprintf(buf, sizeof buf, "  max pairwise |J_L| deviation: %.3e (%.3g%% of max |J_L|)\n", worst,
                  scale > 0.0 ? 100.0 * worst / scale : 0.0);
    out += buf;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      std::snprintf(buf, sizeof buf, "  %-7s n onsets (%zu): %s\n", method_name(cfg.methods[m]).c_str(),
                    c.number_onsets[m].size(), list(c.number_onsets[m]).c_str());
      out += buf;
      std::snprintf(buf, sizeof buf, "  %-7s J_L onsets (%zu): %s\n", method_name(cfg.methods[m]).c_str(),
                    c.current_onsets[m].size(), list(c.current_onsets[m]).c_str());
      out += buf;
    }
  }
  std::snprintf(buf, sizeof buf, "failed points: %d, non-converged points: %d\n", sweep.failures(),
                sweep.non_converged());
  out += buf;
  return out;
}

}  // namespace floquet::app
