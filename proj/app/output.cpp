#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

namespace floquet::app {

namespace {

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
const char* dashes[] = {"", "6,3", "2,2", "8,3,2,3", "1,3"};

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string series_label(const ExperimentConfig& cfg, double value) {
  if (cfg.series.variable == Variable::none) return "";
  if (cfg.series.variable == Variable::spin_drive) return value == 0.0 ? "same" : "conjugate";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", variable_name(cfg.series.variable).c_str(), value);
  return buf;
}

std::string series_cell(const ExperimentConfig& cfg, double value) {
  if (cfg.series.variable == Variable::spin_drive) return value == 0.0 ? "same" : "conjugate";
  return format_number(value);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Line {
  std::string label;
  std::vector<double> x, y;
  int color = 0;
  int dash = 0;
};

// Stacked panels sharing the x axis; each panel is (y label, lines).
std::string render_panels(const std::string& title, const std::string& x_label,
                          const std::vector<std::pair<std::string, std::vector<Line>>>& panels) {
  const double W = 760, panel_h = 260, left = 80, right = 200, top = 40, gap = 50;
  const double H = top + double(panels.size()) * (panel_h + gap) + 10;
  const double plot_w = W - left - right;
  std::string svg;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\" "
                "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
                W, H, W, H);
  svg += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">%s</text>\n",
                left + plot_w / 2, escape_xml(title).c_str());
  svg += buf;

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& [y_label, lines] = panels[p];
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& l : lines)
      for (std::size_t i = 0; i < l.x.size(); ++i) {
        if (!std::isfinite(l.y[i])) continue;
        x0 = std::min(x0, l.x[i]);
        x1 = std::max(x1, l.x[i]);
        y0 = std::min(y0, l.y[i]);
        y1 = std::max(y1, l.y[i]);
      }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double oy = top + double(p) * (panel_h + gap);
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
    auto sy = [&](double y) { return oy + panel_h - (y - y0) / (y1 - y0) * panel_h; };

    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", left,
                  oy, plot_w, panel_h);
    svg += buf;
    for (int t = 0; t <= 4; ++t) {
      const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n"
                    "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.3g</text>\n"
                    "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n"
                    "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n",
                    sx(xv), oy, sx(xv), oy + panel_h, sx(xv), oy + panel_h + 16, xv, left, sy(yv), left + plot_w,
                    sy(yv), left - 6, sy(yv) + 4, yv);
      svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s</text>\n"
                  "<text transform=\"translate(%.1f,%.1f) rotate(-90)\" text-anchor=\"middle\">%s</text>\n",
                  left + plot_w / 2, oy + panel_h + 34, escape_xml(x_label).c_str(), 18.0, oy + panel_h / 2,
                  escape_xml(y_label).c_str());
    svg += buf;

    double legend_y = oy + 12;
    for (const auto& l : lines) {
      std::string points;
      for (std::size_t i = 0; i < l.x.size(); ++i) {
        if (!std::isfinite(l.y[i])) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(l.x[i]), sy(l.y[i]));
        points += buf;
      }
      const char* color = palette[l.color % 8];
      const char* dash = dashes[l.dash % 5];
      svg += "<polyline fill=\"none\" stroke-width=\"1.6\" stroke=\"" + std::string(color) + "\"" +
             (*dash ? " stroke-dasharray=\"" + std::string(dash) + "\"" : "") + " points=\"" + points + "\"/>\n";
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"%s%s%s/>\n"
                    "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                    left + plot_w + 10, legend_y, left + plot_w + 34, legend_y, color, *dash ? " stroke-dasharray=\"" : "",
                    dash, *dash ? "\"" : "", left + plot_w + 40, legend_y + 4, escape_xml(l.label).c_str());
      svg += buf;
      legend_y += 16;
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string plot_title(const ExperimentConfig& cfg) { return cfg.output.title.empty() ? cfg.output.name : cfg.output.title; }

}  // namespace

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\r\n";
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string sweep_csv(const SweepResult& sweep) {
  const ExperimentConfig& cfg = sweep.config;
  const bool has_series = cfg.series.variable != Variable::none;
  const bool spin = cfg.model.spinful;
  std::vector<std::string> header;
  if (has_series)
    header.push_back(variable_name(cfg.series.variable) + " [" + variable_unit(cfg.series.variable) + "]");
  header.push_back(variable_name(cfg.sweep.variable) + " [" + variable_unit(cfg.sweep.variable) + "]");
  for (Method m : cfg.methods) {
    const std::string p = method_name(m) + ".";
    header.push_back(p + "n [1]");
    header.push_back(p + "J_L [eV/hbar]");
    header.push_back(p + "J_R [eV/hbar]");
    if (spin) {
      header.push_back(p + "n_up [1]");
      header.push_back(p + "n_down [1]");
      header.push_back(p + "J_L_up [eV/hbar]");
      header.push_back(p + "J_L_down [eV/hbar]");
    }
    header.push_back(p + "status");
  }
  std::string out = csv_record(header);
  for (std::size_t s = 0; s < sweep.series_values.size(); ++s)
    for (std::size_t p = 0; p < sweep.points.size(); ++p) {
      std::vector<std::string> row;
      if (has_series) row.push_back(series_cell(cfg, sweep.series_values[s]));
      row.push_back(format_number(sweep.points[p]));
      for (const MethodResult& r : sweep.results[s][p]) {
        row.push_back(format_number(r.n));
        row.push_back(format_number(r.current_L));
        row.push_back(format_number(r.current_R));
        if (spin) {
          const bool have = r.spin_resolved;
          const double blank = std::numeric_limits<double>::quiet_NaN();
          row.push_back(format_number(have ? r.n_spin[0] : blank));
          row.push_back(format_number(have ? r.n_spin[1] : blank));
          row.push_back(format_number(have ? r.current_L_spin[0] : blank));
          row.push_back(format_number(have ? r.current_L_spin[1] : blank));
        }
        row.push_back(r.status);
      }
      out += csv_record(row);
    }
  return out;
}

std::string trajectory_csv(const TrajectoryResult& trajectory) {
  const ExperimentConfig& cfg = trajectory.config;
  const bool has_series = cfg.series.variable != Variable::none;
  std::vector<std::string> header;
  if (has_series)
    header.push_back(variable_name(cfg.series.variable) + " [" + variable_unit(cfg.series.variable) + "]");
  header.push_back("t [hbar/eV]");
  for (Method m : cfg.methods) {
    header.push_back(method_name(m) + ".n [1]");
    header.push_back(method_name(m) + ".J_L [eV/hbar]");
  }
  std::string out = csv_record(header);
  for (std::size_t s = 0; s < trajectory.series_values.size(); ++s)
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
      std::vector<std::string> row;
      if (has_series) row.push_back(series_cell(cfg, trajectory.series_values[s]));
      row.push_back(format_number(trajectory.times[i]));
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        row.push_back(format_number(trajectory.n[s][m][i]));
        row.push_back(format_number(trajectory.current_L[s][m][i]));
      }
      out += csv_record(row);
    }
  return out;
}

std::string sweep_svg(const SweepResult& sweep) {
  const ExperimentConfig& cfg = sweep.config;
  std::vector<Line> n_lines, j_lines;
  for (std::size_t s = 0; s < sweep.series_values.size(); ++s)
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      Line n, j;
      const std::string series = series_label(cfg, sweep.series_values[s]);
      n.label = j.label = method_name(cfg.methods[m]) + (series.empty() ? "" : " " + series);
      n.color = j.color = int(s);
      n.dash = j.dash = int(m);
      for (std::size_t p = 0; p < sweep.points.size(); ++p) {
        const MethodResult& r = sweep.results[s][p][m];
        n.x.push_back(sweep.points[p]);
        j.x.push_back(sweep.points[p]);
        n.y.push_back(r.ok() ? r.n : std::numeric_limits<double>::quiet_NaN());
        j.y.push_back(r.ok() ? r.current_L : std::numeric_limits<double>::quiet_NaN());
      }
      n_lines.push_back(std::move(n));
      j_lines.push_back(std::move(j));
    }
  const std::string x_label = variable_name(cfg.sweep.variable) + " [" + variable_unit(cfg.sweep.variable) + "]";
  return render_panels(plot_title(cfg), x_label,
                       {{"period-averaged n", std::move(n_lines)}, {"period-averaged J_L [eV/hbar]", std::move(j_lines)}});
}

std::string trajectory_svg(const TrajectoryResult& trajectory) {
  const ExperimentConfig& cfg = trajectory.config;
  std::vector<Line> n_lines;
  for (std::size_t s = 0; s < trajectory.series_values.size(); ++s)
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      Line n;
      const std::string series = series_label(cfg, trajectory.series_values[s]);
      n.label = method_name(cfg.methods[m]) + (series.empty() ? "" : " " + series);
      n.color = int(s);
      n.dash = int(m);
      n.x = trajectory.times;
      n.y = trajectory.n[s][m];
      n_lines.push_back(std::move(n));
    }
  return render_panels(plot_title(cfg), "t [hbar/eV]", {{"n(t)", std::move(n_lines)}});
}

std::string manifest_json(const ManifestInput& input) {
  nlohmann::ordered_json j;
  j["tool"] = "floquet-transport";
  j["command"] = input.command;
  const std::string canonical = input.config->canonical();
  j["config_hash"] = "fnv1a64:" + hex64(fnv1a(canonical));
  j["config"] = canonical;
  j["versions"] = {{"floquet-transport", version},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", BOOST_LIB_VERSION},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", __VERSION__}};
  nlohmann::ordered_json timings;
  timings["wall_seconds"] = input.seconds;
  for (const auto& [name, secs] : input.method_seconds) timings["method_seconds"][name] = secs;
  j["timings"] = timings;
  j["failed_points"] = input.failures;
  j["non_converged_points"] = input.non_converged;
  j["files"] = input.files;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> write_sweep(const std::filesystem::path& dir, const SweepResult& sweep,
                                               const std::string& command) {
  ensure_dir(dir);
  const std::string name = sweep.config.output.name;
  std::vector<std::filesystem::path> files{dir / (name + ".csv")};
  write_text(files.back(), sweep_csv(sweep));
  if (sweep.config.output.plot) {
    files.push_back(dir / (name + ".svg"));
    write_text(files.back(), sweep_svg(sweep));
  }
  std::map<std::string, double> per_method;
  for (const auto& s : sweep.results)
    for (const auto& p : s)
      for (std::size_t m = 0; m < p.size(); ++m) per_method[method_name(sweep.config.methods[m])] += p[m].seconds;
  ManifestInput in{command, &sweep.config, sweep.seconds, {per_method.begin(), per_method.end()}, {}, sweep.failures(),
                   sweep.non_converged()};
  for (const auto& f : files) in.files.push_back(f.filename().string());
  files.push_back(dir / (name + ".manifest.json"));
  write_text(files.back(), manifest_json(in));
  return files;
}

std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir, const TrajectoryResult& trajectory,
                                                    const std::string& command) {
  ensure_dir(dir);
  const std::string name = trajectory.config.output.name;
  std::vector<std::filesystem::path> files{dir / (name + ".csv")};
  write_text(files.back(), trajectory_csv(trajectory));
  if (trajectory.config.output.plot) {
    files.push_back(dir / (name + ".svg"));
    write_text(files.back(), trajectory_svg(trajectory));
  }
  ManifestInput in{command, &trajectory.config, trajectory.seconds, {}, {}, 0, 0};
  for (const auto& f : files) in.files.push_back(f.filename().string());
  files.push_back(dir / (name + ".manifest.json"));
  write_text(files.back(), manifest_json(in));
  return files;
}

}  // namespace floquet::app
