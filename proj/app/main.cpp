#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiment.hpp"
#include "onsets.hpp"
#include "output.hpp"
#include "registry.hpp"

namespace {

using namespace floquet::app;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_io = 3;
constexpr int exit_nonconvergence = 4;

std::string command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) out += (i ? " " : "") + std::string(argv[i]);
  return out;
}

int report(const SweepResult& sweep, bool strict) {
  const int bad = sweep.failures() + sweep.non_converged();
  if (bad > 0) std::cerr << "warning: " << bad << " point(s) failed or did not converge\n";
  return strict && bad > 0 ? exit_nonconvergence : exit_ok;
}

int run_config(const ExperimentConfig& cfg, const std::filesystem::path& out, bool strict, int threads,
               const std::string& command) {
  if (cfg.mode == RunMode::trajectory) {
    const TrajectoryResult t = run_trajectory(cfg);
    for (const auto& f : write_trajectory(out, t, command)) std::cout << "wrote " << f.string() << "\n";
    return exit_ok;
  }
  const SweepResult sweep = run_sweep(cfg, threads);
  for (const auto& f : write_sweep(out, sweep, command)) std::cout << "wrote " << f.string() << "\n";
  return report(sweep, strict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet transport through a periodically driven quantum dot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  bool strict = false;
  int threads = 0;
  int figure = 0;
  bool print_only = false;

  CLI::App* run = app.add_subcommand("run", "Run a sweep or trajectory from a config file");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--set", overrides, "Override a config value, section.key=value");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--strict", strict, "Exit with code 4 when any point fails to converge");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI::App* compare = app.add_subcommand("compare", "Run a config and report cross-method agreement and onsets");
  compare->add_option("--config", config_path, "INI config file")->required();
  compare->add_option("--set", overrides, "Override a config value, section.key=value");
  compare->add_option("--out", out_dir, "Also write results to this directory");
  compare->add_flag("--strict", strict, "Exit with code 4 when any point fails to converge");
  compare->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI::App* reproduce = app.add_subcommand("reproduce", "Run the built-in configuration of a figure");
  reproduce->add_option("--figure", figure, "Figure number")->required()->check(CLI::Range(2, 8));
  reproduce->add_option("--set", overrides, "Override a config value, section.key=value");
  std::string figures_dir = "figures";
  reproduce->add_option("--out", figures_dir, "Output directory")->capture_default_str();
  reproduce->add_flag("--print-config", print_only, "Print the built-in config instead of running it");
  reproduce->add_flag("--strict", strict, "Exit with code 4 when any point fails to converge");
  reproduce->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const std::string command = command_line(argc, argv);
  try {
    if (*run) return run_config(load_config(config_path, overrides), out_dir, strict, threads, command);

    if (*compare) {
      const ExperimentConfig cfg = load_config(config_path, overrides);
      if (cfg.mode != RunMode::sweep) throw ConfigError("compare needs a sweep config");
      if (cfg.methods.size() < 2) throw ConfigError("compare needs at least two methods");
      const SweepResult sweep = run_sweep(cfg, threads);
      std::cout << comparison_report(sweep, compare_methods(sweep));
      if (!out_dir.empty())
        for (const auto& f : write_sweep(out_dir, sweep, command)) std::cout << "wrote " << f.string() << "\n";
      return report(sweep, strict);
    }

    int status = exit_ok;
    for (const RegistryEntry& entry : figure_entries(figure)) {
      if (print_only) {
        std::cout << "# " << entry.name << "\n" << entry.text() << "\n";
        continue;
      }
      std::cout << "figure " << figure << ": " << entry.name << "\n";
      status = std::max(status, run_config(entry.config(overrides), figures_dir, strict, threads, command));
    }
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
