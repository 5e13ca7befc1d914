#include "registry.hpp"

namespace floquet::app {

namespace {

// Shared two-level dot: eps = -0.1, 0.1; cosine drive A = 0.1; kT = 0.0036; mu_R = -0.4.
constexpr const char* base = R"([model]
eps1 = -0.1
eps2 = 0.1
amplitude = 0.1
omega = 0.2
driving = cosine
[leads]
gamma_L = 0.0025
gamma_R = 0.0025
mu_R = -0.4
kT = 0.0036
[sweep]
variable = mu_L
start = -0.4
stop = 0.4
step = 0.01
[numerics]
N = 3
)";

std::vector<RegistryEntry> build() {
  return {
      {2,
       "fig2",
       {
        "series.variable=omega",
        "series.values=0.05, 0.1, 0.2, 0.4",
        "methods.list=vnegf, mnegf",
        "output.name=fig2",
        "output.title=Averaged occupation and current for several driving frequencies",
       }},
      {3,
       "fig3",
       {
        "series.variable=amplitude",
        "series.values=0.025, 0.05, 0.1",
        "methods.list=vnegf, mnegf",
        "output.name=fig3",
        "output.title=Averaged occupation and current for several driving amplitudes",
       }},
      {4,
       "fig4",
       {
        "run.mode=trajectory",
        "series.variable=mu_L",
        "series.values=-0.15, 0.0, 0.15",
        "trajectory.periods=80",
        "trajectory.samples_per_period=20",
        "methods.list=hsqme, fsqme",
        "output.name=fig4",
        "output.title=Occupation dynamics from an empty dot",
       }},
      {5,
       "fig5",
       {
        "series.variable=omega",
        "series.values=0.2, 0.1",
        "methods.list=vnegf, mnegf, hsqme, fsqme",
        "output.name=fig5",
        "output.title=Averaged left current from four methods",
       }},
      {6,
       "fig6",
       {
        "model.spinful=true",
        "leads.gamma_L=0.005",
        "leads.gamma_R=0.005",
        "series.variable=u",
        "series.values=0.0, 0.05, 0.1, 0.25",
        "methods.list=hsqme",
        "output.name=fig6",
        "output.title=Spinful dot with on-site interaction",
       }},
      {7,
       "fig7",
       {
        "model.spinful=true",
        "model.u=0.3",
        "leads.gamma_L=0.005",
        "leads.gamma_R=0.005",
        "series.variable=amplitude",
        "series.values=0.1, 0.0",
        "methods.list=hsqme, finegf",
        "output.name=fig7",
        "output.title=Master equation and interacting Green function at u = 0.3",
       }},
      {8,
       "fig8_u0",
       {
        "model.spinful=true",
        "model.driving=circular",
        "model.amplitude=0.070710678118654752",
        "model.u=0.0",
        "leads.gamma_L=0.005",
        "leads.gamma_R=0.005",
        "series.variable=spin_drive",
        "series.values=same, conjugate",
        "methods.list=hsqme",
        "output.name=fig8_u0",
        "output.title=Circular drive without interaction",
       }},
      {8,
       "fig8_u0.1",
       {
        "model.spinful=true",
        "model.driving=circular",
        "model.amplitude=0.070710678118654752",
        "model.u=0.1",
        "leads.gamma_L=0.005",
        "leads.gamma_R=0.005",
        "series.variable=spin_drive",
        "series.values=same, conjugate",
        "methods.list=hsqme",
        "output.name=fig8_u0.1",
        "output.title=Circular drive with u = 0.1",
       }},
  };
}

}  // namespace

std::string RegistryEntry::text() const {
  ConfigEntries entries = parse_ini(base);
  for (const auto& o : overrides) apply_override(entries, o);
  std::string out, section;
  for (const auto& [key, value] : entries) {
    const std::string s = key.substr(0, key.find('.'));
    if (s != section) out += "[" + (section = s) + "]\n";
    out += key.substr(key.find('.') + 1) + " = " + value + "\n";
  }
  return out;
}

ExperimentConfig RegistryEntry::config(const std::vector<std::string>& extra) const {
  std::vector<std::string> all = overrides;
  all.insert(all.end(), extra.begin(), extra.end());
  return config_from_text(base, all);
}

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = build();
  return entries;
}

std::vector<RegistryEntry> figure_entries(int figure) {
  std::vector<RegistryEntry> out;
  for (const auto& e : registry())
    if (e.figure == figure) out.push_back(e);
  if (out.empty()) throw ConfigError("no registered configuration for figure " + std::to_string(figure));
  return out;
}

}  // namespace floquet::app
