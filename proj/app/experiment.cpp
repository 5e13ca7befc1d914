#include "experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "floquet/negf.hpp"
#include "floquet/negf_interacting.hpp"
#include "floquet/qme.hpp"

namespace floquet::app {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> series_of(const ExperimentConfig& cfg) {
  if (cfg.series.variable == Variable::none) return {nan};
  return cfg.series.values;
}

ExperimentConfig at_series(const ExperimentConfig& cfg, double value) {
  return cfg.series.variable == Variable::none ? cfg : with_value(cfg, cfg.series.variable, value);
}

MethodResult noninteracting_negf(const ExperimentConfig& cfg, const DotModel& model, Method method) {
  const int N = cfg.numerics.truncation;
  const double step = energy_step(cfg, model);
  auto solve = [&](const OneBodyFourierHamiltonian& h) {
    FloquetResolvent problem(h, model.leads, N);
    if (method == Method::vnegf) return transport_vlike(problem, vlike_window(model.leads, N, h.omega(), step));
    return transport_mlike(problem, QuasiEnergyGrid::bounded(h.omega(), step));
  };
  MethodResult r;
  if (!cfg.model.spinful) {
    const TransportResult t = solve(model.up);
    r.n = t.n_avg;
    r.current_L = t.current[0];
    r.current_R = t.current[1];
    return r;
  }
  r.spin_resolved = true;
  const TransportResult up = solve(model.up);
  const TransportResult down = cfg.model.spin_drive == "same" ? up : solve(model.down);
  r.n_spin = {up.n_avg, down.n_avg};
  r.current_L_spin = {up.current[0], down.current[0]};
  r.current_R_spin = {up.current[1], down.current[1]};
  r.n = up.n_avg + down.n_avg;
  r.current_L = up.current[0] + down.current[0];
  r.current_R = up.current[1] + down.current[1];
  return r;
}

MethodResult interacting_negf(const ExperimentConfig& cfg, const DotModel& model) {
  InteractingConfig ic;
  ic.mode = cfg.numerics.finegf_occupations == "fixed_half" ? OccupationMode::fixed_half
                                                            : OccupationMode::self_consistent;
  const SpinResolvedResult s =
      interacting_transport(model.up, model.down, model.leads, HubbardSpec{{cfg.model.u, cfg.model.u}},
                            cfg.numerics.truncation, QuasiEnergyGrid::bounded(cfg.model.omega, energy_step(cfg, model)), ic);
  MethodResult r;
  r.spin_resolved = true;
  r.n = s.n_total;
  r.current_L = s.current_total[0];
  r.current_R = s.current_total[1];
  for (int sp = 0; sp < 2; ++sp) {
    r.n_spin[std::size_t(sp)] = s.n[std::size_t(sp)];
    r.current_L_spin[std::size_t(sp)] = s.current[std::size_t(sp)][0];
    r.current_R_spin[std::size_t(sp)] = s.current[std::size_t(sp)][1];
  }
  r.work = s.iterations;
  if (!s.converged) r.status = "not_converged";
  return r;
}

OpenDot open_dot(const ExperimentConfig& cfg, const DotModel& model) {
  if (!cfg.model.spinful) return make_spinless_dot(model.up, model.leads);
  return make_spinful_dot(model.up, model.down, HubbardSpec{{cfg.model.u, cfg.model.u}}, model.leads);
}

QmeSettings qme_settings(const ExperimentConfig& cfg) {
  return {cfg.numerics.steps_per_period, cfg.numerics.steady_tol, cfg.numerics.max_periods};
}

MethodResult master_equation(const ExperimentConfig& cfg, const DotModel& model, Method method) {
  const OpenDot dot = open_dot(cfg, model);
  const QmeSteadyState s = method == Method::hsqme
                               ? HilbertSpaceFqme(dot, cfg.numerics.truncation).steady_state(qme_settings(cfg))
                               : FloquetSpaceFqme(dot, cfg.numerics.truncation).steady_state(qme_settings(cfg));
  MethodResult r;
  r.n = s.average.n;
  r.current_L = s.average.current[0];
  r.current_R = s.average.current[1];
  if (cfg.model.spinful) {
    r.spin_resolved = true;
    for (std::size_t sp = 0; sp < 2; ++sp) {
      r.n_spin[sp] = s.average.n_species[sp];
      r.current_L_spin[sp] = s.average.current_species[0][sp];
      r.current_R_spin[sp] = s.average.current_species[1][sp];
    }
  }
  r.work = s.periods;
  if (!s.converged) r.status = "not_converged";
  return r;
}

}  // namespace

int SweepResult::failures() const {
  int count = 0;
  for (const auto& s : results)
    for (const auto& p : s)
      for (const auto& m : p) count += m.status.rfind("error", 0) == 0;
  return count;
}

int SweepResult::non_converged() const {
  int count = 0;
  for (const auto& s : results)
    for (const auto& p : s)
      for (const auto& m : p) count += m.status == "not_converged";
  return count;
}

DotModel build_model(const ExperimentConfig& cfg) {
  const ModelConfig& m = cfg.model;
  OneBodyFourierHamiltonian up = m.driving == "cosine"
                                     ? build_cosine_model(m.eps1, m.eps2, m.amplitude, m.omega)
                                     : build_circular_model(m.eps1, m.eps2, m.amplitude, m.omega, +1);
  OneBodyFourierHamiltonian down = m.spin_drive == "conjugate" ? conjugate_drive(up) : up;
  std::vector<LeadSpec> leads{LeadSpec::uniform(2, cfg.leads.gamma_L, cfg.leads.mu_L, cfg.leads.kT),
                              LeadSpec::uniform(2, cfg.leads.gamma_R, cfg.leads.mu_R, cfg.leads.kT)};
  return {std::move(up), std::move(down), std::move(leads)};
}

double energy_step(const ExperimentConfig& cfg, const DotModel& model) {
  if (cfg.numerics.energy_step > 0.0) return cfg.numerics.energy_step;
  return default_energy_step(model.leads, cfg.model.omega);
}

MethodResult evaluate(const ExperimentConfig& cfg, Method method) {
  const auto t0 = std::chrono::steady_clock::now();
  MethodResult r;
  try {
    const DotModel model = build_model(cfg);
    switch (method) {
      case Method::vnegf:
      case Method::mnegf:
        r = noninteracting_negf(cfg, model, method);
        break;
      case Method::finegf:
        r = interacting_negf(cfg, model);
        break;
      case Method::hsqme:
      case Method::fsqme:
        r = master_equation(cfg, model, method);
        break;
    }
    if (!std::isfinite(r.n) || !std::isfinite(r.current_L) || !std::isfinite(r.current_R))
      r.status = "error: non-finite result";
  } catch (const std::exception& e) {
    r = MethodResult{};
    r.status = std::string("error: ") + e.what();
    r.n = r.current_L = r.current_R = nan;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult out;
  out.config = cfg;
  out.series_values = series_of(cfg);
  out.points = cfg.sweep.points();
  const std::size_t S = out.series_values.size(), P = out.points.size(), M = cfg.methods.size();
  out.results.assign(S, std::vector<std::vector<MethodResult>>(P, std::vector<MethodResult>(M)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < S * P * M; job = next++) {
      const std::size_t s = job / (P * M), p = (job / M) % P, m = job % M;
      const ExperimentConfig point =
          with_value(at_series(cfg, out.series_values[s]), cfg.sweep.variable, out.points[p]);
      out.results[s][p][m] = evaluate(point, cfg.methods[m]);
    }
  };
  if (threads <= 0) threads = int(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  out.seconds = seconds_since(t0);
  return out;
}

TrajectoryResult run_trajectory(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  TrajectoryResult out;
  out.config = cfg;
  out.series_values = series_of(cfg);
  const int stride = cfg.numerics.steps_per_period / cfg.trajectory.samples_per_period;
  for (double value : out.series_values) {
    const ExperimentConfig c = at_series(cfg, value);
    const DotModel model = build_model(c);
    const OpenDot dot = open_dot(c, model);
    std::vector<std::vector<double>> n_rows, j_rows;
    for (Method m : c.methods) {
      Trajectory tr;
      if (m == Method::hsqme) {
        HilbertSpaceFqme q(dot, c.numerics.truncation);
        const LiouvilleSpace space = q.liouville_space();
        tr = sample_trajectory(q.flow(space, c.numerics.steps_per_period), space.vectorize(q.empty_state()),
                               q.observable_covectors(space), c.trajectory.periods, stride);
      } else {
        FloquetSpaceFqme q(dot, c.numerics.truncation);
        const LiouvilleSpace space = q.liouville_space();
        tr = sample_trajectory(q.flow(space, c.numerics.steps_per_period), q.vectorize(space, q.empty_state()),
                               q.observable_covectors(space), c.trajectory.periods, stride);
      }
      // Observable layout: n, n per species, J per lead, ...
      const std::size_t current_index = 1 + dot.species.size();
      std::vector<double> n, j;
      for (const auto& row : tr.values) {
        n.push_back(row[0]);
        j.push_back(row[current_index]);
      }
      n_rows.push_back(std::move(n));
      j_rows.push_back(std::move(j));
      if (out.times.empty()) out.times = tr.times;
    }
    out.n.push_back(std::move(n_rows));
    out.current_L.push_back(std::move(j_rows));
  }
  out.seconds = seconds_since(t0);
  return out;
}

}  // namespace floquet::app
