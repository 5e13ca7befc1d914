// Acceptance checks: one PASS/FAIL line per criterion. Exit status is nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "experiment.hpp"
#include "floquet/qme.hpp"
#include "floquet_oracle/oracle.hpp"
#include "onsets.hpp"
#include "registry.hpp"

namespace {

using namespace floquet;
using namespace floquet::app;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt("%.4f", x);
  return "[" + out + "]";
}

// Figure 2 parameters are the config defaults.
ExperimentConfig base_config(std::vector<Method> methods) {
  ExperimentConfig cfg;
  cfg.methods = std::move(methods);
  return cfg;
}

ExperimentConfig at(const ExperimentConfig& cfg, Variable v, double value) { return with_value(cfg, v, value); }

std::size_t method_index(const SweepResult& s, Method m) {
  const auto& ms = s.config.methods;
  return std::size_t(std::find(ms.begin(), ms.end(), m) - ms.begin());
}

std::vector<double> column(const SweepResult& s, std::size_t series, Method m,
                           const std::function<double(const MethodResult&)>& field) {
  std::vector<double> out;
  for (const auto& point : s.results[series]) out.push_back(field(point[method_index(s, m)]));
  return out;
}

double n_of(const MethodResult& r) { return r.n; }
double jl_of(const MethodResult& r) { return r.current_L; }

bool all_ok(const SweepResult& s) { return s.failures() == 0 && s.non_converged() == 0; }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Criterion 1 and the shared figure 2 sweep.
SweepResult fig2_sweep() {
  return run_sweep(base_config({Method::vnegf, Method::mnegf, Method::hsqme, Method::fsqme}));
}

Outcome four_method_agreement(const SweepResult& s) {
  const double kT = s.config.leads.kT;
  std::vector<double> onsets;
  for (Method m : s.config.methods) {
    const auto o = detect_onsets(s.points, column(s, 0, m, jl_of));
    onsets.insert(onsets.end(), o.begin(), o.end());
  }
  double worst = 0.0, scale = 0.0, negf = 0.0;
  for (std::size_t p = 0; p < s.points.size(); ++p) {
    const auto& point = s.results[0][p];
    negf = std::max(negf, std::abs(point[0].current_L - point[1].current_L));
    bool plateau = true;
    for (double o : onsets) plateau = plateau && std::abs(s.points[p] - o) >= 3.0 * kT;
    if (!plateau) continue;
    for (std::size_t a = 0; a < point.size(); ++a) {
      scale = std::max(scale, std::abs(point[a].current_L));
      for (std::size_t b = a + 1; b < point.size(); ++b)
        worst = std::max(worst, std::abs(point[a].current_L - point[b].current_L));
    }
  }
  const double relative = worst / scale;
  return {all_ok(s) && relative < 0.05 && negf < 1e-6,
          fmt("plateau deviation %.3g%% of max plateau current (< 5%%), NEGF pair deviation %.3g (< 1e-6)",
              100.0 * relative, negf)};
}

Outcome plateau_doubling(const SweepResult& resonant) {
  bool pass = all_ok(resonant);
  std::string detail;
  for (double omega : {0.05, 0.2, 0.4}) {
    SweepResult s = resonant;
    if (omega != 0.2) s = run_sweep(at(base_config({Method::vnegf, Method::mnegf}), Variable::omega, omega));
    pass = pass && all_ok(s);
    const std::size_t expected = omega == 0.2 ? 4 : 2;
    for (Method m : {Method::vnegf, Method::mnegf}) {
      const auto o = detect_onsets(s.points, column(s, 0, m, n_of));
      pass = pass && o.size() == expected;
      detail += fmt("w=%.2f ", omega) + method_name(m) + fmt(" %.0f onsets (want %.0f); ", double(o.size()),
                                                              double(expected));
    }
  }
  return {pass, detail};
}

Outcome amplitude_splitting(const SweepResult& a01) {
  bool pass = all_ok(a01);
  const double step = a01.config.sweep.step;
  std::string detail;
  std::vector<double> outer;
  for (double A : {0.025, 0.05, 0.1}) {
    SweepResult s = a01;
    if (A != 0.1) s = run_sweep(at(base_config({Method::vnegf}), Variable::amplitude, A));
    pass = pass && all_ok(s);
    const auto o = detect_onsets(s.points, column(s, 0, Method::vnegf, n_of));
    double asymmetry = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) asymmetry = std::max(asymmetry, std::abs(o[i] + o[o.size() - 1 - i]));
    pass = pass && o.size() >= 2 && o.size() % 2 == 0 && asymmetry <= step;
    outer.push_back(o.size() >= 2 ? o.back() - o.front() : 0.0);
    detail += fmt("A=%.3f onsets ", A) + list(o) + fmt(" asym %.2g; ", asymmetry);
  }
  const bool monotone = outer[0] < outer[1] && outer[1] < outer[2];
  detail += "outer pair separation " + list(outer);
  return {pass && monotone, detail};
}

Outcome static_oracle() {
  ExperimentConfig cfg = at(base_config({}), Variable::amplitude, 0.0);
  const double kT = cfg.leads.kT;
  double negf_rel = 0.0, qme_abs = 0.0;
  for (double mu : {-0.3, -0.1, -0.02, 0.05, 0.1, 0.3}) {
    const ExperimentConfig c = at(cfg, Variable::mu_L, mu);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 0) = c.model.eps1;
    h(1, 1) = c.model.eps2;
    const std::vector<floquet_oracle::Lead> leads{
        {c.leads.gamma_L * Eigen::MatrixXcd::Identity(2, 2), c.leads.mu_L, kT},
        {c.leads.gamma_R * Eigen::MatrixXcd::Identity(2, 2), c.leads.mu_R, kT}};
    const auto exact = floquet_oracle::landauer_static(h, leads);
    for (Method m : {Method::vnegf, Method::mnegf}) {
      const MethodResult r = evaluate(c, m);
      if (!r.ok()) return {false, method_name(m) + " failed: " + r.status};
      negf_rel = std::max({negf_rel, std::abs(r.n - exact.n) / std::abs(exact.n),
                           std::abs(r.current_L - exact.current[0]) / std::abs(exact.current[0]),
                           std::abs(r.current_R - exact.current[1]) / std::abs(exact.current[1])});
    }
    const auto pauli = floquet_oracle::pauli_steady(
        {c.model.eps1, c.model.eps2}, {{c.leads.gamma_L, c.leads.gamma_L}, {c.leads.gamma_R, c.leads.gamma_R}},
        {c.leads.mu_L, c.leads.mu_R}, {kT, kT});
    const double n_pauli = pauli.occupation[0] + pauli.occupation[1];
    for (Method m : {Method::hsqme, Method::fsqme}) {
      const MethodResult r = evaluate(c, m);
      if (!r.ok()) return {false, method_name(m) + " failed: " + r.status};
      qme_abs = std::max({qme_abs, std::abs(r.n - n_pauli), std::abs(r.current_L - pauli.total_current[0]),
                          std::abs(r.current_R - pauli.total_current[1])});
    }
  }
  return {negf_rel < 1e-8 && qme_abs < 1e-6,
          fmt("NEGF vs Landauer max relative %.3g (< 1e-8), QME vs Pauli max absolute %.3g (< 1e-6)", negf_rel,
              qme_abs)};
}

// Peak-to-peak of the residual after removing a least-squares quadratic trend.
double oscillation_amplitude(const std::vector<double>& t, const std::vector<double>& y) {
  Eigen::MatrixXd X(Eigen::Index(t.size()), 3);
  Eigen::VectorXd Y(Eigen::Index(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    X.row(Eigen::Index(i)) << 1.0, t[i], t[i] * t[i];
    Y(Eigen::Index(i)) = y[i];
  }
  const Eigen::VectorXd residual = Y - X * X.colPivHouseholderQr().solve(Y);
  return residual.maxCoeff() - residual.minCoeff();
}

Outcome hs_fs_consistency() {
  const ExperimentConfig cfg = base_config({});
  double worst = 0.0;
  for (double mu : {-0.15, 0.0, 0.15}) {
    const ExperimentConfig c = at(cfg, Variable::mu_L, mu);
    const MethodResult hs = evaluate(c, Method::hsqme), fs = evaluate(c, Method::fsqme);
    if (!hs.ok() || !fs.ok()) return {false, "steady state failed: " + hs.status + " / " + fs.status};
    worst = std::max({worst, std::abs(hs.n - fs.n), std::abs(hs.current_L - fs.current_L)});
  }
  ExperimentConfig traj = at(cfg, Variable::mu_L, 0.0);
  traj.mode = RunMode::trajectory;
  traj.methods = {Method::hsqme, Method::fsqme};
  traj.trajectory.periods = 2;
  traj.trajectory.samples_per_period = 200;
  const TrajectoryResult tr = run_trajectory(traj);
  const double hs_amp = oscillation_amplitude(tr.times, tr.n[0][0]);
  const double fs_amp = oscillation_amplitude(tr.times, tr.n[0][1]);
  const double ratio = fs_amp / hs_amp;
  return {worst < 1e-4 && ratio >= 5.0,
          fmt("steady-state max |HS - FS| %.3g (< 1e-4); short-time oscillation FS/HS = %.4g (want >= 5, "
              "HS %.3g, FS %.3g)",
              worst, ratio, hs_amp, fs_amp)};
}

Outcome conservation(const SweepResult& fig2) {
  std::string detail;
  bool pass = all_ok(fig2);
  auto leak = [](const SweepResult& s, Method m) {
    double worst = 0.0, scale = 0.0;
    for (const auto& point : s.results[0]) {
      const MethodResult& r = point[method_index(s, m)];
      worst = std::max(worst, std::abs(r.current_L + r.current_R));
      scale = std::max(scale, std::abs(r.current_L));
    }
    return worst / scale;
  };
  const double m3 = leak(fig2, Method::mnegf), v3 = leak(fig2, Method::vnegf);
  ExperimentConfig fine = base_config({Method::vnegf});
  fine.numerics.truncation = 6;
  fine.sweep.step = 0.05;
  const SweepResult v6sweep = run_sweep(fine);
  const double v6 = leak(v6sweep, Method::vnegf);
  pass = pass && all_ok(v6sweep) && m3 <= 1e-8 && v6 <= 1e-8;
  detail += fmt("|J_L+J_R|/max|J_L|: mnegf N=3 %.2g, vnegf N=6 %.2g (<= 1e-8), vnegf N=3 %.2g; ", m3, v6, v3);

  const ExperimentConfig c = at(base_config({}), Variable::mu_L, 0.0);
  const DotModel model = build_model(c);
  const OpenDot dot = make_spinless_dot(model.up, model.leads);
  double drift = 0.0;
  {
    HilbertSpaceFqme q(dot, c.numerics.truncation);
    const LiouvilleSpace space = q.liouville_space();
    const PeriodicLinearFlow flow = q.flow(space, c.numerics.steps_per_period);
    VectorXc v = space.vectorize(q.empty_state());
    for (int p = 0; p < 100; ++p) v = flow.period_map() * v;
    const MatrixXc identity = MatrixXc::Identity(dot.basis.dim(), dot.basis.dim());
    drift = std::max(drift, std::abs((space.trace_with(identity) * v)(0) - 1.0));

    // Continuity along the transient: dn/dt = sum of lead currents.
    const auto covectors = q.observable_covectors(space);
    const Trajectory tr = sample_trajectory(flow, space.vectorize(q.empty_state()), covectors, 2, 1);
    const std::size_t j0 = 1 + dot.species.size();
    double continuity = 0.0;
    for (std::size_t i = 1; i + 1 < tr.times.size(); ++i) {
      const double dndt = (tr.values[i + 1][0] - tr.values[i - 1][0]) / (tr.times[i + 1] - tr.times[i - 1]);
      continuity = std::max(continuity, std::abs(dndt - tr.values[i][j0] - tr.values[i][j0 + 1]));
    }
    pass = pass && continuity < 1e-6;
    detail += fmt("continuity max error %.2g (< 1e-6); ", continuity);
  }
  {
    FloquetSpaceFqme q(dot, c.numerics.truncation);
    const LiouvilleSpace space = q.liouville_space();
    const PeriodicLinearFlow flow = q.flow(space, c.numerics.steps_per_period);
    VectorXc v = q.vectorize(space, q.empty_state());
    for (int p = 0; p < 100; ++p) v = flow.period_map() * v;
    // Tr rho(0) = sum over Fourier coefficients of their traces.
    const MatrixXc identity = MatrixXc::Identity(dot.basis.dim(), dot.basis.dim());
    const RowVectorXc block = space.trace_with(identity);
    cplx trace = 0.0;
    for (Eigen::Index b = 0; b < v.size() / space.size(); ++b)
      trace += (block * v.segment(b * space.size(), space.size()))(0);
    drift = std::max(drift, std::abs(trace - 1.0));
  }
  pass = pass && drift < 1e-9;
  detail += fmt("trace drift over 100 periods %.2g (< 1e-9)", drift);
  return {pass, detail};
}

// Every onset of one list lies within tol of some onset of the other.
double match_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (double x : a) {
    double best = INFINITY;
    for (double y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

Outcome interacting_onsets() {
  const ExperimentConfig cfg = figure_entries(7).front().config();
  const SweepResult s = run_sweep(cfg);
  const double tol = 2.0 * cfg.leads.kT;
  bool pass = all_ok(s);
  std::string detail;
  for (std::size_t k = 0; k < s.series_values.size(); ++k) {
    const auto qme = detect_onsets(s.points, column(s, k, Method::hsqme, jl_of));
    const auto eom = detect_onsets(s.points, column(s, k, Method::finegf, jl_of));
    const double forward = match_distance(qme, eom), backward = match_distance(eom, qme);
    pass = pass && std::max(forward, backward) <= tol;
    detail += fmt("A=%.2f hsqme ", s.series_values[k]) + list(qme) + " finegf " + list(eom) +
              fmt(" worst match %.3g (fqme->finegf %.3g, tol %.4g); ", std::max(forward, backward), forward, tol);
  }
  return {pass, detail};
}

Outcome blockade_ratio() {
  ExperimentConfig cfg = base_config({Method::hsqme});
  cfg.model.spinful = true;
  cfg.model.amplitude = 0.0;
  cfg.model.u = 0.1;
  cfg.leads.gamma_L = cfg.leads.gamma_R = 0.005;
  const SweepResult s = run_sweep(cfg);
  const auto j = column(s, 0, Method::hsqme, jl_of);
  const auto o = detect_onsets(s.points, j);
  if (!all_ok(s) || o.size() < 2) return {false, "onsets " + list(o)};
  // Plateau value: sample nearest the midpoint between consecutive onsets.
  auto value_at = [&](double x) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i)
      if (std::abs(s.points[i] - x) < std::abs(s.points[best] - x)) best = i;
    return j[best];
  };
  const double next = o.size() > 2 ? o[2] : s.points.back();
  const double base = j.front();
  const double first = value_at(0.5 * (o[0] + o[1])) - base;
  const double second = value_at(0.5 * (o[1] + next)) - value_at(0.5 * (o[0] + o[1]));
  const double ratio = first / second;
  return {ratio >= 1.8 && ratio <= 2.2,
          "onsets " + list(o) + fmt(" step heights %.4g, %.4g, ratio %.4g (in [1.8, 2.2])", first, second, ratio)};
}

Outcome spin_current() {
  const ExperimentConfig cfg = figure_entries(8).back().config();  // u = 0.1, series over spin_drive
  const SweepResult s = run_sweep(cfg);
  if (!all_ok(s)) return {false, "sweep failed"};
  double split_same = 0.0, split_conj = 0.0, mean_conj = 0.0;
  for (std::size_t k = 0; k < s.series_values.size(); ++k) {
    double split = 0.0, mean = 0.0;
    for (const auto& point : s.results[k]) {
      const MethodResult& r = point[0];
      split = std::max(split, std::abs(r.current_L_spin[0] - r.current_L_spin[1]));
      mean += std::abs(r.current_L) / double(s.points.size());
    }
    if (s.series_values[k] == 0.0) split_same = split;
    else {
      split_conj = split;
      mean_conj = mean;
    }
  }
  return {split_conj > 0.1 * mean_conj && split_same < 1e-8,
          fmt("model 2 max|J_up-J_down| %.3g vs 10%% of mean current %.3g; model 1 max|J_up-J_down| %.2g (< 1e-8)",
              split_conj, 0.1 * mean_conj, split_same)};
}

Outcome robustness() {
  const ExperimentConfig cfg = base_config({});
  const DotModel model = build_model(cfg);
  const double step = energy_step(cfg, model);
  double worst = 0.0;
  std::string where;
  for (double mu : {-0.3, -0.15, -0.05, 0.0, 0.05, 0.15, 0.3}) {
    const ExperimentConfig c = at(cfg, Variable::mu_L, mu);
    for (Method m : {Method::vnegf, Method::mnegf, Method::hsqme, Method::fsqme}) {
      ExperimentConfig fine = c;
      if (is_qme(m)) fine.numerics.steps_per_period *= 2;
      else fine.numerics.energy_step = 0.5 * step;
      const MethodResult a = evaluate(c, m), b = evaluate(fine, m);
      if (!a.ok() || !b.ok()) return {false, method_name(m) + " failed"};
      for (auto [x, y] : {std::pair{a.n, b.n}, {a.current_L, b.current_L}, {a.current_R, b.current_R}}) {
        const double rel = std::abs(x - y) / std::abs(x);
        if (rel > worst) {
          worst = rel;
          where = method_name(m) + fmt(" at mu_L=%.2f", mu);
        }
      }
    }
  }

  ExperimentConfig low = at(base_config({Method::vnegf, Method::mnegf}), Variable::omega, 0.05);
  low.sweep.step = 0.05;
  ExperimentConfig reference = low;
  reference.numerics.truncation = 6;
  const SweepResult s3 = run_sweep(low), s6 = run_sweep(reference);
  auto distance = [&](Method m) {
    double d = 0.0;
    for (auto field : {n_of, jl_of}) {
      const auto a = column(s3, 0, m, field), b = column(s6, 0, m, field);
      double diff = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
      d = std::max(d, diff / max_abs(b));
    }
    return d;
  };
  const double dv = distance(Method::vnegf), dm = distance(Method::mnegf);
  return {all_ok(s3) && all_ok(s6) && worst < 1e-6 && dv < dm,
          fmt("halved-step max relative change %.3g (< 1e-6, ", worst) + where +
              fmt("); w=0.05 N=3 vs N=6 relative distance vnegf %.3g < mnegf %.3g", dv, dm)};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult fig2 = fig2_sweep();
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return four_method_agreement(fig2); }},
      {2, [&] { return plateau_doubling(fig2); }},
      {3, [&] { return amplitude_splitting(fig2); }},
      {4, static_oracle},
      {5, hs_fs_consistency},
      {6, [&] { return conservation(fig2); }},
      {7, interacting_onsets},
      {8, blockade_ratio},
      {9, spin_current},
      {10, robustness},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s  [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed in %.0f s\n", int(criteria.size()) - failed, criteria.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return failed == 0 ? 0 : 1;
}
