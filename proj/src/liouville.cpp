#include "floquet/liouville.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace floquet {

MatrixXc apply_terms(const std::vector<Sandwich>& terms, const MatrixXc& rho) {
  MatrixXc out = MatrixXc::Zero(rho.rows(), rho.cols());
  for (const auto& t : terms) out.noalias() += t.left * rho * t.right;
  return out;
}

LiouvilleSpace::LiouvilleSpace(std::vector<int> labels) : labels_(std::move(labels)) {
  for (Index a = 0; a < dim(); ++a)
    for (Index b = 0; b < dim(); ++b)
      if (labels_[a] == labels_[b]) pairs_.emplace_back(a, b);
}

VectorXc LiouvilleSpace::vectorize(const MatrixXc& rho) const {
  VectorXc v(size());
  for (Index k = 0; k < size(); ++k) v(k) = rho(pairs_[k].first, pairs_[k].second);
  return v;
}

MatrixXc LiouvilleSpace::matrix(const VectorXc& v) const {
  MatrixXc rho = MatrixXc::Zero(dim(), dim());
  for (Index k = 0; k < size(); ++k) rho(pairs_[k].first, pairs_[k].second) = v(k);
  return rho;
}

MatrixXc LiouvilleSpace::superoperator(const std::vector<Sandwich>& terms) const {
  // (A rho B)_ab = sum_cd A_ac rho_cd B_db
  MatrixXc S = MatrixXc::Zero(size(), size());
  for (const auto& t : terms) {
    for (Index r = 0; r < size(); ++r) {
      const auto [a, b] = pairs_[r];
      for (Index c = 0; c < size(); ++c) {
        const cplx x = t.left(a, pairs_[c].first);
        if (x == 0.0) continue;
        S(r, c) += x * t.right(pairs_[c].second, b);
      }
    }
  }
  return S;
}

RowVectorXc LiouvilleSpace::trace_with(const MatrixXc& op) const {
  RowVectorXc c(size());
  for (Index k = 0; k < size(); ++k) c(k) = op(pairs_[k].second, pairs_[k].first);
  return c;
}

void LiouvilleSpace::check_closed(const std::vector<Sandwich>& terms) const {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  VectorXc v(size());
  for (Index k = 0; k < size(); ++k) v(k) = cplx(normal(rng), normal(rng));
  MatrixXc out = apply_terms(terms, matrix(v));
  const double scale = out.norm();
  for (const auto& [a, b] : pairs_) out(a, b) = 0.0;
  const double leaked = out.norm();
  if (leaked > 1e-10 * std::max(1.0, scale))
    throw std::logic_error("generator does not conserve the labels used for the reduced Liouville space");
}

double FourierCovector::value(double t, double omega, const VectorXc& v) const {
  cplx sum = 0.0;
  for (const auto& [k, c] : components) sum += std::exp(-I_unit * (double(k) * omega * t)) * (c * v)(0);
  return sum.real();
}

MatrixXc rk4_step_map(const MatrixXc& start, const MatrixXc& middle, const MatrixXc& end, double h) {
  const Index n = start.rows();
  const MatrixXc id = MatrixXc::Identity(n, n);
  const MatrixXc k1 = start;
  const MatrixXc k2 = middle * (id + 0.5 * h * k1);
  const MatrixXc k3 = middle * (id + 0.5 * h * k2);
  const MatrixXc k4 = end * (id + h * k3);
  return id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

PeriodicLinearFlow::PeriodicLinearFlow(std::map<int, MatrixXc> generator, double omega, int steps_per_period)
    : generator_(std::move(generator)), omega_(omega), steps_(steps_per_period) {
  if (steps_ < 1) throw std::invalid_argument("steps per period must be positive");
  if (generator_.empty()) throw std::invalid_argument("empty generator");
  autonomous_ = true;
  for (const auto& [k, m] : generator_)
    if (k != 0 && m.norm() > 0.0) autonomous_ = false;
  const Index n = generator_.begin()->second.rows();
  const double h = dt();
  if (autonomous_) {
    const MatrixXc& L = generator_.at(0);
    maps_.push_back(rk4_step_map(L, L, L, h));
    MatrixXc power = maps_.front();
    period_map_ = MatrixXc::Identity(n, n);
    for (int e = steps_; e > 0; e >>= 1) {
      if (e & 1) period_map_ = power * period_map_;
      if (e > 1) power = power * power;
    }
  } else {
    maps_.reserve(std::size_t(steps_));
    period_map_ = MatrixXc::Identity(n, n);
    MatrixXc start = generator_at(0.0);
    for (int j = 0; j < steps_; ++j) {
      const double t = j * h;
      MatrixXc end = generator_at(t + h);
      maps_.push_back(rk4_step_map(start, generator_at(t + 0.5 * h), end, h));
      period_map_ = maps_.back() * period_map_;
      start = std::move(end);
    }
  }
}

MatrixXc PeriodicLinearFlow::generator_at(double t) const {
  auto it = generator_.begin();
  MatrixXc L = std::exp(-I_unit * (double(it->first) * omega_ * t)) * it->second;
  for (++it; it != generator_.end(); ++it) L += std::exp(-I_unit * (double(it->first) * omega_ * t)) * it->second;
  return L;
}

std::vector<double> average_over_period(const PeriodicLinearFlow& flow, VectorXc& v,
                                        const std::vector<FourierCovector>& observables) {
  const int s = flow.steps();
  const double h = flow.dt();
  std::vector<double> avg(observables.size(), 0.0);
  VectorXc next(v.size());
  for (int j = 0; j <= s; ++j) {
    const double w = (j == 0 || j == s) ? 0.5 / s : 1.0 / s;
    for (std::size_t o = 0; o < observables.size(); ++o) avg[o] += w * observables[o].value(j * h, flow.omega(), v);
    if (j < s) {
      next.noalias() = flow.step_map(j) * v;
      v.swap(next);
    }
  }
  return avg;
}

SteadyAverages evolve_to_steady(const PeriodicLinearFlow& flow, VectorXc v,
                                const std::vector<FourierCovector>& observables, const SteadySettings& settings) {
  SteadyAverages out;
  const double settle_tol = 1e-3 * settings.steady_tol;
  VectorXc next(v.size());
  while (out.periods < settings.max_periods) {
    next.noalias() = flow.period_map() * v;
    const double delta = (next - v).cwiseAbs().maxCoeff();
    if (!std::isfinite(delta)) throw std::runtime_error("non-finite state during time evolution");
    v.swap(next);
    ++out.periods;
    out.residual_history.push_back(delta);
    if (delta < settle_tol) break;
  }
  std::vector<double> previous;
  int streak = 0;
  while (out.periods < settings.max_periods || previous.empty()) {
    out.state = v;
    std::vector<double> avg = average_over_period(flow, v, observables);
    ++out.periods;
    if (!previous.empty()) {
      double diff = 0.0;
      for (std::size_t o = 0; o < avg.size(); ++o) diff = std::max(diff, std::abs(avg[o] - previous[o]));
      out.residual_history.push_back(diff);
      streak = diff < settings.steady_tol ? streak + 1 : 0;
    }
    previous = std::move(avg);
    if (streak >= 3) {
      out.converged = true;
      break;
    }
  }
  out.values = previous;
  return out;
}

Trajectory sample_trajectory(const PeriodicLinearFlow& flow, VectorXc v, const std::vector<FourierCovector>& observables,
                             int periods, int stride) {
  Trajectory tr;
  const int s = flow.steps();
  const double h = flow.dt();
  VectorXc next(v.size());
  for (int total = 0; total <= periods * s; ++total) {
    if (total % stride == 0) {
      const double t = total * h;
      tr.times.push_back(t);
      std::vector<double> row;
      for (const auto& o : observables) row.push_back(o.value(t, flow.omega(), v));
      tr.values.push_back(std::move(row));
    }
    if (total < periods * s) {
      next.noalias() = flow.step_map(total % s) * v;
      v.swap(next);
    }
  }
  return tr;
}

}  // namespace floquet
