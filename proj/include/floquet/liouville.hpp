#pragma once

#include <functional>
#include <map>
#include <vector>

#include "floquet/types.hpp"

namespace floquet {

using RowVectorXc = Eigen::Matrix<cplx, 1, Eigen::Dynamic>;

// rho -> left * rho * right
struct Sandwich {
  MatrixXc left;
  MatrixXc right;
};

MatrixXc apply_terms(const std::vector<Sandwich>& terms, const MatrixXc& rho);

// Density-matrix elements (a, b) whose basis states carry the same conserved label.
// Generators that respect the labels never leave this subspace.
class LiouvilleSpace {
 public:
  explicit LiouvilleSpace(std::vector<int> labels);

  Index dim() const { return Index(labels_.size()); }
  Index size() const { return Index(pairs_.size()); }

  VectorXc vectorize(const MatrixXc& rho) const;
  MatrixXc matrix(const VectorXc& v) const;
  MatrixXc superoperator(const std::vector<Sandwich>& terms) const;
  // Covector c with c . vectorize(rho) = Tr(op * rho).
  RowVectorXc trace_with(const MatrixXc& op) const;
  // Throws if the terms move weight outside the kept elements (checked on a fixed random state).
  void check_closed(const std::vector<Sandwich>& terms) const;

 private:
  std::vector<int> labels_;
  std::vector<std::pair<Index, Index>> pairs_;
};

// Observable  o(t) . v  with o(t) = sum_k exp(-i k omega t) o_k.
struct FourierCovector {
  std::map<int, RowVectorXc> components;
  double value(double t, double omega, const VectorXc& v) const;
};

// Linear flow dv/dt = L(t) v with L(t) = sum_k exp(-i k omega t) L_k, integrated with fixed-step RK4.
// The one-step maps of classical RK4 are formed explicitly, so a period is a single matrix product.
class PeriodicLinearFlow {
 public:
  PeriodicLinearFlow(std::map<int, MatrixXc> generator, double omega, int steps_per_period);

  bool autonomous() const { return autonomous_; }
  int steps() const { return steps_; }
  double omega() const { return omega_; }
  double period() const { return 2.0 * pi / omega_; }
  double dt() const { return period() / steps_; }

  MatrixXc generator_at(double t) const;
  const MatrixXc& step_map(int j) const { return autonomous_ ? maps_.front() : maps_.at(std::size_t(j)); }
  const MatrixXc& period_map() const { return period_map_; }

 private:
  std::map<int, MatrixXc> generator_;
  double omega_;
  int steps_;
  bool autonomous_;
  std::vector<MatrixXc> maps_;
  MatrixXc period_map_;
};

// I + h/6 (K1 + 2 K2 + 2 K3 + K4) for dv/dt = L(t) v, given L at t, t + h/2, t + h.
MatrixXc rk4_step_map(const MatrixXc& start, const MatrixXc& middle, const MatrixXc& end, double h);

struct SteadySettings {
  int steps_per_period = 2000;
  double steady_tol = 1e-7;
  int max_periods = 5000;
};

struct SteadyAverages {
  std::vector<double> values;  // trapezoid averages over the final period
  VectorXc state;              // state at the start of the final averaged period
  int periods = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Trapezoid period averages of observables while stepping one period from v (v is advanced).
std::vector<double> average_over_period(const PeriodicLinearFlow& flow, VectorXc& v,
                                        const std::vector<FourierCovector>& observables);

// Jumps whole periods with the period map until the state settles, then steps explicitly and stops once
// consecutive period averages differ by less than steady_tol three times in a row.
SteadyAverages evolve_to_steady(const PeriodicLinearFlow& flow, VectorXc v,
                                const std::vector<FourierCovector>& observables, const SteadySettings& settings);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[sample][observable]
};

// Explicit stepping for `periods` periods from t = 0, sampling every `stride` steps.
Trajectory sample_trajectory(const PeriodicLinearFlow& flow, VectorXc v, const std::vector<FourierCovector>& observables,
                             int periods, int stride);

}  // namespace floquet
