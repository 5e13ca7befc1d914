#pragma once

#include <map>
#include <memory>
#include <vector>

#include "floquet/fockspace.hpp"
#include "floquet/liouville.hpp"

namespace floquet {

struct FloquetEigen {
  MatrixXc Y;
  VectorXd quasi;
  MatrixXd omega_differences() const;  // Omega_{gamma nu} = E_gamma - E_nu
};

// Ascending quasi-energies; each eigenvector's first significant component made real positive.
FloquetEigen build_floquet_eigen(const MatrixXc& floquet_hamiltonian);

// A dot coupled to wide-band leads, described on the Fock space.
struct OpenDot {
  FockBasis basis;
  ManyBodyFourierHamiltonian hamiltonian;
  double omega = 1.0;
  std::vector<LeadSpec> leads;            // gamma over spin-orbitals
  std::vector<std::vector<int>> species;  // orbital groups with separately conserved numbers
};

OpenDot make_spinless_dot(const OneBodyFourierHamiltonian& h, const std::vector<LeadSpec>& leads);
// Lead gammas are given over sites and act identically on both spins.
OpenDot make_spinful_dot(const OneBodyFourierHamiltonian& up, const OneBodyFourierHamiltonian& down,
                         const HubbardSpec& hubbard, const std::vector<LeadSpec>& site_leads);

struct QmeObservables {
  double n = 0.0;
  std::vector<double> n_species;
  std::vector<double> current;                       // per lead
  std::vector<std::vector<double>> current_species;  // [lead][species]
};

// Fixed layout used to flatten observables: n, n per species, J per lead, J per lead and species.
std::vector<double> flatten(const QmeObservables& o);
QmeObservables unflatten(const std::vector<double>& v, std::size_t leads, std::size_t species);

struct QmeSettings {
  int steps_per_period = 2000;
  double steady_tol = 1e-7;
  int max_periods = 5000;
};

struct QmeSteadyState {
  QmeObservables average;
  int periods = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Shared machinery of both master equations: dressed ladder operators on a Floquet eigenbasis.
class FqmeBase {
 public:
  const OpenDot& dot() const { return dot_; }
  int truncation() const { return N_; }
  const FloquetEigen& eigen() const { return eigen_; }
  double period() const { return 2.0 * pi / dot_.omega; }

 protected:
  FqmeBase(OpenDot dot, int N);
  // Y [F o (Y^+ op Y)] Y^+ with F_{gamma nu} = weight(Omega_{gamma nu}).
  template <typename Weight>
  MatrixXc dress(const MatrixXc& op, Weight&& weight) const;
  std::vector<int> fock_labels() const;

  using Family = std::map<int, MatrixXc>;  // Fourier component k -> coefficient of exp(-i k w t)
  // Dressing of an operator on the central Fourier block folded into a family: C^(k) = sum_{n-m=k} <n|Z|m>.
  Family fold_central(const MatrixXc& op, bool creation, const LeadSpec& lead) const;
  // Per lead and orbital: X_i = sum_j G_ij/2 D~+_j and Y_i = sum_j G_ji/2 D-_j as Fourier families.
  void build_dissipator_families();

 public:
  // Fourier component k (coefficient of exp(-i k w t)) of the Hilbert-space generator as sandwich terms.
  std::vector<Sandwich> component_terms(int k, int lead = -1, bool coherent = true) const;
  int generator_harmonics() const { return 2 * N_ + hamiltonian_cutoff_; }

 protected:
  OpenDot dot_;
  int N_;
  MatrixXc floquet_hamiltonian_;
  FloquetEigen eigen_;
  std::vector<std::vector<Family>> x_families_, y_families_;
  std::vector<std::vector<Family>> creation_, annihilation_;
  std::vector<MatrixXc> d_;
  int hamiltonian_cutoff_ = 0;
};

class HilbertSpaceFqme : public FqmeBase {
 public:
  HilbertSpaceFqme(OpenDot dot, int N);

  MatrixXc hamiltonian(double t) const;
  // Creation-type and annihilation-type dressed operators of orbital j for lead l at time t.
  MatrixXc dressed_creation(int j, std::size_t lead, double t) const;
  MatrixXc dressed_annihilation(int j, std::size_t lead, double t) const;

  MatrixXc rhs(const MatrixXc& rho, double t) const;
  MatrixXc dissipator(const MatrixXc& rho, double t, std::size_t lead) const;
  QmeObservables observe(const MatrixXc& rho, double t) const;

  // Generator at time t as sandwich terms.
  std::vector<Sandwich> terms_at(double t, int lead = -1, bool coherent = true) const;

  LiouvilleSpace liouville_space() const { return LiouvilleSpace(fock_labels()); }
  PeriodicLinearFlow flow(const LiouvilleSpace& space, int steps_per_period) const;
  std::vector<FourierCovector> observable_covectors(const LiouvilleSpace& space) const;

  MatrixXc empty_state() const;
  QmeSteadyState steady_state(const QmeSettings& settings, const MatrixXc& initial) const;
  QmeSteadyState steady_state(const QmeSettings& settings) const { return steady_state(settings, empty_state()); }

 private:
  static MatrixXc evaluate(const Family& f, double omega, double t);
};

// The Floquet density matrix keeps its ladder structure rho^F = sum_n L_n (x) rho^(n); the state is the
// coefficient list rho^(n), n in [-N, N]. Products of ladder-structured operators become convolutions of
// their Fourier families, and the Fourier number term contributes +i n w rho^(n).
class FloquetSpaceFqme : public FqmeBase {
 public:
  using FourierState = std::vector<MatrixXc>;  // index n + N

  FloquetSpaceFqme(OpenDot dot, int N);

  FourierState rhs(const FourierState& state) const;
  // Lead l's dissipator applied to the state; all output harmonics |n| <= 3N are kept.
  std::map<int, MatrixXc> dissipator(const FourierState& state, std::size_t lead) const;

  // rho^(0) = rho, all other coefficients zero.
  FourierState lift(const MatrixXc& rho) const;
  // Full (2N+1)D square Floquet density matrix with blocks <m|rho^F|n> = rho^(m-n).
  MatrixXc floquet_density(const FourierState& state) const;
  // rho(t) = sum_m <m| rho^F |0> exp(-i m w t)
  MatrixXc project(const FourierState& state, double t) const;
  QmeObservables observe(const FourierState& state, double t) const;

  LiouvilleSpace liouville_space() const;
  PeriodicLinearFlow flow(const LiouvilleSpace& space, int steps_per_period) const;
  std::vector<FourierCovector> observable_covectors(const LiouvilleSpace& space) const;
  VectorXc vectorize(const LiouvilleSpace& space, const FourierState& state) const;

  FourierState empty_state() const;
  QmeSteadyState steady_state(const QmeSettings& settings, const MatrixXc& initial_physical) const;
  QmeSteadyState steady_state(const QmeSettings& settings) const;

 private:
  Index physical_dim() const { return dot_.basis.dim(); }
};

}  // namespace floquet
