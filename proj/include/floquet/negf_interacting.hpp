#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "floquet/negf.hpp"

namespace floquet {

enum class OccupationMode { fixed_half, self_consistent };

struct InteractingConfig {
  OccupationMode mode = OccupationMode::fixed_half;
  double mixing = 0.3;
  double occ_tol = 1e-6;
  int max_iter = 200;
  void validate() const;
};

struct InteractingGreen {
  MatrixXc retarded;
  MatrixXc lesser;
};

struct FloquetInteractingGreen {
  FloquetMatrixXc retarded;
  FloquetMatrixXc lesser;
};

// Two-particle truncated equation-of-motion ansatz for one spin; `opposite` holds the per-orbital
// occupations of the other spin.
InteractingGreen solve_interacting_static(const MatrixXc& h, std::span<const LeadSpec> leads, const VectorXd& u,
                                          const VectorXd& opposite, double energy);
FloquetInteractingGreen solve_interacting_floquet(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads,
                                                  const VectorXd& u, int N, const VectorXd& opposite, double energy);

struct SpinResolvedResult {
  std::array<VectorXd, 2> occupations;  // per spin, per orbital
  std::array<double, 2> n{};
  std::array<std::vector<double>, 2> current;  // per spin, per lead
  double n_total = 0.0;
  std::vector<double> current_total;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
};

// Period-averaged observables of the spinful interacting dot. A bounded grid selects the Floquet [0, w)
// integration; a window grid requires an undriven model and integrates the static functions.
SpinResolvedResult interacting_transport(const OneBodyFourierHamiltonian& up, const OneBodyFourierHamiltonian& down,
                                         std::span<const LeadSpec> leads, const HubbardSpec& hubbard, int N,
                                         const QuasiEnergyGrid& grid, const InteractingConfig& config);

// Fixed-point iteration on the occupations (mode must be self-consistent); starts from the u = 0 values.
SpinResolvedResult self_consistent_occupations(const OneBodyFourierHamiltonian& up,
                                               const OneBodyFourierHamiltonian& down, std::span<const LeadSpec> leads,
                                               const HubbardSpec& hubbard, int N, const QuasiEnergyGrid& grid,
                                               const InteractingConfig& config);

}  // namespace floquet
