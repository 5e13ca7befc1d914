#pragma once

#include <map>
#include <vector>

#include "floquet/types.hpp"

namespace floquet {

// Occupation of a lead state; stable for large |energy - mu| / kT.
double fermi(double energy, double mu, double kT);

// Periodic one-body Hamiltonian h(t) = sum_n h^(n) exp(-i n omega t).
class OneBodyFourierHamiltonian {
 public:
  OneBodyFourierHamiltonian(double omega, std::map<int, MatrixXc> blocks);

  Index dim() const { return dim_; }
  double omega() const { return omega_; }
  double period() const { return 2.0 * pi / omega_; }
  // Largest |n| with a nonzero block.
  int cutoff() const;
  MatrixXc block(int n) const;
  const std::map<int, MatrixXc>& blocks() const { return blocks_; }

 private:
  double omega_;
  Index dim_ = 0;
  std::map<int, MatrixXc> blocks_;
};

struct LeadSpec {
  MatrixXc gamma;
  double mu = 0.0;
  double kT = 0.0;

  static LeadSpec uniform(Index dim, double gamma, double mu, double kT);
  double occupation(double energy) const { return fermi(energy, mu, kT); }
  // Throws std::invalid_argument when gamma is not hermitian PSD or kT <= 0.
  void validate() const;
};

struct HubbardSpec {
  std::vector<double> u;
  void validate() const;
};

enum class SpinSector { spinless, up, down };

OneBodyFourierHamiltonian build_cosine_model(double eps1, double eps2, double amplitude, double omega);
// chirality +1: h_12(t) = A exp(+i omega t); chirality -1: its conjugate.
OneBodyFourierHamiltonian build_circular_model(double eps1, double eps2, double amplitude, double omega,
                                               int chirality);
// h(t) -> conj(h(t)), used for the conjugated spin-down drive.
OneBodyFourierHamiltonian conjugate_drive(const OneBodyFourierHamiltonian& H);

MatrixXc hamiltonian_at_time(const OneBodyFourierHamiltonian& H, double t);

}  // namespace floquet
