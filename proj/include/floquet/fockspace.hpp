#pragma once

#include <map>
#include <vector>

#include "floquet/model.hpp"

namespace floquet {

// Fock space of M spin-orbitals; basis index = occupation bit pattern, orbital i <-> bit i.
// Spinful layouts order spin-orbitals as (site, spin) with spin up first: index = 2 * site + spin.
class FockBasis {
 public:
  explicit FockBasis(int orbitals);
  static FockBasis spinful(int sites) { return FockBasis(2 * sites); }

  int orbitals() const { return M_; }
  Index dim() const { return Index(1) << M_; }

  MatrixXc annihilation(int orbital) const;
  MatrixXc creation(int orbital) const { return annihilation(orbital).adjoint(); }
  MatrixXc number(int orbital) const;
  MatrixXc total_number() const;
  // Number operator restricted to a subset of orbitals (e.g. one spin species).
  MatrixXc number_of(const std::vector<int>& orbitals) const;

 private:
  int M_;
};

using ManyBodyFourierHamiltonian = std::map<int, MatrixXc>;

// Spinless: sum_ij h^(n)_ij d_i^+ d_j with one orbital per level.
ManyBodyFourierHamiltonian many_body_hamiltonian(const FockBasis& basis, const OneBodyFourierHamiltonian& h);
// Spinful with per-spin one-body drives and on-site u_i n_{i up} n_{i down}.
ManyBodyFourierHamiltonian many_body_hamiltonian(const FockBasis& basis, const OneBodyFourierHamiltonian& up,
                                                 const OneBodyFourierHamiltonian& down, const HubbardSpec& hubbard);

MatrixXc floquet_many_body_hamiltonian(const ManyBodyFourierHamiltonian& blocks, double omega, int N);

}  // namespace floquet
