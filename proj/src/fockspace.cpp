#include "floquet/fockspace.hpp"

#include <bit>
#include <stdexcept>

#include "floquet/floquet_linalg.hpp"

namespace floquet {

FockBasis::FockBasis(int orbitals) : M_(orbitals) {
  if (orbitals < 1 || orbitals > 12) throw std::invalid_argument("FockBasis supports 1..12 spin-orbitals");
}

MatrixXc FockBasis::annihilation(int orbital) const {
  if (orbital < 0 || orbital >= M_) throw std::out_of_range("orbital index out of range");
  MatrixXc d = MatrixXc::Zero(dim(), dim());
  const unsigned bit = 1u << orbital;
  for (unsigned s = 0; s < unsigned(dim()); ++s) {
    if (!(s & bit)) continue;
    const int below = std::popcount(s & (bit - 1u));
    d(s ^ bit, s) = (below % 2) ? -1.0 : 1.0;
  }
  return d;
}

MatrixXc FockBasis::number(int orbital) const {
  if (orbital < 0 || orbital >= M_) throw std::out_of_range("orbital index out of range");
  MatrixXc n = MatrixXc::Zero(dim(), dim());
  for (unsigned s = 0; s < unsigned(dim()); ++s)
    if (s & (1u << orbital)) n(s, s) = 1.0;
  return n;
}

MatrixXc FockBasis::total_number() const {
  std::vector<int> all(M_);
  for (int i = 0; i < M_; ++i) all[i] = i;
  return number_of(all);
}

MatrixXc FockBasis::number_of(const std::vector<int>& orbitals) const {
  MatrixXc n = MatrixXc::Zero(dim(), dim());
  for (int i : orbitals) n += number(i);
  return n;
}

namespace {

void add_one_body(const FockBasis& basis, const OneBodyFourierHamiltonian& h, int stride, int offset,
                  ManyBodyFourierHamiltonian& out) {
  std::vector<MatrixXc> d;
  for (Index i = 0; i < h.dim(); ++i) d.push_back(basis.annihilation(int(i) * stride + offset));
  for (const auto& [n, b] : h.blocks()) {
    auto [it, fresh] = out.try_emplace(n, MatrixXc::Zero(basis.dim(), basis.dim()));
    for (Index i = 0; i < h.dim(); ++i)
      for (Index j = 0; j < h.dim(); ++j)
        if (b(i, j) != 0.0) it->second += b(i, j) * d[i].adjoint() * d[j];
  }
}

}  // namespace

ManyBodyFourierHamiltonian many_body_hamiltonian(const FockBasis& basis, const OneBodyFourierHamiltonian& h) {
  if (h.dim() != basis.orbitals()) throw std::invalid_argument("one-body dimension does not match the Fock basis");
  ManyBodyFourierHamiltonian out;
  add_one_body(basis, h, 1, 0, out);
  return out;
}

ManyBodyFourierHamiltonian many_body_hamiltonian(const FockBasis& basis, const OneBodyFourierHamiltonian& up,
                                                 const OneBodyFourierHamiltonian& down, const HubbardSpec& hubbard) {
  if (up.dim() != down.dim() || 2 * up.dim() != basis.orbitals())
    throw std::invalid_argument("spin sectors must have equal dimension matching the Fock basis");
  if (up.omega() != down.omega()) throw std::invalid_argument("spin sectors must share the driving frequency");
  hubbard.validate();
  if (!hubbard.u.empty() && Index(hubbard.u.size()) != up.dim())
    throw std::invalid_argument("one Hubbard u per site is required");
  ManyBodyFourierHamiltonian out;
  add_one_body(basis, up, 2, 0, out);
  add_one_body(basis, down, 2, 1, out);
  auto [it, fresh] = out.try_emplace(0, MatrixXc::Zero(basis.dim(), basis.dim()));
  for (std::size_t i = 0; i < hubbard.u.size(); ++i)
    it->second += hubbard.u[i] * basis.number(2 * int(i)) * basis.number(2 * int(i) + 1);
  return out;
}

MatrixXc floquet_many_body_hamiltonian(const ManyBodyFourierHamiltonian& blocks, double omega, int N) {
  return floquet_lift<cplx>(blocks, omega, N).matrix();
}

}  // namespace floquet
