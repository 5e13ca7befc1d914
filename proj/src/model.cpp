#include "floquet/model.hpp"

#include <cmath>
#include <stdexcept>

namespace floquet {

double fermi(double energy, double mu, double kT) {
  if (!std::isfinite(energy) || !std::isfinite(mu) || !std::isfinite(kT))
    throw std::invalid_argument("fermi: non-finite argument");
  if (kT <= 0.0) throw std::invalid_argument("fermi: kT must be positive");
  double x = (energy - mu) / kT;
  if (x > 0.0) {
    double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

OneBodyFourierHamiltonian::OneBodyFourierHamiltonian(double omega, std::map<int, MatrixXc> blocks)
    : omega_(omega), blocks_(std::move(blocks)) {
  if (!(omega > 0.0)) throw std::invalid_argument("driving frequency must be positive");
  if (blocks_.empty()) throw std::invalid_argument("Hamiltonian needs at least one Fourier block");
  dim_ = blocks_.begin()->second.rows();
  for (const auto& [n, b] : blocks_) {
    if (b.rows() != dim_ || b.cols() != dim_)
      throw std::invalid_argument("Fourier blocks must be square and of equal size");
  }
  // Fill in missing partners so h^(-n) = h^(n)^+ holds by construction, then check.
  for (const auto& [n, b] : std::map<int, MatrixXc>(blocks_)) {
    if (!blocks_.count(-n)) blocks_[-n] = b.adjoint();
  }
  for (const auto& [n, b] : blocks_) {
    double scale = std::max(1.0, b.norm());
    if ((blocks_.at(-n) - b.adjoint()).norm() > 1e-12 * scale)
      throw std::invalid_argument("Fourier blocks violate h(-n) = h(n)^+");
  }
}

int OneBodyFourierHamiltonian::cutoff() const {
  int k = 0;
  for (const auto& [n, b] : blocks_)
    if (b.norm() > 0.0) k = std::max(k, std::abs(n));
  return k;
}

MatrixXc OneBodyFourierHamiltonian::block(int n) const {
  auto it = blocks_.find(n);
  if (it == blocks_.end()) return MatrixXc::Zero(dim_, dim_);
  return it->second;
}

LeadSpec LeadSpec::uniform(Index dim, double gamma, double mu, double kT) {
  LeadSpec lead{gamma * MatrixXc::Identity(dim, dim), mu, kT};
  lead.validate();
  return lead;
}

void LeadSpec::validate() const {
  if (!(kT > 0.0)) throw std::invalid_argument("lead kT must be positive");
  if (!std::isfinite(mu)) throw std::invalid_argument("lead chemical potential must be finite");
  if (gamma.rows() != gamma.cols()) throw std::invalid_argument("lead gamma must be square");
  if ((gamma - gamma.adjoint()).norm() > 1e-12 * std::max(1.0, gamma.norm()))
    throw std::invalid_argument("lead gamma must be hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(gamma, Eigen::EigenvaluesOnly);
  if (gamma.size() > 0 && es.eigenvalues().minCoeff() < -1e-14)
    throw std::invalid_argument("lead gamma must be positive semidefinite");
}

void HubbardSpec::validate() const {
  for (double v : u)
    if (!(v >= 0.0)) throw std::invalid_argument("Hubbard u must be non-negative");
}

OneBodyFourierHamiltonian build_cosine_model(double eps1, double eps2, double amplitude, double omega) {
  std::map<int, MatrixXc> blocks;
  MatrixXc h0 = MatrixXc::Zero(2, 2);
  h0(0, 0) = eps1;
  h0(1, 1) = eps2;
  blocks[0] = h0;
  if (amplitude != 0.0) {
    MatrixXc h1 = MatrixXc::Zero(2, 2);
    h1(0, 1) = h1(1, 0) = 0.5 * amplitude;
    blocks[1] = h1;
    blocks[-1] = h1;
  }
  return OneBodyFourierHamiltonian(omega, std::move(blocks));
}

OneBodyFourierHamiltonian build_circular_model(double eps1, double eps2, double amplitude, double omega,
                                               int chirality) {
  if (chirality != 1 && chirality != -1) throw std::invalid_argument("chirality must be +1 or -1");
  std::map<int, MatrixXc> blocks;
  MatrixXc h0 = MatrixXc::Zero(2, 2);
  h0(0, 0) = eps1;
  h0(1, 1) = eps2;
  blocks[0] = h0;
  if (amplitude != 0.0) {
    // A exp(+i w t) sits in the n = -1 block.
    MatrixXc upper = MatrixXc::Zero(2, 2);
    upper(0, 1) = amplitude;
    blocks[-chirality] = upper;
    blocks[chirality] = upper.adjoint();
  }
  return OneBodyFourierHamiltonian(omega, std::move(blocks));
}

OneBodyFourierHamiltonian conjugate_drive(const OneBodyFourierHamiltonian& H) {
  std::map<int, MatrixXc> blocks;
  for (const auto& [n, b] : H.blocks()) blocks[-n] = b.conjugate();
  return OneBodyFourierHamiltonian(H.omega(), std::move(blocks));
}

MatrixXc hamiltonian_at_time(const OneBodyFourierHamiltonian& H, double t) {
  MatrixXc h = MatrixXc::Zero(H.dim(), H.dim());
  for (const auto& [n, b] : H.blocks()) h += std::exp(-I_unit * (double(n) * H.omega() * t)) * b;
  return 0.5 * (h + h.adjoint());
}

}  // namespace floquet
