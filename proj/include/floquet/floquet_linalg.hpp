#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "floquet/model.hpp"

namespace floquet {

// Dense matrix over (Fourier index -N..N) x (inner index); block (m, n) starts at row (m + N) * d.
template <typename Scalar>
class FloquetBlockMatrix {
 public:
  FloquetBlockMatrix(int truncation, Index block_dim)
      : N_(truncation), d_(block_dim), data_(MatrixX<Scalar>::Zero(size_for(truncation, block_dim),
                                                                   size_for(truncation, block_dim))) {}
  FloquetBlockMatrix(int truncation, Index block_dim, MatrixX<Scalar> data)
      : N_(truncation), d_(block_dim), data_(std::move(data)) {
    if (data_.rows() != size() || data_.cols() != size())
      throw std::invalid_argument("FloquetBlockMatrix: data has wrong dimension");
  }

  int truncation() const { return N_; }
  Index block_dim() const { return d_; }
  Index size() const { return size_for(N_, d_); }
  Index offset(int m) const { return Index(m + N_) * d_; }

  auto block(int m, int n) { return data_.block(offset(m), offset(n), d_, d_); }
  auto block(int m, int n) const { return data_.block(offset(m), offset(n), d_, d_); }

  const MatrixX<Scalar>& matrix() const { return data_; }
  MatrixX<Scalar>& matrix() { return data_; }

 private:
  static Index size_for(int N, Index d) { return Index(2 * N + 1) * d; }
  int N_;
  Index d_;
  MatrixX<Scalar> data_;
};

using FloquetMatrixXc = FloquetBlockMatrix<cplx>;

// block(m, n) = blocks[m - n] - m * omega * delta_mn.
template <typename Scalar>
FloquetBlockMatrix<Scalar> floquet_lift(const std::map<int, MatrixX<Scalar>>& blocks, double omega, int N) {
  if (blocks.empty()) throw std::invalid_argument("floquet_lift: no blocks");
  const Index d = blocks.begin()->second.rows();
  int cutoff = 0;
  for (const auto& [n, b] : blocks)
    if (b.norm() > 0.0) cutoff = std::max(cutoff, std::abs(n));
  if (N < cutoff) throw std::invalid_argument("Floquet truncation smaller than the drive's Fourier cutoff");
  FloquetBlockMatrix<Scalar> out(N, d);
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      auto it = blocks.find(m - n);
      if (it != blocks.end()) out.block(m, n) = it->second;
    }
    out.block(m, m).diagonal().array() -= Scalar(double(m) * omega);
  }
  return out;
}

// Block-diagonal lift: block m gets f(m).
template <typename Scalar, typename BlockFn>
FloquetBlockMatrix<Scalar> block_diagonal(int N, Index d, BlockFn&& f) {
  FloquetBlockMatrix<Scalar> out(N, d);
  for (int m = -N; m <= N; ++m) out.block(m, m) = f(m);
  return out;
}

FloquetMatrixXc build_floquet_hamiltonian(const OneBodyFourierHamiltonian& H, int N);

enum class SelfEnergyKind { retarded, advanced, lesser };

MatrixXc lead_self_energy(const LeadSpec& lead, SelfEnergyKind kind, double energy);
MatrixXc wideband_self_energies(std::span<const LeadSpec> leads, SelfEnergyKind kind, double energy);
// Block m evaluated at energy + m * omega.
FloquetMatrixXc floquet_self_energy(std::span<const LeadSpec> leads, SelfEnergyKind kind, double energy,
                                    int N, double omega);
MatrixXc total_gamma(std::span<const LeadSpec> leads);

struct QuasiEnergyGrid {
  enum class Kind { bounded, window };
  std::vector<double> points;
  std::vector<double> weights;
  Kind kind = Kind::window;

  double lower() const { return points.front(); }
  double upper() const { return points.back(); }
  std::size_t size() const { return points.size(); }

  // Uniform points on [lo, hi] with spacing at most step; trapezoid weights with Gregory end corrections.
  static QuasiEnergyGrid window(double lo, double hi, double step);
  // [0, omega] for integrands periodic in the quasi-energy: plain trapezoid weights.
  static QuasiEnergyGrid bounded(double omega, double step);
};

// min(Gamma/20, kT/10, omega/400), Gamma = smallest nonzero eigenvalue of the total width.
double default_energy_step(std::span<const LeadSpec> leads, double omega);
QuasiEnergyGrid vlike_window(std::span<const LeadSpec> leads, int N, double omega, double step);

// Integral over E < upper of dE/2pi Tr[B A(E)], A = i(G - G^+), G = (E - M)^-1, M = h - i Gamma/2.
// B must be hermitian; closed form from the eigen-decomposition of M.
double spectral_weight_below(const MatrixXc& effective, const MatrixXc& weight, double upper);

// Same integral with the eigen-decomposition of M kept for repeated weights.
class SpectralTail {
 public:
  explicit SpectralTail(const MatrixXc& effective);
  double below(const MatrixXc& weight, double upper) const;

 private:
  MatrixXc vectors_;
  VectorXc values_;
  Eigen::PartialPivLU<MatrixXc> lu_;
};

}  // namespace floquet
