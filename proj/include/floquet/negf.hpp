#pragma once

#include <span>
#include <string>
#include <vector>

#include "floquet/floquet_linalg.hpp"

namespace floquet {

// Column of Fourier coefficients g^r_n(E), n = -N..N.
struct VLikeGreen {
  int truncation = 0;
  double energy = 0.0;
  std::vector<MatrixXc> coefficients;
  const MatrixXc& operator[](int n) const { return coefficients.at(std::size_t(n + truncation)); }
};

struct TransportResult {
  double n_avg = 0.0;
  std::vector<double> current;  // per lead, positive into the dot
  std::vector<std::string> warnings;
};

// Precomputed pieces shared by every quasi-energy of one (H, leads, N) problem.
class FloquetResolvent {
 public:
  FloquetResolvent(const OneBodyFourierHamiltonian& H, std::vector<LeadSpec> leads, int N);

  int truncation() const { return N_; }
  Index block_dim() const { return d_; }
  double omega() const { return omega_; }
  const std::vector<LeadSpec>& leads() const { return leads_; }
  const FloquetMatrixXc& hamiltonian() const { return hF_; }
  // h^F - i Gamma^F / 2; its eigenvalues are the poles of the retarded function.
  const MatrixXc& effective() const { return effective_; }

  FloquetMatrixXc retarded(double energy) const;
  FloquetMatrixXc lesser_self_energy(double energy) const;

 private:
  int N_;
  Index d_;
  double omega_;
  std::vector<LeadSpec> leads_;
  FloquetMatrixXc hF_;
  MatrixXc effective_;
};

VLikeGreen solve_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N, double energy);
FloquetMatrixXc solve_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                            double energy);

// g^<_0(E) = sum_m G_{0m} Sigma^<(E + m omega) G_{0m}^+ (row blocks of the Floquet resolvent).
MatrixXc vlike_lesser_central(const FloquetResolvent& problem, double energy);
MatrixXc vlike_lesser_central(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                              double energy);
FloquetMatrixXc mlike_lesser(const FloquetResolvent& problem, double energy);
FloquetMatrixXc mlike_lesser(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                             double energy);

// Integrands at one quasi-energy: [0] = -i Tr g^<, [1 + l] = current density of lead l.
std::vector<double> vlike_integrand(const FloquetResolvent& problem, double energy);
std::vector<double> mlike_integrand(const FloquetResolvent& problem, double energy);

TransportResult transport_vlike(const FloquetResolvent& problem, const QuasiEnergyGrid& grid);
TransportResult transport_mlike(const FloquetResolvent& problem, const QuasiEnergyGrid& grid);

double avg_number_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                        const QuasiEnergyGrid& grid);
double avg_current_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                         const QuasiEnergyGrid& grid, std::size_t lead);
double avg_number_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                        const QuasiEnergyGrid& grid);
double avg_current_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                         const QuasiEnergyGrid& grid, std::size_t lead);

// Sideband-resolved transmission T_mn = Tr(Gamma_from G_mn Gamma_to G_mn^+); rows index the source sideband.
MatrixXd sideband_transmission(const FloquetResolvent& problem, double energy, std::size_t from = 0,
                               std::size_t to = 1);
// Total T(E) = sum_mn T_mn.
double transmission(const FloquetResolvent& problem, double energy, std::size_t from = 0, std::size_t to = 1);
// Current density of lead `from`: sum_mn T_mn (f_from(E + m w) - f_to(E + n w)).
double landauer_current_density(const FloquetResolvent& problem, double energy, std::size_t from = 0,
                                std::size_t to = 1);

}  // namespace floquet
