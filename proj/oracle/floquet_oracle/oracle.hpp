#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

// Brute-force references for tests. Nothing here calls into the solver library.
namespace floquet_oracle {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;

struct Lead {
  MatrixXc gamma;
  double mu;
  double kT;
};

struct StaticTransport {
  double n;
  std::vector<double> current;  // per lead, positive into the dot
  int samples;
};

// Non-interacting static dot. Integrates over the whole real axis after E = center + scale * tan(theta),
// composite Simpson in theta with `samples` intervals (even).
StaticTransport landauer_static(const MatrixXc& h, const std::vector<Lead>& leads, int samples = 400000,
                                double scale = 0.2);

struct PauliResult {
  std::vector<double> occupation;          // per level
  std::vector<std::vector<double>> current;  // [lead][level]
  std::vector<double> total_current;         // per lead
};

// Independent levels with level-resolved couplings gamma[lead][level].
PauliResult pauli_steady(const std::vector<double>& levels, const std::vector<std::vector<double>>& gamma,
                         const std::vector<double>& mu, const std::vector<double>& kT);

// Time-ordered product of exp(-i h(t_mid) dt) with a hermitian h(t); returns U(t_final, 0).
MatrixXc direct_unitary(const std::function<MatrixXc(double)>& h, double t_final, int steps);
MatrixXc propagate_density(const std::function<MatrixXc(double)>& h, const MatrixXc& rho0, double t_final, int steps);

}  // namespace floquet_oracle
