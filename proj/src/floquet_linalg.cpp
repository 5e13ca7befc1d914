#include "floquet/floquet_linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace floquet {

FloquetMatrixXc build_floquet_hamiltonian(const OneBodyFourierHamiltonian& H, int N) {
  return floquet_lift<cplx>(H.blocks(), H.omega(), N);
}

MatrixXc lead_self_energy(const LeadSpec& lead, SelfEnergyKind kind, double energy) {
  switch (kind) {
    case SelfEnergyKind::retarded:
      return -0.5 * I_unit * lead.gamma;
    case SelfEnergyKind::advanced:
      return 0.5 * I_unit * lead.gamma;
    case SelfEnergyKind::lesser:
      return I_unit * lead.occupation(energy) * lead.gamma;
  }
  throw std::logic_error("unknown self-energy kind");
}

MatrixXc wideband_self_energies(std::span<const LeadSpec> leads, SelfEnergyKind kind, double energy) {
  if (leads.empty()) throw std::invalid_argument("at least one lead is required");
  MatrixXc sum = lead_self_energy(leads[0], kind, energy);
  for (std::size_t l = 1; l < leads.size(); ++l) sum += lead_self_energy(leads[l], kind, energy);
  return sum;
}

FloquetMatrixXc floquet_self_energy(std::span<const LeadSpec> leads, SelfEnergyKind kind, double energy,
                                    int N, double omega) {
  const Index d = leads.front().gamma.rows();
  return block_diagonal<cplx>(N, d, [&](int m) { return wideband_self_energies(leads, kind, energy + m * omega); });
}

MatrixXc total_gamma(std::span<const LeadSpec> leads) {
  MatrixXc g = MatrixXc::Zero(leads.front().gamma.rows(), leads.front().gamma.cols());
  for (const auto& lead : leads) g += lead.gamma;
  return g;
}

QuasiEnergyGrid QuasiEnergyGrid::window(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw std::invalid_argument("energy window needs hi > lo and step > 0");
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  const double h = (hi - lo) / double(intervals);
  QuasiEnergyGrid g;
  g.kind = Kind::window;
  g.points.resize(intervals + 1);
  g.weights.assign(intervals + 1, h);
  for (std::size_t k = 0; k <= intervals; ++k) g.points[k] = lo + h * double(k);
  g.points.back() = hi;
  if (intervals >= 5) {
    // Gregory end weights: the trapezoid rule with its h^2 end error removed.
    const double end[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (std::size_t k = 0; k < 3; ++k) g.weights[k] = g.weights[intervals - k] = end[k] * h;
  } else {
    g.weights.front() = g.weights.back() = 0.5 * h;
  }
  return g;
}

QuasiEnergyGrid QuasiEnergyGrid::bounded(double omega, double step) {
  const auto intervals = static_cast<std::size_t>(std::ceil(omega / std::min(step, omega / 4.0) - 1e-9));
  const double h = omega / double(intervals);
  QuasiEnergyGrid g;
  g.kind = Kind::bounded;
  g.points.resize(intervals + 1);
  g.weights.assign(intervals + 1, h);
  for (std::size_t k = 0; k <= intervals; ++k) g.points[k] = h * double(k);
  g.points.back() = omega;
  g.weights.front() = g.weights.back() = 0.5 * h;
  return g;
}

double default_energy_step(std::span<const LeadSpec> leads, double omega) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(total_gamma(leads), Eigen::EigenvaluesOnly);
  double width = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    double v = es.eigenvalues()(k);
    if (v > 1e-14 && (width == 0.0 || v < width)) width = v;
  }
  double kT = leads.front().kT;
  for (const auto& lead : leads) kT = std::min(kT, lead.kT);
  double step = std::min(kT / 10.0, omega / 400.0);
  if (width > 0.0) step = std::min(step, width / 20.0);
  return step;
}

QuasiEnergyGrid vlike_window(std::span<const LeadSpec> leads, int N, double omega, double step) {
  double mu_min = leads.front().mu, mu_max = leads.front().mu, kT = 0.0;
  for (const auto& lead : leads) {
    mu_min = std::min(mu_min, lead.mu);
    mu_max = std::max(mu_max, lead.mu);
    kT = std::max(kT, lead.kT);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(total_gamma(leads), Eigen::EigenvaluesOnly);
  const double width = es.eigenvalues().maxCoeff();
  const double pad = 25.0 * kT + (N + 1) * omega + 10.0 * width;
  return QuasiEnergyGrid::window(mu_min - pad, mu_max + pad, step);
}

SpectralTail::SpectralTail(const MatrixXc& effective) {
  Eigen::ComplexEigenSolver<MatrixXc> es(effective);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition of the effective matrix failed");
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
  lu_.compute(vectors_);
}

double SpectralTail::below(const MatrixXc& weight, double upper) const {
  const MatrixXc projected = lu_.solve(weight * vectors_);
  cplx sum = 0.0;
  for (Index k = 0; k < values_.size(); ++k) sum += projected(k, k) * std::log(upper - values_(k));
  return weight.trace().real() - sum.imag() / pi;
}

double spectral_weight_below(const MatrixXc& effective, const MatrixXc& weight, double upper) {
  return SpectralTail(effective).below(weight, upper);
}

}  // namespace floquet
