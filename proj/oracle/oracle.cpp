#include "floquet_oracle/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace floquet_oracle {

namespace {

double occupation(double e, double mu, double kT) {
  const double x = (e - mu) / kT;
  return x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

MatrixXc exp_hermitian(const MatrixXc& h, double dt) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  Eigen::VectorXcd phase(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) phase(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * dt));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

StaticTransport landauer_static(const MatrixXc& h, const std::vector<Lead>& leads, int samples, double scale) {
  if (samples % 2) ++samples;
  const Eigen::Index d = h.rows();
  MatrixXc width = MatrixXc::Zero(d, d);
  double center = 0.0;
  for (const auto& l : leads) {
    width += l.gamma;
    center += l.mu / double(leads.size());
  }
  const double lo = -0.5 * M_PI, hi = 0.5 * M_PI;
  const double step = (hi - lo) / samples;
  double n = 0.0;
  std::vector<double> current(leads.size(), 0.0);
  for (int k = 1; k < samples; ++k) {  // endpoints carry zero Simpson-weighted contribution after the mapping
    const double theta = lo + k * step;
    const double e = center + scale * std::tan(theta);
    const double jac = scale / (std::cos(theta) * std::cos(theta));
    const double w = (k % 2 ? 4.0 : 2.0) * step / 3.0 * jac / (2.0 * M_PI);
    MatrixXc a = -h;
    a.diagonal().array() += e;
    a += cplx(0.0, 0.5) * width;
    const MatrixXc g = a.inverse();
    // -i G^< = sum_l G Gamma_l G^+ f_l
    MatrixXc filled = MatrixXc::Zero(d, d);
    std::vector<MatrixXc> partial;
    for (const auto& l : leads) {
      partial.push_back(g * l.gamma * g.adjoint());
      filled += partial.back() * occupation(e, l.mu, l.kT);
    }
    n += w * filled.trace().real();
    for (std::size_t a_ = 0; a_ < leads.size(); ++a_) {
      // Lead a: sum_b Tr(Gamma_a G Gamma_b G^+) (f_a - f_b)
      double j = 0.0;
      for (std::size_t b = 0; b < leads.size(); ++b) {
        if (a_ == b) continue;
        j += (leads[a_].gamma * partial[b]).trace().real() *
             (occupation(e, leads[a_].mu, leads[a_].kT) - occupation(e, leads[b].mu, leads[b].kT));
      }
      current[a_] += w * j;
    }
  }
  // theta -> -pi/2 limit of the occupation integrand: Tr(sum_l Gamma_l) / (2 pi scale) * scale ... contributes
  // a finite endpoint value; add it with Simpson weight 1.
  const double endpoint = width.trace().real() / scale / (2.0 * M_PI);
  n += step / 3.0 * endpoint;
  return {n, current, samples};
}

PauliResult pauli_steady(const std::vector<double>& levels, const std::vector<std::vector<double>>& gamma,
                         const std::vector<double>& mu, const std::vector<double>& kT) {
  PauliResult r;
  r.current.assign(gamma.size(), std::vector<double>(levels.size(), 0.0));
  r.total_current.assign(gamma.size(), 0.0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    double in = 0.0, total = 0.0;
    for (std::size_t l = 0; l < gamma.size(); ++l) {
      in += gamma[l][i] * occupation(levels[i], mu[l], kT[l]);
      total += gamma[l][i];
    }
    const double n = in / total;
    r.occupation.push_back(n);
    for (std::size_t l = 0; l < gamma.size(); ++l) {
      r.current[l][i] = gamma[l][i] * (occupation(levels[i], mu[l], kT[l]) - n);
      r.total_current[l] += r.current[l][i];
    }
  }
  return r;
}

MatrixXc direct_unitary(const std::function<MatrixXc(double)>& h, double t_final, int steps) {
  if (steps < 1) throw std::invalid_argument("direct_unitary: steps must be positive");
  const double dt = t_final / steps;
  MatrixXc u = MatrixXc::Identity(h(0.0).rows(), h(0.0).cols());
  for (int k = 0; k < steps; ++k) u = exp_hermitian(h((k + 0.5) * dt), dt) * u;
  return u;
}

MatrixXc propagate_density(const std::function<MatrixXc(double)>& h, const MatrixXc& rho0, double t_final, int steps) {
  const MatrixXc u = direct_unitary(h, t_final, steps);
  return u * rho0 * u.adjoint();
}

}  // namespace floquet_oracle
