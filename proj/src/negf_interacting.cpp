#include "floquet/negf_interacting.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace floquet {

void InteractingConfig::validate() const {
  if (!(mixing > 0.0 && mixing <= 1.0)) throw std::invalid_argument("mixing must lie in (0, 1]");
  if (!(occ_tol > 0.0)) throw std::invalid_argument("occ_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

namespace {

VectorXd hubbard_vector(const HubbardSpec& hubbard, Index d) {
  hubbard.validate();
  if (hubbard.u.empty()) return VectorXd::Zero(d);
  if (Index(hubbard.u.size()) != d) throw std::invalid_argument("one Hubbard u per orbital is required");
  return Eigen::Map<const VectorXd>(hubbard.u.data(), d);
}

// Equation-of-motion ansatz for one spin on the Floquet space (N = 0 is the static problem).
class SpinEquations {
 public:
  SpinEquations(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, const VectorXd& u, int N)
      : problem_(H, {leads.begin(), leads.end()}, N), u_(u.replicate(2 * N + 1, 1)) {
    if (u.size() != H.dim()) throw std::invalid_argument("interaction vector does not match the model");
    shifted_ = problem_.effective();
    shifted_.diagonal() += u_.cast<cplx>();
  }

  const FloquetResolvent& problem() const { return problem_; }
  const MatrixXc& shifted() const { return shifted_; }
  Index size() const { return problem_.effective().rows(); }

  FloquetInteractingGreen solve(const VectorXd& opposite, double energy) const {
    const int N = problem_.truncation();
    const Index n = size();
    const VectorXd occ = opposite.replicate(2 * N + 1, 1);
    MatrixXc a0 = -problem_.effective();
    a0.diagonal().array() += energy;
    MatrixXc a2 = -shifted_;
    a2.diagonal().array() += energy;
    const MatrixXc g0 = a0.partialPivLu().inverse();
    const MatrixXc g2 = a2.partialPivLu().inverse();
    const MatrixXc pair_r = g2 * occ.cast<cplx>().asDiagonal();
    MatrixXc retarded = g0 * (MatrixXc::Identity(n, n) + u_.cast<cplx>().asDiagonal() * pair_r);
    const MatrixXc lesser_se = problem_.lesser_self_energy(energy).matrix();
    const MatrixXc pair_l = g2 * lesser_se * pair_r.adjoint();
    MatrixXc lesser = g0 * (u_.cast<cplx>().asDiagonal() * pair_l + lesser_se * retarded.adjoint());
    return {FloquetMatrixXc(N, problem_.block_dim(), std::move(retarded)),
            FloquetMatrixXc(N, problem_.block_dim(), std::move(lesser))};
  }

 private:
  FloquetResolvent problem_;
  VectorXd u_;
  MatrixXc shifted_;
};

struct SpinSums {
  VectorXd occupations;
  std::vector<double> current;
};

SpinSums integrate_spin(const SpinEquations& eq, const SpectralTail& plain, const SpectralTail& shifted,
                        const VectorXd& opposite, const QuasiEnergyGrid& grid) {
  const FloquetResolvent& p = eq.problem();
  const int N = p.truncation();
  const Index d = p.block_dim();
  const std::size_t L = p.leads().size();
  VectorXd occ = VectorXd::Zero(d);
  std::vector<double> current(L, 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double e = grid.points[k];
    const FloquetInteractingGreen g = eq.solve(opposite, e);
    for (int m = -N; m <= N; ++m) occ += grid.weights[k] * g.lesser.block(m, m).diagonal().imag();
    for (std::size_t l = 0; l < L; ++l) {
      const LeadSpec& lead = p.leads()[l];
      const MatrixXc sigma_a = lead_self_energy(lead, SelfEnergyKind::advanced, e);
      cplx sum = 0.0;
      for (int m = -N; m <= N; ++m) {
        sum += (g.retarded.block(m, m) * lead_self_energy(lead, SelfEnergyKind::lesser, e + m * p.omega())).trace();
        sum += (g.lesser.block(m, m) * sigma_a).trace();
      }
      current[l] += grid.weights[k] * 2.0 * sum.real();
    }
  }
  occ /= 2.0 * pi;
  for (double& j : current) j /= 2.0 * pi;
  // Filled states below the integration range, from G = g0 (1 - n) + g2 n on the lowest block.
  const Index n = eq.size();
  for (Index i = 0; i < d; ++i) {
    MatrixXc w = MatrixXc::Zero(n, n);
    w(i, i) = 1.0 - opposite(i);
    occ(i) += plain.below(w, grid.lower());
    w(i, i) = opposite(i);
    occ(i) += shifted.below(w, grid.lower());
  }
  return {occ, current};
}

struct SpinfulProblem {
  std::array<SpinEquations, 2> spins;
  std::array<SpectralTail, 2> plain, shifted;
};

void check_grid(const OneBodyFourierHamiltonian& H, int N, const QuasiEnergyGrid& grid) {
  if (grid.kind == QuasiEnergyGrid::Kind::window && (N != 0 || H.cutoff() != 0))
    throw std::invalid_argument("static integration window requires an undriven model and N = 0");
  if (grid.kind == QuasiEnergyGrid::Kind::bounded && std::abs(grid.upper() - H.omega()) > 1e-12 * H.omega())
    throw std::invalid_argument("bounded grid must span one driving period of quasi-energy");
}

SpinResolvedResult evaluate(const SpinfulProblem& sp, const std::array<VectorXd, 2>& occupations,
                            const QuasiEnergyGrid& grid) {
  SpinResolvedResult r;
  for (int s = 0; s < 2; ++s) {
    const SpinSums sums = integrate_spin(sp.spins[s], sp.plain[s], sp.shifted[s], occupations[1 - s], grid);
    r.occupations[s] = sums.occupations;
    r.n[s] = sums.occupations.sum();
    r.current[s] = sums.current;
  }
  r.n_total = r.n[0] + r.n[1];
  r.current_total.assign(r.current[0].size(), 0.0);
  for (std::size_t l = 0; l < r.current_total.size(); ++l) r.current_total[l] = r.current[0][l] + r.current[1][l];
  return r;
}

SpinfulProblem make_problem(const OneBodyFourierHamiltonian& up, const OneBodyFourierHamiltonian& down,
                            std::span<const LeadSpec> leads, const VectorXd& u, int N) {
  SpinEquations a(up, leads, u, N), b(down, leads, u, N);
  return SpinfulProblem{{a, b},
                        {SpectralTail(a.problem().effective()), SpectralTail(b.problem().effective())},
                        {SpectralTail(a.shifted()), SpectralTail(b.shifted())}};
}

}  // namespace

InteractingGreen solve_interacting_static(const MatrixXc& h, std::span<const LeadSpec> leads, const VectorXd& u,
                                          const VectorXd& opposite, double energy) {
  if (!std::isfinite(energy)) throw std::invalid_argument("energy must be finite");
  OneBodyFourierHamiltonian H(1.0, {{0, h}});
  const FloquetInteractingGreen g = SpinEquations(H, leads, u, 0).solve(opposite, energy);
  if (!g.retarded.matrix().allFinite()) {
    std::ostringstream msg;
    msg << "singular interacting equations at energy " << energy;
    throw std::runtime_error(msg.str());
  }
  return {g.retarded.matrix(), g.lesser.matrix()};
}

FloquetInteractingGreen solve_interacting_floquet(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads,
                                                  const VectorXd& u, int N, const VectorXd& opposite, double energy) {
  return SpinEquations(H, leads, u, N).solve(opposite, energy);
}

SpinResolvedResult interacting_transport(const OneBodyFourierHamiltonian& up, const OneBodyFourierHamiltonian& down,
                                         std::span<const LeadSpec> leads, const HubbardSpec& hubbard, int N,
                                         const QuasiEnergyGrid& grid, const InteractingConfig& config) {
  config.validate();
  if (config.mode == OccupationMode::self_consistent)
    return self_consistent_occupations(up, down, leads, hubbard, N, grid, config);
  check_grid(up, N, grid);
  const VectorXd u = hubbard_vector(hubbard, up.dim());
  const SpinfulProblem sp = make_problem(up, down, leads, u, N);
  const VectorXd half = VectorXd::Constant(up.dim(), 0.5);
  return evaluate(sp, {half, half}, grid);
}

SpinResolvedResult self_consistent_occupations(const OneBodyFourierHamiltonian& up,
                                               const OneBodyFourierHamiltonian& down, std::span<const LeadSpec> leads,
                                               const HubbardSpec& hubbard, int N, const QuasiEnergyGrid& grid,
                                               const InteractingConfig& config) {
  config.validate();
  if (config.mode != OccupationMode::self_consistent)
    throw std::invalid_argument("self_consistent_occupations requires self-consistent mode");
  check_grid(up, N, grid);
  const VectorXd u = hubbard_vector(hubbard, up.dim());
  const SpinfulProblem sp = make_problem(up, down, leads, u, N);

  // With u = 0 the occupations of the other spin do not enter, so any input gives the free values.
  const VectorXd zero = VectorXd::Zero(up.dim());
  SpinResolvedResult r = evaluate(make_problem(up, down, leads, zero, N), {zero, zero}, grid);
  std::array<VectorXd, 2> occ = r.occupations;
  for (int it = 1; it <= config.max_iter; ++it) {
    r = evaluate(sp, occ, grid);
    r.iterations = it;
    double residual = 0.0;
    for (int s = 0; s < 2; ++s) residual = std::max(residual, (r.occupations[s] - occ[s]).cwiseAbs().maxCoeff());
    r.residual = residual;
    if (residual < config.occ_tol) {
      r.converged = true;
      return r;
    }
    for (int s = 0; s < 2; ++s) occ[s] = (1.0 - config.mixing) * occ[s] + config.mixing * r.occupations[s];
  }
  r.converged = false;
  return r;
}

}  // namespace floquet
