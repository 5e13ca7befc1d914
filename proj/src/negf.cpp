#include "floquet/negf.hpp"

#include <cmath>
#include <sstream>

namespace floquet {

FloquetResolvent::FloquetResolvent(const OneBodyFourierHamiltonian& H, std::vector<LeadSpec> leads, int N)
    : N_(N), d_(H.dim()), omega_(H.omega()), leads_(std::move(leads)), hF_(build_floquet_hamiltonian(H, N)) {
  if (leads_.empty()) throw std::invalid_argument("at least one lead is required");
  for (const auto& lead : leads_) {
    lead.validate();
    if (lead.gamma.rows() != d_) throw std::invalid_argument("lead gamma dimension does not match the model");
  }
  const MatrixXc gamma = total_gamma(leads_);
  effective_ = hF_.matrix();
  for (int m = -N_; m <= N_; ++m) effective_.block(hF_.offset(m), hF_.offset(m), d_, d_) -= 0.5 * I_unit * gamma;
}

FloquetMatrixXc FloquetResolvent::retarded(double energy) const {
  if (!std::isfinite(energy)) throw std::invalid_argument("quasi-energy must be finite");
  MatrixXc a = -effective_;
  a.diagonal().array() += energy;
  Eigen::PartialPivLU<MatrixXc> lu(a);
  return FloquetMatrixXc(N_, d_, lu.inverse());
}

FloquetMatrixXc FloquetResolvent::lesser_self_energy(double energy) const {
  return floquet_self_energy(leads_, SelfEnergyKind::lesser, energy, N_, omega_);
}

VLikeGreen solve_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N, double energy) {
  FloquetResolvent problem(H, {leads.begin(), leads.end()}, N);
  MatrixXc a = -problem.effective();
  a.diagonal().array() += energy;
  const Index d = H.dim();
  MatrixXc rhs = MatrixXc::Zero(a.rows(), d);
  rhs.block(Index(N) * d, 0, d, d).setIdentity();
  MatrixXc column = a.partialPivLu().solve(rhs);
  VLikeGreen g{N, energy, {}};
  for (int n = -N; n <= N; ++n) g.coefficients.push_back(column.block(Index(n + N) * d, 0, d, d));
  return g;
}

FloquetMatrixXc solve_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                            double energy) {
  return FloquetResolvent(H, {leads.begin(), leads.end()}, N).retarded(energy);
}

namespace {

MatrixXc lesser_central_from(const FloquetResolvent& problem, const FloquetMatrixXc& G, double energy) {
  const Index d = problem.block_dim();
  MatrixXc out = MatrixXc::Zero(d, d);
  for (int m = -problem.truncation(); m <= problem.truncation(); ++m) {
    const MatrixXc row = G.block(0, m);
    out += row * wideband_self_energies(problem.leads(), SelfEnergyKind::lesser, energy + m * problem.omega()) *
           row.adjoint();
  }
  return out;
}

}  // namespace

MatrixXc vlike_lesser_central(const FloquetResolvent& problem, double energy) {
  return lesser_central_from(problem, problem.retarded(energy), energy);
}

MatrixXc vlike_lesser_central(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                              double energy) {
  return vlike_lesser_central(FloquetResolvent(H, {leads.begin(), leads.end()}, N), energy);
}

FloquetMatrixXc mlike_lesser(const FloquetResolvent& problem, double energy) {
  const FloquetMatrixXc G = problem.retarded(energy);
  const FloquetMatrixXc S = problem.lesser_self_energy(energy);
  return FloquetMatrixXc(problem.truncation(), problem.block_dim(),
                         G.matrix() * S.matrix() * G.matrix().adjoint());
}

FloquetMatrixXc mlike_lesser(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                             double energy) {
  return mlike_lesser(FloquetResolvent(H, {leads.begin(), leads.end()}, N), energy);
}

std::vector<double> vlike_integrand(const FloquetResolvent& problem, double energy) {
  const FloquetMatrixXc G = problem.retarded(energy);
  const MatrixXc lesser = lesser_central_from(problem, G, energy);
  const MatrixXc g0 = G.block(0, 0);
  std::vector<double> out{(-I_unit * lesser.trace()).real()};
  for (const auto& lead : problem.leads()) {
    const MatrixXc x = g0 * lead_self_energy(lead, SelfEnergyKind::lesser, energy) +
                       lesser * lead_self_energy(lead, SelfEnergyKind::advanced, energy);
    out.push_back(2.0 * x.trace().real());
  }
  return out;
}

std::vector<double> mlike_integrand(const FloquetResolvent& problem, double energy) {
  const FloquetMatrixXc G = problem.retarded(energy);
  const FloquetMatrixXc S = problem.lesser_self_energy(energy);
  const MatrixXc lesser = G.matrix() * S.matrix() * G.matrix().adjoint();
  std::vector<double> out{(-I_unit * lesser.trace()).real()};
  const int N = problem.truncation();
  const Index d = problem.block_dim();
  for (const auto& lead : problem.leads()) {
    const MatrixXc sigma_a = lead_self_energy(lead, SelfEnergyKind::advanced, energy);
    cplx sum = 0.0;
    for (int m = -N; m <= N; ++m) {
      const Index o = G.offset(m);
      const MatrixXc sigma_l = lead_self_energy(lead, SelfEnergyKind::lesser, energy + m * problem.omega());
      sum += (G.matrix().block(o, o, d, d) * sigma_l).trace();
      sum += (lesser.block(o, o, d, d) * sigma_a).trace();
    }
    out.push_back(2.0 * sum.real());
  }
  return out;
}

namespace {

template <typename Integrand>
TransportResult integrate(const FloquetResolvent& problem, const QuasiEnergyGrid& grid, Integrand&& integrand) {
  const std::size_t nl = problem.leads().size();
  std::vector<double> sums(nl + 1, 0.0);
  std::vector<double> first, last;
  double peak = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::vector<double> v = integrand(problem, grid.points[k]);
    for (std::size_t c = 0; c <= nl; ++c) sums[c] += grid.weights[k] * v[c];
    for (std::size_t c = 1; c <= nl; ++c) peak = std::max(peak, std::abs(v[c]));
    if (k == 0) first = v;
    if (k + 1 == grid.size()) last = v;
  }
  TransportResult r;
  r.n_avg = sums[0] / (2.0 * pi);
  for (std::size_t c = 1; c <= nl; ++c) r.current.push_back(sums[c] / (2.0 * pi));
  if (grid.kind == QuasiEnergyGrid::Kind::window && peak > 0.0) {
    for (std::size_t c = 1; c <= nl; ++c) {
      if (std::max(std::abs(first[c]), std::abs(last[c])) > 1e-8 * peak) {
        std::ostringstream msg;
        msg << "current integrand of lead " << c - 1 << " not negligible at the energy window edge";
        r.warnings.push_back(msg.str());
      }
    }
  }
  return r;
}

MatrixXc block_projector(const FloquetResolvent& problem, int m) {
  const Index n = problem.effective().rows();
  const Index d = problem.block_dim();
  MatrixXc p = MatrixXc::Zero(n, n);
  p.block(Index(m + problem.truncation()) * d, Index(m + problem.truncation()) * d, d, d).setIdentity();
  return p;
}

}  // namespace

TransportResult transport_vlike(const FloquetResolvent& problem, const QuasiEnergyGrid& grid) {
  TransportResult r = integrate(problem, grid, vlike_integrand);
  // Below the window every sideband is filled, so the integrand is the central-block spectral function.
  r.n_avg += spectral_weight_below(problem.effective(), block_projector(problem, 0), grid.lower());
  return r;
}

namespace {

// Occupation density of the diagonal block m of the M-like lesser function.
double mlike_block_density(const FloquetResolvent& problem, double energy, int m) {
  const FloquetMatrixXc G = problem.retarded(energy);
  const FloquetMatrixXc S = problem.lesser_self_energy(energy);
  const Index d = problem.block_dim(), o = G.offset(m);
  const MatrixXc lesser = G.matrix().middleRows(o, d) * S.matrix() * G.matrix().middleRows(o, d).adjoint();
  return (-I_unit * lesser.trace()).real();
}

// The strips of the sideband blocks join into one trapezoid rule over [-N w, (N + 1) w]; only its two outer
// ends carry an h^2 error. Removes it from the occupation with one-sided second-order derivatives of the
// outermost blocks. Current densities vanish at both ends (all leads full or empty), and leaving them
// untouched keeps the currents exactly conserved.
void add_strip_end_correction(const FloquetResolvent& problem, const QuasiEnergyGrid& grid, TransportResult& r) {
  const std::size_t n = grid.size() - 1;
  if (n < 4) return;
  const double h = grid.points[1] - grid.points[0];
  const int N = problem.truncation();
  double lo[3], hi[3];
  for (std::size_t k = 0; k < 3; ++k) {
    lo[k] = mlike_block_density(problem, grid.points[k], -N);
    hi[k] = mlike_block_density(problem, grid.points[n - k], N);
  }
  const double start = -3.0 * lo[0] + 4.0 * lo[1] - lo[2];
  const double end = 3.0 * hi[0] - 4.0 * hi[1] + hi[2];
  r.n_avg += h / 24.0 * (start - end) / (2.0 * pi);
}

}  // namespace

TransportResult transport_mlike(const FloquetResolvent& problem, const QuasiEnergyGrid& grid) {
  TransportResult r = integrate(problem, grid, mlike_integrand);
  if (grid.kind == QuasiEnergyGrid::Kind::bounded) add_strip_end_correction(problem, grid, r);
  // Below the strip every state is counted as filled.
  const double bottom = grid.lower() - problem.truncation() * problem.omega();
  for (const auto& lead : problem.leads())
    if (lead.mu - 10.0 * lead.kT < bottom) {
      std::ostringstream msg;
      msg << "chemical potential " << lead.mu << " lies within 10 kT of the lowest sideband energy " << bottom
          << "; increase the truncation";
      r.warnings.push_back(msg.str());
      break;
    }
  // States below the lowest sideband strip.
  r.n_avg += spectral_weight_below(problem.effective(), block_projector(problem, -problem.truncation()), grid.lower());
  return r;
}

double avg_number_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                        const QuasiEnergyGrid& grid) {
  return transport_vlike(FloquetResolvent(H, {leads.begin(), leads.end()}, N), grid).n_avg;
}

double avg_current_vlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                         const QuasiEnergyGrid& grid, std::size_t lead) {
  return transport_vlike(FloquetResolvent(H, {leads.begin(), leads.end()}, N), grid).current.at(lead);
}

double avg_number_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                        const QuasiEnergyGrid& grid) {
  return transport_mlike(FloquetResolvent(H, {leads.begin(), leads.end()}, N), grid).n_avg;
}

double avg_current_mlike(const OneBodyFourierHamiltonian& H, std::span<const LeadSpec> leads, int N,
                         const QuasiEnergyGrid& grid, std::size_t lead) {
  return transport_mlike(FloquetResolvent(H, {leads.begin(), leads.end()}, N), grid).current.at(lead);
}

MatrixXd sideband_transmission(const FloquetResolvent& problem, double energy, std::size_t from, std::size_t to) {
  if (problem.leads().size() != 2) throw std::invalid_argument("transmission needs exactly two leads");
  const FloquetMatrixXc G = problem.retarded(energy);
  const int N = problem.truncation();
  const MatrixXc& ga = problem.leads().at(from).gamma;
  const MatrixXc& gb = problem.leads().at(to).gamma;
  MatrixXd t(2 * N + 1, 2 * N + 1);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      const MatrixXc gmn = G.block(m, n);
      t(m + N, n + N) = (ga * gmn * gb * gmn.adjoint()).trace().real();
    }
  return t;
}

double transmission(const FloquetResolvent& problem, double energy, std::size_t from, std::size_t to) {
  return sideband_transmission(problem, energy, from, to).sum();
}

double landauer_current_density(const FloquetResolvent& problem, double energy, std::size_t from, std::size_t to) {
  const MatrixXd t = sideband_transmission(problem, energy, from, to);
  const int N = problem.truncation();
  const auto& a = problem.leads().at(from);
  const auto& b = problem.leads().at(to);
  double sum = 0.0;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      sum += t(m + N, n + N) * (a.occupation(energy + m * problem.omega()) - b.occupation(energy + n * problem.omega()));
  return sum;
}

}  // namespace floquet
