#include "floquet/qme.hpp"

#include <bit>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "floquet/floquet_linalg.hpp"

namespace floquet {

MatrixXd FloquetEigen::omega_differences() const {
  const Index n = quasi.size();
  MatrixXd o(n, n);
  for (Index g = 0; g < n; ++g)
    for (Index v = 0; v < n; ++v) o(g, v) = quasi(g) - quasi(v);
  return o;
}

FloquetEigen build_floquet_eigen(const MatrixXc& floquet_hamiltonian) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(floquet_hamiltonian);
  if (es.info() != Eigen::Success) throw std::runtime_error("Floquet Hamiltonian diagonalization failed");
  FloquetEigen fe{es.eigenvectors(), es.eigenvalues()};
  for (Index c = 0; c < fe.Y.cols(); ++c) {
    Index r = 0;
    while (r + 1 < fe.Y.rows() && std::abs(fe.Y(r, c)) < 1e-8) ++r;
    fe.Y.col(c) *= std::conj(fe.Y(r, c)) / std::abs(fe.Y(r, c));
  }
  return fe;
}

OpenDot make_spinless_dot(const OneBodyFourierHamiltonian& h, const std::vector<LeadSpec>& leads) {
  FockBasis basis(int(h.dim()));
  std::vector<int> all(std::size_t(h.dim()));
  for (int i = 0; i < int(h.dim()); ++i) all[std::size_t(i)] = i;
  for (const auto& lead : leads) lead.validate();
  return OpenDot{basis, many_body_hamiltonian(basis, h), h.omega(), leads, {all}};
}

OpenDot make_spinful_dot(const OneBodyFourierHamiltonian& up, const OneBodyFourierHamiltonian& down,
                         const HubbardSpec& hubbard, const std::vector<LeadSpec>& site_leads) {
  const int sites = int(up.dim());
  FockBasis basis = FockBasis::spinful(sites);
  std::vector<LeadSpec> leads;
  for (const auto& lead : site_leads) {
    lead.validate();
    if (lead.gamma.rows() != sites) throw std::invalid_argument("lead gamma must be given over sites");
    LeadSpec so{MatrixXc::Zero(2 * sites, 2 * sites), lead.mu, lead.kT};
    for (int i = 0; i < sites; ++i)
      for (int j = 0; j < sites; ++j)
        for (int s = 0; s < 2; ++s) so.gamma(2 * i + s, 2 * j + s) = lead.gamma(i, j);
    leads.push_back(std::move(so));
  }
  std::vector<int> ups, downs;
  for (int i = 0; i < sites; ++i) {
    ups.push_back(2 * i);
    downs.push_back(2 * i + 1);
  }
  return OpenDot{basis, many_body_hamiltonian(basis, up, down, hubbard), up.omega(), std::move(leads), {ups, downs}};
}

std::vector<double> flatten(const QmeObservables& o) {
  std::vector<double> v{o.n};
  v.insert(v.end(), o.n_species.begin(), o.n_species.end());
  v.insert(v.end(), o.current.begin(), o.current.end());
  for (const auto& js : o.current_species) v.insert(v.end(), js.begin(), js.end());
  return v;
}

QmeObservables unflatten(const std::vector<double>& v, std::size_t leads, std::size_t species) {
  QmeObservables o;
  std::size_t k = 0;
  o.n = v.at(k++);
  for (std::size_t s = 0; s < species; ++s) o.n_species.push_back(v.at(k++));
  for (std::size_t l = 0; l < leads; ++l) o.current.push_back(v.at(k++));
  o.current_species.assign(leads, {});
  for (std::size_t l = 0; l < leads; ++l)
    for (std::size_t s = 0; s < species; ++s) o.current_species[l].push_back(v.at(k++));
  return o;
}

// ---------------------------------------------------------------------------------------------

FqmeBase::FqmeBase(OpenDot dot, int N) : dot_(std::move(dot)), N_(N) {
  if (N < 0) throw std::invalid_argument("Floquet truncation must be non-negative");
  if (dot_.leads.empty()) throw std::invalid_argument("at least one lead is required");
  for (const auto& lead : dot_.leads)
    if (lead.gamma.rows() != dot_.basis.orbitals())
      throw std::invalid_argument("lead gamma must be given over spin-orbitals");
  floquet_hamiltonian_ = floquet_many_body_hamiltonian(dot_.hamiltonian, dot_.omega, N_);
  eigen_ = build_floquet_eigen(floquet_hamiltonian_);
  for (const auto& [n, b] : dot_.hamiltonian)
    if (b.norm() > 0.0) hamiltonian_cutoff_ = std::max(hamiltonian_cutoff_, std::abs(n));
  for (int i = 0; i < dot_.basis.orbitals(); ++i) d_.push_back(dot_.basis.annihilation(i));
  build_dissipator_families();
}

template <typename Weight>
MatrixXc FqmeBase::dress(const MatrixXc& op, Weight&& weight) const {
  MatrixXc rotated = eigen_.Y.adjoint() * op * eigen_.Y;
  const VectorXd& e = eigen_.quasi;
  for (Index g = 0; g < rotated.rows(); ++g)
    for (Index v = 0; v < rotated.cols(); ++v)
      if (rotated(g, v) != 0.0) rotated(g, v) *= weight(e(g) - e(v));
  return eigen_.Y * rotated * eigen_.Y.adjoint();
}

std::vector<int> FqmeBase::fock_labels() const {
  const int base = dot_.basis.orbitals() + 1;
  std::vector<int> labels;
  for (unsigned s = 0; s < unsigned(dot_.basis.dim()); ++s) {
    int label = 0, scale = 1;
    for (const auto& group : dot_.species) {
      int count = 0;
      for (int i : group) count += (s >> i) & 1u;
      label += count * scale;
      scale *= base;
    }
    labels.push_back(label);
  }
  return labels;
}

FqmeBase::Family FqmeBase::fold_central(const MatrixXc& op, bool creation, const LeadSpec& lead) const {
  const Index D = dot_.basis.dim();
  MatrixXc big = MatrixXc::Zero(floquet_hamiltonian_.rows(), floquet_hamiltonian_.cols());
  big.block(Index(N_) * D, Index(N_) * D, D, D) = op;
  const MatrixXc Z = creation ? dress(big, [&](double w) { return lead.occupation(w); })
                              : dress(big, [&](double w) { return 1.0 - lead.occupation(-w); });
  Family fam;
  for (int n = -N_; n <= N_; ++n)
    for (int m = -N_; m <= N_; ++m) {
      auto [it, fresh] = fam.try_emplace(n - m, MatrixXc::Zero(D, D));
      it->second += Z.block(Index(n + N_) * D, Index(m + N_) * D, D, D);
    }
  return fam;
}

void FqmeBase::build_dissipator_families() {
  const int M = dot_.basis.orbitals();
  const Index D = dot_.basis.dim();
  const std::size_t L = dot_.leads.size();
  creation_.assign(L, {});
  annihilation_.assign(L, {});
  x_families_.assign(L, std::vector<Family>(std::size_t(M)));
  y_families_.assign(L, std::vector<Family>(std::size_t(M)));
  for (std::size_t l = 0; l < L; ++l) {
    const LeadSpec& lead = dot_.leads[l];
    for (int j = 0; j < M; ++j) {
      const MatrixXc d = dot_.basis.annihilation(j);
      creation_[l].push_back(fold_central(d.adjoint(), true, lead));
      annihilation_[l].push_back(fold_central(d, false, lead));
    }
    for (int i = 0; i < M; ++i) {
      for (int j = 0; j < M; ++j) {
        const cplx gij = 0.5 * lead.gamma(i, j);
        const cplx gji = 0.5 * lead.gamma(j, i);
        for (const auto& [k, c] : creation_[l][std::size_t(j)]) {
          auto [it, fresh] = x_families_[l][std::size_t(i)].try_emplace(k, MatrixXc::Zero(D, D));
          if (gij != 0.0) it->second += gij * c;
        }
        for (const auto& [k, c] : annihilation_[l][std::size_t(j)]) {
          auto [it, fresh] = y_families_[l][std::size_t(i)].try_emplace(k, MatrixXc::Zero(D, D));
          if (gji != 0.0) it->second += gji * c;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------------------------

HilbertSpaceFqme::HilbertSpaceFqme(OpenDot dot, int N) : FqmeBase(std::move(dot), N) {}

MatrixXc HilbertSpaceFqme::evaluate(const Family& f, double omega, double t) {
  auto it = f.begin();
  MatrixXc out = std::exp(-I_unit * (double(it->first) * omega * t)) * it->second;
  for (++it; it != f.end(); ++it) out += std::exp(-I_unit * (double(it->first) * omega * t)) * it->second;
  return out;
}

MatrixXc HilbertSpaceFqme::hamiltonian(double t) const { return evaluate(dot_.hamiltonian, dot_.omega, t); }

MatrixXc HilbertSpaceFqme::dressed_creation(int j, std::size_t lead, double t) const {
  return evaluate(creation_.at(lead).at(std::size_t(j)), dot_.omega, t);
}

MatrixXc HilbertSpaceFqme::dressed_annihilation(int j, std::size_t lead, double t) const {
  return evaluate(annihilation_.at(lead).at(std::size_t(j)), dot_.omega, t);
}

namespace {

// -K rho - rho K^+ + sum_i (X_i rho d_i + Y_i rho d_i^+ + d_i^+ rho X_i^+ + d_i rho Y_i^+), written for the
// coefficient pair (x, y) of one Fourier component and the partner (x', y') of the opposite component.
void append_dissipator(std::vector<Sandwich>& terms, const std::vector<MatrixXc>& d, const std::vector<MatrixXc>& x,
                       const std::vector<MatrixXc>& y, const std::vector<MatrixXc>& x_partner,
                       const std::vector<MatrixXc>& y_partner) {
  const Index D = d.front().rows();
  const MatrixXc id = MatrixXc::Identity(D, D);
  MatrixXc K = MatrixXc::Zero(D, D), K_partner = MatrixXc::Zero(D, D);
  for (std::size_t i = 0; i < d.size(); ++i) {
    K += d[i] * x[i] + d[i].adjoint() * y[i];
    K_partner += d[i] * x_partner[i] + d[i].adjoint() * y_partner[i];
  }
  terms.push_back({-K, id});
  terms.push_back({id, -K_partner.adjoint()});
  for (std::size_t i = 0; i < d.size(); ++i) {
    terms.push_back({x[i], d[i]});
    terms.push_back({y[i], d[i].adjoint()});
    terms.push_back({d[i].adjoint(), x_partner[i].adjoint()});
    terms.push_back({d[i], y_partner[i].adjoint()});
  }
}

}  // namespace

std::vector<Sandwich> FqmeBase::component_terms(int k, int lead, bool coherent) const {
  const Index D = dot_.basis.dim();
  const MatrixXc id = MatrixXc::Identity(D, D);
  std::vector<Sandwich> terms;
  if (coherent) {
    auto it = dot_.hamiltonian.find(k);
    if (it != dot_.hamiltonian.end()) {
      terms.push_back({-I_unit * it->second, id});
      terms.push_back({id, I_unit * it->second});
    }
  }
  auto pick = [&](const std::vector<Family>& fams, int kk) {
    std::vector<MatrixXc> out;
    for (const auto& f : fams) {
      auto it = f.find(kk);
      out.push_back(it == f.end() ? MatrixXc::Zero(D, D) : it->second);
    }
    return out;
  };
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    if (lead >= 0 && std::size_t(lead) != l) continue;
    append_dissipator(terms, d_, pick(x_families_[l], k), pick(y_families_[l], k), pick(x_families_[l], -k), pick(y_families_[l], -k));
  }
  return terms;
}

std::vector<Sandwich> HilbertSpaceFqme::terms_at(double t, int lead, bool coherent) const {
  const Index D = dot_.basis.dim();
  const MatrixXc id = MatrixXc::Identity(D, D);
  std::vector<Sandwich> terms;
  if (coherent) {
    const MatrixXc h = hamiltonian(t);
    terms.push_back({-I_unit * h, id});
    terms.push_back({id, I_unit * h});
  }
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    if (lead >= 0 && std::size_t(lead) != l) continue;
    std::vector<MatrixXc> x, y;
    for (const auto& f : x_families_[l]) x.push_back(evaluate(f, dot_.omega, t));
    for (const auto& f : y_families_[l]) y.push_back(evaluate(f, dot_.omega, t));
    append_dissipator(terms, d_, x, y, x, y);
  }
  return terms;
}

MatrixXc HilbertSpaceFqme::rhs(const MatrixXc& rho, double t) const { return apply_terms(terms_at(t), rho); }

MatrixXc HilbertSpaceFqme::dissipator(const MatrixXc& rho, double t, std::size_t lead) const {
  return apply_terms(terms_at(t, int(lead), false), rho);
}

QmeObservables HilbertSpaceFqme::observe(const MatrixXc& rho, double t) const {
  QmeObservables o;
  const MatrixXc n = dot_.basis.total_number();
  o.n = (n * rho).trace().real();
  for (const auto& g : dot_.species) o.n_species.push_back((dot_.basis.number_of(g) * rho).trace().real());
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    const MatrixXc dr = dissipator(rho, t, l);
    o.current.push_back((n * dr).trace().real());
    std::vector<double> js;
    for (const auto& g : dot_.species) js.push_back((dot_.basis.number_of(g) * dr).trace().real());
    o.current_species.push_back(std::move(js));
  }
  return o;
}

PeriodicLinearFlow HilbertSpaceFqme::flow(const LiouvilleSpace& space, int steps_per_period) const {
  std::map<int, MatrixXc> generator;
  space.check_closed(terms_at(0.37 * period()));
  for (int k = -generator_harmonics(); k <= generator_harmonics(); ++k) {
    MatrixXc S = space.superoperator(component_terms(k));
    if (S.norm() > 0.0) generator.emplace(k, std::move(S));
  }
  return PeriodicLinearFlow(std::move(generator), dot_.omega, steps_per_period);
}

std::vector<FourierCovector> HilbertSpaceFqme::observable_covectors(const LiouvilleSpace& space) const {
  std::vector<FourierCovector> obs;
  const MatrixXc n = dot_.basis.total_number();
  std::vector<MatrixXc> counted{n};
  for (const auto& g : dot_.species) counted.push_back(dot_.basis.number_of(g));
  for (std::size_t c = 0; c < counted.size(); ++c) obs.push_back({{{0, space.trace_with(counted[c])}}});
  std::vector<std::vector<FourierCovector>> per_lead(dot_.leads.size());
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    per_lead[l].resize(counted.size());
    for (int k = -2 * N_; k <= 2 * N_; ++k) {
      const MatrixXc S = space.superoperator(component_terms(k, int(l), false));
      for (std::size_t c = 0; c < counted.size(); ++c) per_lead[l][c].components[k] = space.trace_with(counted[c]) * S;
    }
  }
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) obs.push_back(per_lead[l][0]);
  for (std::size_t l = 0; l < dot_.leads.size(); ++l)
    for (std::size_t c = 1; c < counted.size(); ++c) obs.push_back(per_lead[l][c]);
  return obs;
}

MatrixXc HilbertSpaceFqme::empty_state() const {
  MatrixXc rho = MatrixXc::Zero(dot_.basis.dim(), dot_.basis.dim());
  rho(0, 0) = 1.0;
  return rho;
}

QmeSteadyState HilbertSpaceFqme::steady_state(const QmeSettings& settings, const MatrixXc& initial) const {
  const LiouvilleSpace space = liouville_space();
  const PeriodicLinearFlow f = flow(space, settings.steps_per_period);
  const SteadyAverages s = evolve_to_steady(f, space.vectorize(initial), observable_covectors(space),
                                            {settings.steps_per_period, settings.steady_tol, settings.max_periods});
  return {unflatten(s.values, dot_.leads.size(), dot_.species.size()), s.periods, s.converged, s.residual_history};
}

// ---------------------------------------------------------------------------------------------

FloquetSpaceFqme::FloquetSpaceFqme(OpenDot dot, int N) : FqmeBase(std::move(dot), N) {}

FloquetSpaceFqme::FourierState FloquetSpaceFqme::rhs(const FourierState& state) const {
  const double w = dot_.omega;
  FourierState out(state.size(), MatrixXc::Zero(physical_dim(), physical_dim()));
  for (int p = -N_; p <= N_; ++p) {
    MatrixXc& o = out[std::size_t(p + N_)];
    o += I_unit * (double(p) * w) * state[std::size_t(p + N_)];
    for (int n = -N_; n <= N_; ++n) o += apply_terms(component_terms(p - n), state[std::size_t(n + N_)]);
  }
  return out;
}

std::map<int, MatrixXc> FloquetSpaceFqme::dissipator(const FourierState& state, std::size_t lead) const {
  std::map<int, MatrixXc> out;
  for (int k = -generator_harmonics(); k <= generator_harmonics(); ++k) {
    const std::vector<Sandwich> terms = component_terms(k, int(lead), false);
    for (int n = -N_; n <= N_; ++n) {
      auto [it, fresh] = out.try_emplace(k + n, MatrixXc::Zero(physical_dim(), physical_dim()));
      it->second += apply_terms(terms, state[std::size_t(n + N_)]);
    }
  }
  return out;
}

FloquetSpaceFqme::FourierState FloquetSpaceFqme::lift(const MatrixXc& rho) const {
  FourierState state(std::size_t(2 * N_ + 1), MatrixXc::Zero(physical_dim(), physical_dim()));
  state[std::size_t(N_)] = rho;
  return state;
}

MatrixXc FloquetSpaceFqme::floquet_density(const FourierState& state) const {
  const Index D = physical_dim();
  MatrixXc out = MatrixXc::Zero(Index(2 * N_ + 1) * D, Index(2 * N_ + 1) * D);
  for (int m = -N_; m <= N_; ++m)
    for (int n = -N_; n <= N_; ++n)
      if (std::abs(m - n) <= N_) out.block(Index(m + N_) * D, Index(n + N_) * D, D, D) = state[std::size_t(m - n + N_)];
  return out;
}

MatrixXc FloquetSpaceFqme::project(const FourierState& state, double t) const {
  MatrixXc rho = MatrixXc::Zero(physical_dim(), physical_dim());
  for (int m = -N_; m <= N_; ++m) rho += std::exp(-I_unit * (double(m) * dot_.omega * t)) * state[std::size_t(m + N_)];
  return rho;
}

QmeObservables FloquetSpaceFqme::observe(const FourierState& state, double t) const {
  auto at = [&](const std::map<int, MatrixXc>& fam) {
    MatrixXc rho = MatrixXc::Zero(physical_dim(), physical_dim());
    for (const auto& [k, c] : fam) rho += std::exp(-I_unit * (double(k) * dot_.omega * t)) * c;
    return rho;
  };
  QmeObservables o;
  const MatrixXc n = dot_.basis.total_number();
  const MatrixXc rho = project(state, t);
  o.n = (n * rho).trace().real();
  for (const auto& g : dot_.species) o.n_species.push_back((dot_.basis.number_of(g) * rho).trace().real());
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    const MatrixXc dr = at(dissipator(state, l));
    o.current.push_back((n * dr).trace().real());
    std::vector<double> js;
    for (const auto& g : dot_.species) js.push_back((dot_.basis.number_of(g) * dr).trace().real());
    o.current_species.push_back(std::move(js));
  }
  return o;
}

LiouvilleSpace FloquetSpaceFqme::liouville_space() const { return LiouvilleSpace(fock_labels()); }

VectorXc FloquetSpaceFqme::vectorize(const LiouvilleSpace& space, const FourierState& state) const {
  VectorXc v(space.size() * Index(state.size()));
  for (std::size_t n = 0; n < state.size(); ++n) v.segment(Index(n) * space.size(), space.size()) = space.vectorize(state[n]);
  return v;
}

PeriodicLinearFlow FloquetSpaceFqme::flow(const LiouvilleSpace& space, int steps_per_period) const {
  const Index s = space.size();
  const Index blocks = 2 * N_ + 1;
  space.check_closed(component_terms(0));
  std::map<int, MatrixXc> components;
  for (int k = -2 * N_; k <= 2 * N_; ++k) components.emplace(k, space.superoperator(component_terms(k)));
  MatrixXc G = MatrixXc::Zero(blocks * s, blocks * s);
  for (int p = -N_; p <= N_; ++p) {
    for (int n = -N_; n <= N_; ++n) G.block(Index(p + N_) * s, Index(n + N_) * s, s, s) = components.at(p - n);
    G.block(Index(p + N_) * s, Index(p + N_) * s, s, s).diagonal().array() += I_unit * (double(p) * dot_.omega);
  }
  std::map<int, MatrixXc> generator;
  generator.emplace(0, std::move(G));
  return PeriodicLinearFlow(std::move(generator), dot_.omega, steps_per_period);
}

std::vector<FourierCovector> FloquetSpaceFqme::observable_covectors(const LiouvilleSpace& space) const {
  const Index s = space.size();
  const Index blocks = 2 * N_ + 1;
  std::vector<MatrixXc> counted{dot_.basis.total_number()};
  for (const auto& g : dot_.species) counted.push_back(dot_.basis.number_of(g));
  // Harmonic m of the projection reads coefficient rho^(m).
  auto placed = [&](const RowVectorXc& c, int n) {
    RowVectorXc out = RowVectorXc::Zero(blocks * s);
    out.segment(Index(n + N_) * s, s) = c;
    return out;
  };
  std::vector<FourierCovector> obs(counted.size());
  for (std::size_t c = 0; c < counted.size(); ++c)
    for (int m = -N_; m <= N_; ++m) obs[c].components[m] = placed(space.trace_with(counted[c]), m);
  std::vector<std::vector<FourierCovector>> per_lead(dot_.leads.size(), std::vector<FourierCovector>(counted.size()));
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) {
    for (int k = -generator_harmonics(); k <= generator_harmonics(); ++k) {
      const MatrixXc S = space.superoperator(component_terms(k, int(l), false));
      for (std::size_t c = 0; c < counted.size(); ++c) {
        const RowVectorXc row = space.trace_with(counted[c]) * S;
        for (int n = -N_; n <= N_; ++n) {
          auto [it, fresh] = per_lead[l][c].components.try_emplace(k + n, RowVectorXc::Zero(blocks * s));
          it->second.segment(Index(n + N_) * s, s) += row;
        }
      }
    }
  }
  for (std::size_t l = 0; l < dot_.leads.size(); ++l) obs.push_back(per_lead[l][0]);
  for (std::size_t l = 0; l < dot_.leads.size(); ++l)
    for (std::size_t c = 1; c < counted.size(); ++c) obs.push_back(per_lead[l][c]);
  return obs;
}

FloquetSpaceFqme::FourierState FloquetSpaceFqme::empty_state() const {
  MatrixXc rho = MatrixXc::Zero(physical_dim(), physical_dim());
  rho(0, 0) = 1.0;
  return lift(rho);
}

QmeSteadyState FloquetSpaceFqme::steady_state(const QmeSettings& settings, const MatrixXc& initial_physical) const {
  const LiouvilleSpace space = liouville_space();
  const PeriodicLinearFlow f = flow(space, settings.steps_per_period);
  const SteadyAverages s = evolve_to_steady(f, vectorize(space, lift(initial_physical)), observable_covectors(space),
                                            {settings.steps_per_period, settings.steady_tol, settings.max_periods});
  return {unflatten(s.values, dot_.leads.size(), dot_.species.size()), s.periods, s.converged, s.residual_history};
}

QmeSteadyState FloquetSpaceFqme::steady_state(const QmeSettings& settings) const {
  MatrixXc rho = MatrixXc::Zero(physical_dim(), physical_dim());
  rho(0, 0) = 1.0;
  return steady_state(settings, rho);
}

}  // namespace floquet
