#include <cmath>

#include <doctest.h>

#include "floquet/qme.hpp"
#include "floquet_oracle/oracle.hpp"

using namespace floquet;

namespace {

std::vector<LeadSpec> two_leads(double mu_L, double gamma = 0.0025) {
  return {LeadSpec::uniform(2, gamma, mu_L, 0.0036), LeadSpec::uniform(2, gamma, -0.4, 0.0036)};
}

QmeSettings settings() { return {2000, 1e-9, 5000}; }

}  // namespace

TEST_CASE("undriven master equations reproduce Pauli rates") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.0, 0.2);
  for (double mu : {-0.1, 0.05, 0.2}) {
    const OpenDot dot = make_spinless_dot(H, two_leads(mu));
    const auto pauli = floquet_oracle::pauli_steady({-0.1, 0.1}, {{0.0025, 0.0025}, {0.0025, 0.0025}}, {mu, -0.4},
                                                    {0.0036, 0.0036});
    const double n = pauli.occupation[0] + pauli.occupation[1];
    const QmeSteadyState hs = HilbertSpaceFqme(dot, 2).steady_state(settings());
    const QmeSteadyState fs = FloquetSpaceFqme(dot, 2).steady_state(settings());
    CHECK(hs.converged);
    CHECK(fs.converged);
    CHECK(std::abs(hs.average.n - n) < 1e-6);
    CHECK(std::abs(fs.average.n - n) < 1e-6);
    CHECK(std::abs(hs.average.current[0] - pauli.total_current[0]) < 1e-6);
    CHECK(std::abs(fs.average.current[1] - pauli.total_current[1]) < 1e-6);
  }
}

TEST_CASE("driven HS and FS steady states coincide and conserve current") {
  const OpenDot dot = make_spinless_dot(build_cosine_model(-0.1, 0.1, 0.1, 0.2), two_leads(0.0));
  const QmeSteadyState hs = HilbertSpaceFqme(dot, 3).steady_state(settings());
  const QmeSteadyState fs = FloquetSpaceFqme(dot, 3).steady_state(settings());
  CHECK(std::abs(hs.average.n - fs.average.n) < 1e-8);
  CHECK(std::abs(hs.average.current[0] - fs.average.current[0]) < 1e-8);
  CHECK(std::abs(hs.average.current[0] + hs.average.current[1]) < 1e-8);
}

TEST_CASE("HS right-hand side preserves trace and hermiticity") {
  const OpenDot dot = make_spinless_dot(build_cosine_model(-0.1, 0.1, 0.1, 0.2), two_leads(0.05));
  const HilbertSpaceFqme q(dot, 3);
  MatrixXc rho = MatrixXc::Zero(4, 4);
  rho.diagonal() << 0.4, 0.3, 0.2, 0.1;
  rho(1, 2) = cplx(0.05, 0.02);
  rho(2, 1) = std::conj(rho(1, 2));
  for (double t : {0.0, 3.0, 17.0}) {
    const MatrixXc d = q.rhs(rho, t);
    CHECK(std::abs(d.trace()) < 1e-14);
    CHECK((d - d.adjoint()).norm() < 1e-14);
    CHECK((q.hamiltonian(t) - q.hamiltonian(t + q.period())).norm() < 1e-12);
  }
}

TEST_CASE("uncoupled dot follows the exact unitary evolution") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const OpenDot dot = make_spinless_dot(H, two_leads(0.0, 0.0));
  const HilbertSpaceFqme q(dot, 3);
  const LiouvilleSpace space = q.liouville_space();
  const PeriodicLinearFlow flow = q.flow(space, 2000);
  MatrixXc rho0 = MatrixXc::Zero(4, 4);
  rho0(1, 1) = 1.0;  // electron on level 1
  const VectorXc v = flow.period_map() * space.vectorize(rho0);
  const FockBasis& basis = dot.basis;
  const MatrixXc exact = floquet_oracle::propagate_density(
      [&](double t) {
        MatrixXc h = MatrixXc::Zero(4, 4);
        for (const auto& [n, b] : many_body_hamiltonian(basis, H)) h += b * std::exp(cplx(0, -n * 0.2 * t));
        return h;
      },
      rho0, q.period(), 20000);
  CHECK((space.matrix(v) - exact).norm() < 1e-8);
}

TEST_CASE("FS lift and projection") {
  const OpenDot dot = make_spinless_dot(build_cosine_model(-0.1, 0.1, 0.1, 0.2), two_leads(0.0));
  const FloquetSpaceFqme q(dot, 2);
  MatrixXc rho = MatrixXc::Zero(4, 4);
  rho(0, 0) = 0.25;
  rho(3, 3) = 0.75;
  const auto state = q.lift(rho);
  CHECK(state.size() == 5);
  CHECK((q.project(state, 1.234) - rho).norm() < 1e-15);
  const MatrixXc F = q.floquet_density(state);
  CHECK(F.rows() == 20);
  CHECK(std::abs(F.trace() - 5.0) < 1e-14);
  const QmeObservables o = q.observe(state, 0.0);
  CHECK(o.n == doctest::Approx(1.5));
}

TEST_CASE("spinful dot with equal drives is spin symmetric") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const OpenDot dot = make_spinful_dot(H, H, HubbardSpec{{0.1, 0.1}}, two_leads(0.05, 0.005));
  const QmeSteadyState s = HilbertSpaceFqme(dot, 2).steady_state({2000, 1e-8, 5000});
  CHECK(s.converged);
  CHECK(s.average.n_species.size() == 2);
  CHECK(std::abs(s.average.n_species[0] - s.average.n_species[1]) < 1e-10);
  CHECK(std::abs(s.average.current_species[0][0] - s.average.current_species[0][1]) < 1e-10);
}

TEST_CASE("observable flattening round-trips") {
  QmeObservables o;
  o.n = 1.0;
  o.n_species = {0.4, 0.6};
  o.current = {0.1, -0.1};
  o.current_species = {{0.03, 0.07}, {-0.03, -0.07}};
  const QmeObservables back = unflatten(flatten(o), 2, 2);
  CHECK(back.n == o.n);
  CHECK(back.current_species[1][1] == o.current_species[1][1]);
}
