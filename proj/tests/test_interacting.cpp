#include <doctest.h>

#include "floquet/negf.hpp"
#include "floquet/negf_interacting.hpp"

using namespace floquet;

namespace {

std::vector<LeadSpec> two_leads(double mu_L, double mu_R = -0.4) {
  return {LeadSpec::uniform(2, 0.005, mu_L, 0.0036), LeadSpec::uniform(2, 0.005, mu_R, 0.0036)};
}

}  // namespace

TEST_CASE("u = 0 reduces to twice the non-interacting spinless result") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const auto leads = two_leads(0.07);
  const int N = 3;
  const QuasiEnergyGrid grid = QuasiEnergyGrid::bounded(0.2, 0.00025);
  const SpinResolvedResult r = interacting_transport(H, H, leads, HubbardSpec{{0.0, 0.0}}, N, grid, {});
  FloquetResolvent problem(H, leads, N);
  const TransportResult single = transport_mlike(problem, grid);
  CHECK(r.n_total == doctest::Approx(2.0 * single.n_avg).epsilon(1e-8));
  CHECK(r.current_total[0] == doctest::Approx(2.0 * single.current[0]).epsilon(1e-8));
}

TEST_CASE("static interacting function at u = 0 is the bare retarded function") {
  MatrixXc h = MatrixXc::Zero(2, 2);
  h(0, 0) = -0.1;
  h(1, 1) = 0.1;
  const auto leads = two_leads(0.0);
  const VectorXd u = VectorXd::Zero(2), opposite = VectorXd::Constant(2, 0.5);
  const InteractingGreen g = solve_interacting_static(h, leads, u, opposite, 0.02);
  const MatrixXc bare = (0.02 * MatrixXc::Identity(2, 2) - h + cplx(0, 0.005) * MatrixXc::Identity(2, 2)).inverse();
  CHECK((g.retarded - bare).norm() < 1e-12 * bare.norm());
}

TEST_CASE("spin symmetry for equal drives and the symmetric point") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const QuasiEnergyGrid grid = QuasiEnergyGrid::bounded(0.2, 0.0005);
  const SpinResolvedResult r = interacting_transport(H, H, two_leads(0.1), HubbardSpec{{0.3, 0.3}}, 2, grid, {});
  CHECK(std::abs(r.n[0] - r.n[1]) < 1e-10);
  CHECK(std::abs(r.current[0][0] - r.current[1][0]) < 1e-10);

  // Particle-hole symmetric level at equilibrium: eps = -u/2 gives half filling per spin.
  const auto S = build_cosine_model(-0.15, -0.15, 0.0, 0.2);
  InteractingConfig sc;
  sc.mode = OccupationMode::self_consistent;
  const SpinResolvedResult half =
      self_consistent_occupations(S, S, two_leads(0.0, 0.0), HubbardSpec{{0.3, 0.3}}, 1, grid, sc);
  CHECK(half.converged);
  for (int sp = 0; sp < 2; ++sp)
    for (Index i = 0; i < 2; ++i) CHECK(half.occupations[std::size_t(sp)](i) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("occupation settings are validated") {
  InteractingConfig c;
  c.mixing = 0.0;
  CHECK_THROWS(c.validate());
  c.mixing = 0.3;
  CHECK_NOTHROW(c.validate());
}
