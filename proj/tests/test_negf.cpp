#include <cmath>

#include <doctest.h>

#include "floquet/negf.hpp"
#include "floquet_oracle/oracle.hpp"

using namespace floquet;

namespace {

std::vector<LeadSpec> two_leads(double mu_L, double mu_R = -0.4, double gamma = 0.0025, double kT = 0.0036) {
  return {LeadSpec::uniform(2, gamma, mu_L, kT), LeadSpec::uniform(2, gamma, mu_R, kT)};
}

}  // namespace

TEST_CASE("undriven V-like and M-like averages match static Landauer") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.0, 0.2);
  for (double mu : {-0.12, 0.0, 0.11}) {
    const auto leads = two_leads(mu);
    MatrixXc h = H.block(0);
    const auto exact = floquet_oracle::landauer_static(
        h, {{leads[0].gamma, leads[0].mu, leads[0].kT}, {leads[1].gamma, leads[1].mu, leads[1].kT}});
    const double step = default_energy_step(leads, 0.2);
    FloquetResolvent problem(H, leads, 3);
    const TransportResult v = transport_vlike(problem, vlike_window(leads, 3, 0.2, step));
    const TransportResult m = transport_mlike(problem, QuasiEnergyGrid::bounded(0.2, step));
    CHECK(v.n_avg == doctest::Approx(exact.n).epsilon(1e-8));
    CHECK(m.n_avg == doctest::Approx(exact.n).epsilon(1e-8));
    CHECK(v.current[0] == doctest::Approx(exact.current[0]).epsilon(1e-8));
    CHECK(m.current[0] == doctest::Approx(exact.current[0]).epsilon(1e-8));
  }
}

TEST_CASE("driven V-like and M-like averages agree and M-like conserves current") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  for (double mu : {-0.05, 0.1}) {
    const auto leads = two_leads(mu);
    const double step = default_energy_step(leads, 0.2);
    double previous = INFINITY;
    for (int N : {3, 4, 6}) {
      FloquetResolvent problem(H, leads, N);
      const TransportResult v = transport_vlike(problem, vlike_window(leads, N, 0.2, step));
      const TransportResult m = transport_mlike(problem, QuasiEnergyGrid::bounded(0.2, step));
      CHECK(std::abs(v.current[0] - m.current[0]) < 1e-7);
      CHECK(std::abs(m.current[0] + m.current[1]) < 1e-10 * std::abs(m.current[0]));
      // The M-like occupation approaches the V-like one as sidebands are added.
      const double gap = std::abs(v.n_avg - m.n_avg);
      CHECK(gap < 1e-4);
      CHECK(gap < previous);
      previous = gap;
    }
  }
}

TEST_CASE("M-like warns when a Fermi edge reaches the lower end of the sideband strip") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.0, 0.2);
  const auto leads = two_leads(0.0, -0.4);
  const QuasiEnergyGrid grid = QuasiEnergyGrid::bounded(0.2, 0.001);
  CHECK(transport_mlike(FloquetResolvent(H, leads, 2), grid).warnings.size() == 1);
  CHECK(transport_mlike(FloquetResolvent(H, leads, 3), grid).warnings.empty());
}

TEST_CASE("retarded Floquet function satisfies the sideband shift identity") {
  // G_{m+1,n+1}(E) = G_{mn}(E + w) away from the truncation edge.
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const auto leads = two_leads(0.0);
  FloquetResolvent problem(H, leads, 8);
  const double E = 0.037;
  const FloquetMatrixXc G = problem.retarded(E), Gs = problem.retarded(E + 0.2);
  CHECK((G.block(1, 1) - Gs.block(0, 0)).norm() < 1e-8 * G.block(1, 1).norm());
  CHECK((G.block(1, 0) - Gs.block(0, -1)).norm() < 1e-8 * G.block(0, 0).norm());
}

TEST_CASE("V-like column matches the central column of the full resolvent") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  const auto leads = two_leads(0.05);
  const int N = 3;
  const VLikeGreen g = solve_vlike(H, leads, N, 0.013);
  const FloquetMatrixXc G = solve_mlike(H, leads, N, 0.013);
  for (int n = -N; n <= N; ++n) CHECK((g[n] - G.block(n, 0)).norm() < 1e-10);
}

TEST_CASE("sideband transmission of the undriven dot is diagonal and equals the static formula") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.0, 0.2);
  const auto leads = two_leads(0.0);
  FloquetResolvent problem(H, leads, 2);
  const double E = -0.098;
  const MatrixXd T = sideband_transmission(problem, E);
  CHECK(T.rows() == 5);
  CHECK(T(1, 2) == doctest::Approx(0.0));
  const double g = 0.0025;
  auto level = [&](double eps) { return g * g / ((E - eps) * (E - eps) + g * g); };  // total width 2g
  CHECK(T(2, 2) == doctest::Approx(level(-0.1) + level(0.1)).epsilon(1e-10));
}

TEST_CASE("driven transmission is non-negative and sums over sidebands") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.1, 0.2);
  FloquetResolvent problem(H, two_leads(0.0), 3);
  const MatrixXd T = sideband_transmission(problem, 0.05);
  CHECK(T.minCoeff() >= -1e-15);
  CHECK(transmission(problem, 0.05) == doctest::Approx(T.sum()));
}
