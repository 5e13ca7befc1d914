#include <cmath>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "floquet/liouville.hpp"
#include "floquet/rk4.hpp"

using namespace floquet;

TEST_CASE("RK4 is fourth order") {
  auto rhs = [](const VectorXd& y, double t) -> VectorXd { return VectorXd::Constant(1, std::cos(t)) - 0.5 * y; };
  auto error = [&](int steps) {
    const auto traj = rk4_evolve(rhs, VectorXd(VectorXd::Constant(1, 1.0)), 0.0, 2.0 / steps, steps);
    // y' = cos t - y/2, y(0) = 1
    const double t = 2.0;
    const double exact = (0.5 * std::cos(t) + std::sin(t)) / 1.25 + (1.0 - 0.4) * std::exp(-0.5 * t);
    return std::abs(traj.back()(0) - exact);
  };
  const double ratio = error(20) / error(40);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
  CHECK_THROWS(rk4_evolve(rhs, VectorXd(VectorXd::Constant(1, 1.0)), 0.0, 0.0, 3));
}

TEST_CASE("Liouville space keeps label-matched elements and round-trips") {
  const LiouvilleSpace space({0, 1, 1, 2});
  CHECK(space.dim() == 4);
  CHECK(space.size() == 6);  // 1 + 4 + 1
  MatrixXc rho = MatrixXc::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(1, 2) = cplx(0.1, 0.2);
  rho(2, 1) = cplx(0.1, -0.2);
  rho(3, 3) = 0.5;
  CHECK((space.matrix(space.vectorize(rho)) - rho).norm() < 1e-16);
  MatrixXc op = MatrixXc::Random(4, 4);
  CHECK(std::abs((space.trace_with(op) * space.vectorize(rho))(0) - (op * rho).trace()) < 1e-14);

  MatrixXc a = MatrixXc::Random(4, 4), b = MatrixXc::Random(4, 4);
  CHECK_THROWS(space.check_closed({{a, b}}));
  MatrixXc n = MatrixXc::Zero(4, 4);
  n.diagonal() << 0, 1, 1, 2;
  CHECK_NOTHROW(space.check_closed({{n, MatrixXc::Identity(4, 4)}}));
  const std::vector<Sandwich> terms{{n, MatrixXc::Identity(4, 4)}, {MatrixXc::Identity(4, 4), n}};
  CHECK((space.matrix(space.superoperator(terms) * space.vectorize(rho)) - apply_terms(terms, rho)).norm() < 1e-14);
}

TEST_CASE("autonomous flow: period map approaches the exponential with fourth-order error") {
  const double omega = 1.3;
  MatrixXc L(2, 2);
  L << cplx(-0.2, 0.5), 0.1, cplx(0.0, 0.3), cplx(-0.05, -0.4);
  auto err = [&](int steps) {
    const PeriodicLinearFlow flow({{0, L}}, omega, steps);
    CHECK(flow.autonomous());
    return (flow.period_map() - MatrixXc(L * flow.period()).exp()).norm();
  };
  const double ratio = err(40) / err(80);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("periodic flow: period map equals explicit stepping and trajectories sample observables") {
  const double omega = 0.7;
  MatrixXc L0(2, 2), L1(2, 2);
  L0 << -0.3, 0.2, 0.1, -0.1;
  L1 << 0.0, cplx(0.05, 0.02), cplx(0.01, 0.0), 0.0;
  const PeriodicLinearFlow flow({{0, L0}, {1, L1}, {-1, L1.conjugate()}}, omega, 64);
  CHECK(!flow.autonomous());
  MatrixXc product = MatrixXc::Identity(2, 2);
  for (int j = 0; j < flow.steps(); ++j) product = flow.step_map(j) * product;
  CHECK((product - flow.period_map()).norm() < 1e-13);

  VectorXc v0(2);
  v0 << 1.0, 0.0;
  RowVectorXc c(2);
  c << 1.0, 1.0;
  const FourierCovector obs{{{0, c}}};
  const Trajectory tr = sample_trajectory(flow, v0, {obs}, 2, 16);
  CHECK(tr.times.size() == 9);
  const VectorXc after = flow.period_map() * v0;
  CHECK(tr.values[4][0] == doctest::Approx((c * after)(0).real()).epsilon(1e-12));
  CHECK(obs.value(0.0, omega, v0) == doctest::Approx(1.0));
}

TEST_CASE("steady evolution converges for a contracting flow") {
  MatrixXc L(2, 2);
  L << -0.5, 0.5, 0.5, -0.5;  // population exchange, stationary (1/2, 1/2)
  const PeriodicLinearFlow flow({{0, L}}, 1.0, 200);
  VectorXc v(2);
  v << 1.0, 0.0;
  RowVectorXc first(2);
  first << 1.0, 0.0;
  const SteadyAverages s = evolve_to_steady(flow, v, {FourierCovector{{{0, first}}}}, {200, 1e-10, 1000});
  CHECK(s.converged);
  CHECK(s.values[0] == doctest::Approx(0.5).epsilon(1e-9));
}
