#include <cmath>

#include <doctest.h>

#include "floquet/model.hpp"

using namespace floquet;

TEST_CASE("fermi: limits and symmetry") {
  CHECK(fermi(0.0, 0.0, 0.01) == doctest::Approx(0.5));
  CHECK(fermi(10.0, 0.0, 0.01) == 0.0);
  CHECK(fermi(-10.0, 0.0, 0.01) == 1.0);
  CHECK(fermi(0.03, 0.0, 0.01) + fermi(-0.03, 0.0, 0.01) == doctest::Approx(1.0));
}

TEST_CASE("cosine model: static diagonal and symmetric off-diagonal harmonics") {
  const auto H = build_cosine_model(-0.1, 0.1, 0.2, 0.3);
  CHECK(H.dim() == 2);
  CHECK(H.cutoff() == 1);
  CHECK(H.block(0)(0, 0).real() == doctest::Approx(-0.1));
  CHECK(H.block(0)(1, 1).real() == doctest::Approx(0.1));
  CHECK((H.block(1) - H.block(-1).adjoint()).norm() < 1e-15);
  for (double t : {0.0, 1.3, 7.7}) {
    const MatrixXc h = hamiltonian_at_time(H, t);
    CHECK((h - h.adjoint()).norm() < 1e-14);
    CHECK(h(0, 1).real() == doctest::Approx(0.2 * std::cos(0.3 * t)));
  }
}

TEST_CASE("circular model and its conjugate") {
  const auto H = build_circular_model(-0.1, 0.1, 0.05, 0.2, +1);
  const auto C = conjugate_drive(H);
  for (double t : {0.0, 2.0, 11.0}) {
    const MatrixXc h = hamiltonian_at_time(H, t);
    CHECK(std::abs(h(0, 1) - 0.05 * std::exp(cplx(0.0, 0.2 * t))) < 1e-14);
    CHECK((hamiltonian_at_time(C, t) - h.conjugate()).norm() < 1e-14);
  }
  const auto M = build_circular_model(-0.1, 0.1, 0.05, 0.2, -1);
  CHECK((hamiltonian_at_time(M, 1.7) - hamiltonian_at_time(C, 1.7)).norm() < 1e-14);
}

TEST_CASE("lead and Hubbard validation") {
  CHECK_NOTHROW(LeadSpec::uniform(2, 0.01, 0.0, 0.01).validate());
  CHECK_THROWS(LeadSpec::uniform(2, -0.01, 0.0, 0.01).validate());
  CHECK_THROWS(LeadSpec::uniform(2, 0.01, 0.0, 0.0).validate());
  CHECK_THROWS(OneBodyFourierHamiltonian(0.2, {{0, MatrixXc::Identity(2, 2)}, {1, MatrixXc::Identity(3, 3)}}));
}
