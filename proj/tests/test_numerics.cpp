#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/numerics.hpp"

using namespace qwalk;
using namespace qwalk::numerics;

namespace {

ComplexMatrix three_site_chain() {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = h(1, 0) = h(1, 2) = h(2, 1) = -1.0;
  return h;
}

double reconstruction_error(const ComplexMatrix& h, const EigenSystem& es) {
  const ComplexMatrix back = es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
  return max_abs(back - h);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("pauli y spectrum") {
  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const auto es = hermitian_eigendecompose(y);
  CHECK(es.values(0).real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.values(1).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("one by one matrix") {
  ComplexMatrix h(1, 1);
  h << 3.0;
  const auto es = hermitian_eigendecompose(h);
  CHECK(es.values(0).real() == 3.0);
  CHECK(std::abs(std::abs(es.vectors(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("three site chain matches cubic roots") {
  // det(H - x) for off-diagonals -1 and zero diagonal is -(x^3 - 2x).
  const auto roots = oracle::cubic_roots(0.0, -2.0, 0.0, -3.0, 3.0);
  REQUIRE(roots.size() == 3);
  const auto es = hermitian_eigendecompose(three_site_chain());
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(es.values(i).real() - roots[i]) < 1e-12);
    CHECK(std::abs(es.values(i).imag()) < 1e-10);
  }
  CHECK(std::abs(roots[0] + std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(roots[1]) < 1e-12);
}

TEST_CASE("hermitian errors") {
  ComplexMatrix bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(hermitian_eigendecompose(bad), Error);
  try {
    hermitian_eigendecompose(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
  try {
    hermitian_eigendecompose(ComplexMatrix::Zero(2, 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Nonsquare);
  }
  // Just above the tolerance.
  ComplexMatrix almost = ComplexMatrix::Identity(2, 2);
  almost(0, 1) = 2e-12;
  CHECK_THROWS_AS(hermitian_eigendecompose(almost), Error);
  almost(0, 1) = 5e-13;
  CHECK_NOTHROW(hermitian_eigendecompose(almost));
}

TEST_CASE("unitary phases of simple matrices") {
  const auto id = unitary_eigendecompose(ComplexMatrix::Identity(4, 4));
  for (double p : eigenphases(id)) CHECK(p == 0.0);

  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0, 1);
  d(2, 2) = -1.0;
  d(3, 3) = Complex(0, -1);
  const auto phases = eigenphases(unitary_eigendecompose(d));
  REQUIRE(phases.size() == 4);
  CHECK(phases[0] == doctest::Approx(-kPi / 2));
  CHECK(phases[1] == doctest::Approx(0.0));
  CHECK(phases[2] == doctest::Approx(kPi / 2));
  CHECK(phases[3] == doctest::Approx(kPi));  // -1 maps to +pi
}

TEST_CASE("unitary errors") {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(0, 0) = 1.0 + 1e-9;
  try {
    unitary_eigendecompose(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnitary);
  }
  CHECK_THROWS_AS(unitary_eigendecompose(ComplexMatrix::Zero(3, 2)), Error);
}

TEST_CASE("principal phase convention") {
  CHECK(principal_phase(-kPi) == doctest::Approx(kPi));
  CHECK(principal_phase(kPi) == doctest::Approx(kPi));
  CHECK(principal_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(principal_phase(0.25) == 0.25);
  CHECK(circular_distance(kPi - 0.1, -kPi + 0.1) == doctest::Approx(0.2));
}

TEST_CASE("matrix exponential examples") {
  CHECK(max_abs(evolution_operator(ComplexMatrix::Zero(3, 3), 7.3) - ComplexMatrix::Identity(3, 3)) < 1e-15);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(max_abs(evolution_operator(x, kPi) + ComplexMatrix::Identity(2, 2)) < 1e-14);
  const ComplexMatrix h = three_site_chain();
  for (double t : {0.01, 0.1, 0.3}) {
    CHECK(max_abs(evolution_operator(h, t) - oracle::taylor_expm(h, t)) < 1e-10);
  }
}

TEST_CASE("exponential agrees with taylor oracle on random hermitian matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial * 3;
    const ComplexMatrix h = oracle::random_hermitian(n, rng);
    const double t = 0.1 + 0.4 * trial;
    CHECK(max_abs(evolution_operator(h, t) - oracle::taylor_expm(h, t)) < 1e-9);
  }
}

TEST_CASE("exponential is unitary") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = oracle::random_hermitian(5 + trial * 6, rng, 3.0);
    CHECK(unitarity_residual(evolution_operator(h, 17.0 * (trial + 1))) < 1e-10);
  }
}

TEST_CASE("hermitian reconstruction and eigen residuals") {
  std::mt19937 rng(3);
  for (int n : {1, 2, 7, 33, 128, 256}) {
    const ComplexMatrix h = oracle::random_hermitian(n, rng);
    const auto es = hermitian_eigendecompose(h);
    CHECK(reconstruction_error(h, es) < 1e-8);
    CHECK(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(n, n)) < 1e-8);
    for (Eigen::Index i = 0; i < es.size(); ++i) {
      CHECK(std::abs(es.values(i).imag()) < 1e-10);
      if (i > 0) CHECK(es.values(i).real() >= es.values(i - 1).real());
      const double r = (h * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).cwiseAbs().maxCoeff();
      CHECK(r < 1e-8);
    }
  }
}

TEST_CASE("unitary eigenvalues match inverse iteration") {
  std::mt19937 rng(5);
  // Random unitary with a forced degenerate pair.
  const ComplexMatrix h = oracle::random_hermitian(12, rng);
  ComplexMatrix u = evolution_operator(h, 1.0);
  const auto es = unitary_eigendecompose(u);
  CHECK(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(12, 12)) < 1e-8);
  for (Eigen::Index i = 0; i < es.size(); ++i) {
    CHECK(std::abs(std::abs(es.values(i)) - 1.0) < 1e-10);
    CHECK((u * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).cwiseAbs().maxCoeff() < 1e-8);
  }
  const auto found = oracle::inverse_iteration_spectrum(u);
  CHECK(found.size() == 12);
  for (const auto& z : found) {
    double best = 10.0;
    for (Eigen::Index i = 0; i < es.size(); ++i) best = std::min(best, std::abs(es.values(i) - z));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("degenerate unitary keeps orthonormal eigenvectors") {
  std::mt19937 rng(9);
  const ComplexMatrix q = evolution_operator(oracle::random_hermitian(6, rng), 1.0);
  Eigen::VectorXcd d(6);
  d << 1.0, 1.0, Complex(0, 1), Complex(0, 1), Complex(0, 1), -1.0;
  const ComplexMatrix u = q * d.asDiagonal() * q.adjoint();
  const auto es = unitary_eigendecompose(u);
  CHECK(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(6, 6)) < 1e-8);
  const auto phases = eigenphases(es);
  CHECK(phases[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(phases[2] == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(phases[5] == doctest::Approx(kPi).epsilon(1e-10));
}

TEST_CASE("phase sorting is deterministic") {
  std::mt19937 rng(21);
  const ComplexMatrix u = evolution_operator(oracle::random_hermitian(40, rng), 2.0);
  const auto a = eigenphases(unitary_eigendecompose(u));
  const auto b = eigenphases(unitary_eigendecompose(ComplexMatrix(u)));
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("propagator matches one-shot exponential") {
  std::mt19937 rng(4);
  const ComplexMatrix h = oracle::random_hermitian(9, rng);
  const HermitianPropagator prop(h);
  const auto psi = oracle::random_state(9, rng);
  for (double t : {0.0, 0.5, 3.0}) {
    CHECK((prop.evolve(psi, t) - evolution_operator(h, t) * psi).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(prop.evolve(Eigen::VectorXcd::Zero(4), 1.0), Error);
}

}  // TEST_SUITE
