#include <doctest.h>

#include <random>

#include "gns/numkernel.hpp"
#include "gns/statistics.hpp"
#include "oracles.hpp"

using namespace gns;

TEST_CASE("eigensystem of diag(3,1) and sigma_x") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Eigensystem es = hermitian_eigensystem(d);
  CHECK(es.values(0) == doctest::Approx(1.0));
  CHECK(es.values(1) == doctest::Approx(3.0));
  CHECK(std::abs(es.vectors(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(es.vectors(0, 1) - 1.0) < 1e-14);

  const Eigensystem sx = hermitian_eigensystem(oracle::sigma(1));
  CHECK(sx.values(0) == doctest::Approx(-1.0));
  CHECK(sx.values(1) == doctest::Approx(1.0));
}

TEST_CASE("gram matrix of the half-half two-level state") {
  // G_(ij),(kl) = omega(e_ij^dag e_kl); only the diagonal survives.
  const oracle::Mat rho = oracle::m2_density(0.5);
  ComplexMatrix g(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto ea = oracle::unit(2, a / 2, a % 2), eb = oracle::unit(2, b / 2, b % 2);
      g(a, b) = (rho * ea.adjoint() * eb).trace();
    }
  const Eigensystem es = hermitian_eigensystem(g);
  for (int i = 0; i < 4; ++i) CHECK(es.values(i) == doctest::Approx(0.5));
}

TEST_CASE("eigensystem rejects bad input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigensystem(m), Error);
  try {
    hermitian_eigensystem(m);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitian);
  }
  try {
    hermitian_eigensystem(ComplexMatrix::Zero(2, 3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("eigensystem reconstructs random hermitian matrices and is deterministic") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mat h = oracle::random_hermitian(2 + trial % 7, gen);
    const Eigensystem es = hermitian_eigensystem(h);
    const ComplexMatrix back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK(oracle::max_abs(back - h) <= 1e-9 * oracle::max_abs(h));
    CHECK(oracle::max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(h.rows(), h.rows())) < 1e-10);
    for (Index i = 1; i < es.values.size(); ++i) CHECK(es.values(i) >= es.values(i - 1));
    const Eigensystem again = hermitian_eigensystem(h);
    CHECK(oracle::max_abs(again.vectors - es.vectors) == 0.0);
  }
}

TEST_CASE("kernel_basis examples") {
  CHECK(kernel_basis(ComplexMatrix::Identity(3, 3)).cols() == 0);
  const ComplexMatrix z = kernel_basis(ComplexMatrix::Zero(2, 2));
  CHECK(z.cols() == 2);
  CHECK(oracle::max_abs(z.adjoint() * z - ComplexMatrix::Identity(2, 2)) < 1e-12);

  // Gram matrix of omega(a) = a_22 over e11, e12, e21, e22.
  const oracle::Mat rho = oracle::m2_density(0.0);
  ComplexMatrix g(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      g(a, b) = (rho * oracle::unit(2, a / 2, a % 2).adjoint() * oracle::unit(2, b / 2, b % 2)).trace();
  const ComplexMatrix k = kernel_basis(g);
  CHECK(k.cols() == 2);
  CHECK(oracle::max_abs(g * k) < 1e-12);
}

TEST_CASE("kernel and rank are complementary") {
  std::mt19937 gen(11);
  for (int r = 0; r <= 5; ++r) {
    ComplexMatrix m = ComplexMatrix::Zero(5, 5);
    for (int i = 0; i < r; ++i) m += oracle::gaussian_vector(5, gen) * oracle::gaussian_vector(5, gen).adjoint();
    CHECK(numerical_rank(m) == r);
    CHECK(kernel_basis(m).cols() + numerical_rank(m) == 5);
  }
}

TEST_CASE("orthonormalize examples") {
  ComplexVector a(2), b(2);
  a << 1.0, 0.0;
  b << 2.0, 0.0;
  const std::vector<ComplexMatrix> in{a, b};
  const auto out = orthonormalize(in);
  REQUIRE(out.size() == 1);
  CHECK(std::abs(out[0](0) - 1.0) < 1e-14);

  const std::vector<ComplexMatrix> diag{matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
  const auto kept = orthonormalize(diag);
  REQUIRE(kept.size() == 2);
  CHECK(oracle::max_abs(kept[0] - diag[0]) < 1e-14);
  CHECK(oracle::max_abs(kept[1] - diag[1]) < 1e-14);
}

TEST_CASE("orthonormalize the two-fermion products and stays idempotent") {
  const ParticleSpace sp = fermi4_space();
  std::vector<ComplexMatrix> spanning{ComplexMatrix::Identity(6, 6)};
  std::vector<ComplexMatrix> gens;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) gens.push_back(coproduct_lie(matrix_unit(4, i, j), sp));
  for (const auto& x : gens) {
    spanning.push_back(x);
    for (const auto& y : gens) spanning.push_back(x * y);
  }
  const auto ortho = orthonormalize(spanning);
  CHECK(ortho.size() == 6);
  for (std::size_t i = 0; i < ortho.size(); ++i)
    for (std::size_t j = 0; j < ortho.size(); ++j)
      CHECK(std::abs(hs_inner(ortho[i], ortho[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  const auto twice = orthonormalize(ortho);
  CHECK(twice.size() == ortho.size());
  // Same span: each original vector is reproduced by projection on the output.
  for (const auto& x : spanning) {
    ComplexMatrix r = x;
    for (const auto& b : twice) r -= hs_inner(b, x) * b;
    CHECK(r.norm() < 1e-10 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("seeded gaussian is reproducible and unitary helper is unitary") {
  SeededGaussian a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  const ComplexMatrix u = a.unitary(4);
  CHECK(oracle::max_abs(u.adjoint() * u - ComplexMatrix::Identity(4, 4)) < 1e-12);
  const ComplexMatrix h = b.hermitian(3);
  CHECK(is_hermitian(h));
}

TEST_CASE("unitary_from_hamiltonian matches the matrix exponential of sigma_x") {
  const double t = 0.37;
  const ComplexMatrix u = unitary_from_hamiltonian(oracle::sigma(1), t);
  oracle::Mat expect = std::cos(t) * oracle::sigma(0) + oracle::C(0, std::sin(t)) * oracle::sigma(1);
  CHECK(oracle::max_abs(u - expect) < 1e-14);
}
