#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gns/qdeform.hpp"
#include "oracles.hpp"

using namespace gns;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix comm(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("q-number examples and errors") {
  for (double q : {0.2, 1.0, 3.0}) {
    CHECK(std::abs(q_number(1, q) - 1.0) < 1e-15);
    CHECK(std::abs(q_number(0, q)) < 1e-15);
  }
  CHECK(std::abs(q_number(2, 4.0) - 2.5) < 1e-14);
  CHECK(std::abs(q_number(3.5, 1.0) - 3.5) < 1e-15);
  for (double bad : {0.0, -1.0, std::nan("")}) {
    try {
      q_number(2, bad);
      FAIL("expected NonPositiveQ");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveQ);
    }
  }
  CHECK(std::abs(q_factorial(0, 2.0) - 1.0) < 1e-15);
  CHECK(std::abs(q_factorial(3, 2.0) - q_number(3, 2.0) * q_number(2, 2.0)) < 1e-13);
}

TEST_CASE("q-number agrees with the direct formula, addition rule and Jacobi identity") {
  std::mt19937 gen(71);
  std::uniform_real_distribution<double> s_dist(-3.0, 3.0), q_dist(0.2, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double q = q_dist(gen), r = s_dist(gen), s = s_dist(gen), t = s_dist(gen);
    if (std::abs(q - 1.0) > 1e-3) CHECK(std::abs(q_number(s, q) - oracle::q_number(s, q)) < 1e-12);
    const double sum = std::pow(q, -s / 2) * q_number(t, q) + std::pow(q, t / 2) * q_number(s, q);
    CHECK(std::abs(q_number(s + t, q) - sum) < 1e-12);
    const double jacobi = q_number(r, q) * q_number(s - t, q) + q_number(s, q) * q_number(t - r, q) +
                          q_number(t, q) * q_number(r - s, q);
    CHECK(std::abs(jacobi) < 1e-12);
  }
}

TEST_CASE("q-number is continuous at q = 1") {
  for (double s : {-2.0, 0.5, 1.0, 3.0, 7.5}) {
    CHECK(std::abs(q_number(s, 1.0 + 1e-8) - s) <= 1e-6);
    CHECK(std::abs(q_number(s, 1.0 - 1e-8) - s) <= 1e-6);
  }
}

TEST_CASE("single oscillator examples") {
  const QOscillatorSystem one = build_q_oscillators(1, 2, 1.0);
  CHECK(oracle::max_abs(one.A[0] - one.a[0]) < 1e-15);
  for (double q : {0.3, 2.0}) {
    const QOscillatorSystem s = build_q_oscillators(1, 2, q);
    CHECK((s.A[0] * s.vacuum()).norm() < 1e-15);
  }
  const QOscillatorSystem two = build_q_oscillators(2, 2, 2.0);
  CHECK(two.dim() == 9);
  const ComplexMatrix n1 = two.A_dag[0] * two.A[0];
  const std::vector<double> expect{0.0, 1.0, std::sqrt(2.0) + 1.0 / std::sqrt(2.0)};
  for (Index k = 0; k <= 2; ++k) {
    const std::vector<Index> occ{k, 1};
    const ComplexVector v = two.fock_state(occ);
    CHECK(std::abs(v.dot(n1 * v) - expect[static_cast<std::size_t>(k)]) < 1e-12);
    CHECK((n1 * v - expect[static_cast<std::size_t>(k)] * v).norm() < 1e-12);
  }
  try {
    build_q_oscillators(8, 3, 1.0);
    FAIL("expected SizeOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SizeOverflow);
  }
}

TEST_CASE("oscillator relations below the cutoff") {
  for (double q : {0.3, 0.5, 1.0, 2.0, 3.7}) {
    const QOscillatorSystem s = build_q_oscillators(3, 2, q);
    const Index n = s.dim();
    for (Index i = 0; i < s.modes; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const ComplexMatrix below = s.below_cutoff(i);
      CHECK(oracle::max_abs((comm(s.N[k], s.A_dag[k]) - s.A_dag[k]) * below) < 1e-10);
      CHECK(oracle::max_abs(comm(s.N[k], s.A[k]) + s.A[k]) < 1e-10);
      const ComplexMatrix lhs = s.A[k] * s.A_dag[k] - std::sqrt(q) * s.A_dag[k] * s.A[k];
      CHECK(oracle::max_abs((lhs - q_power(s.N[k], q, -0.5)) * below) < 1e-10);
      CHECK(oracle::max_abs(s.A_dag[k] * s.A[k] - q_number_operator(s.N[k], q)) < 1e-10);
      CHECK(oracle::max_abs(s.A_dag[k] - s.A[k].adjoint()) < 1e-15);
      for (Index j = 0; j < s.modes; ++j) {
        if (j == i) continue;
        const std::size_t l = static_cast<std::size_t>(j);
        CHECK(oracle::max_abs(comm(s.A[k], s.A_dag[l])) < 1e-12);
        CHECK(oracle::max_abs(comm(s.A[k], s.A[l])) < 1e-12);
      }
    }
    CHECK(n == 27);
  }
}

TEST_CASE("U_q(su(2)) relations on states within the cutoff") {
  for (double q : {0.3, 1.0, 2.0, 3.7}) {
    const QOscillatorSystem s = build_q_oscillators(2, 2, q);
    const UqSu2 j = uq_su2_generators(s);
    const std::vector<Index> both{0, 1};
    const ComplexMatrix inside = s.total_at_most(both, 2);
    CHECK(oracle::max_abs(comm(j.j3, j.plus) - j.plus) < 1e-10);
    CHECK(oracle::max_abs(comm(j.j3, j.minus) + j.minus) < 1e-10);
    CHECK(oracle::max_abs((comm(j.plus, j.minus) - q_number_operator(2.0 * j.j3, q)) * inside) < 1e-10);
    if (q == 1.0) CHECK(oracle::max_abs((comm(j.plus, j.minus) - 2.0 * j.j3) * inside) < 1e-10);

    // |1,1> = (A1^dag)^2 |0> / sqrt([2]!) is a highest weight; J- acts with sqrt([j+m][j-m+1]).
    const ComplexVector top = s.A_dag[0] * s.A_dag[0] * s.vacuum() / std::sqrt(q_factorial(2, q));
    CHECK(std::abs(top.norm() - 1.0) < 1e-12);
    CHECK((j.plus * top).norm() < 1e-12);
    const std::vector<Index> mid_occ{1, 1}, low_occ{0, 2};
    const ComplexVector mid = s.fock_state(mid_occ), low = s.fock_state(low_occ);
    const double c1 = std::sqrt(q_number(2, q) * q_number(1, q));
    CHECK((j.minus * top - c1 * mid).norm() < 1e-12);
    const double c0 = std::sqrt(q_number(1, q) * q_number(2, q));
    CHECK((j.minus * mid - c0 * low).norm() < 1e-12);
  }
}

TEST_CASE("Cartan-Chevalley generators on three modes") {
  const double q = 2.0;
  const QOscillatorSystem s = build_q_oscillators(3, 2, q);
  const CartanChevalley cc = uq_sun_generators(s);
  REQUIRE(cc.raising.size() == 2);
  const std::vector<Index> all{0, 1, 2};
  const ComplexMatrix inside = s.total_at_most(all, 2);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(oracle::max_abs(comm(cc.cartan[l], cc.raising[l]) - cc.raising[l]) < 1e-10);
    CHECK(oracle::max_abs((comm(cc.raising[l], cc.lowering[l]) - q_number_operator(2.0 * cc.cartan[l], q)) * inside) < 1e-10);
  }
}

TEST_CASE("q-coproduct reduces to the additive one at q = 1") {
  const QOscillatorSystem s = build_q_oscillators(2, 1, 1.0);
  const UqSu2 j = uq_su2_generators(s);
  const ComplexMatrix id = ComplexMatrix::Identity(s.dim(), s.dim());
  CHECK(oracle::max_abs(q_coproduct(UqGenerator::Plus, j, j, 1.0) - (kron(id, j.plus) + kron(j.plus, id))) < 1e-14);
  CHECK(oracle::max_abs(q_coproduct(UqGenerator::J3, j, j, 1.0) - (kron(id, j.j3) + kron(j.j3, id))) < 1e-14);
}

TEST_CASE("q-coproduct lowering of |1,1> picks up q to the minus and plus one quarter") {
  const double q = 2.5;
  const QOscillatorSystem s = build_q_oscillators(2, 1, q);
  const UqSu2 j = uq_su2_generators(s);
  const std::vector<Index> up_occ{1, 0}, down_occ{0, 1};
  const ComplexVector up = s.fock_state(up_occ), down = s.fock_state(down_occ);
  const ComplexVector top = kron(up, up);
  const ComplexVector lowered = q_coproduct(UqGenerator::Minus, j, j, q) * top;
  // J3 = +1/2 on the spectator gives q^{-J3/2} = q^{-1/4}, and q^{+1/4} on the other side.
  const ComplexVector expect = std::pow(q, -0.25) * kron(up, down) + std::pow(q, 0.25) * kron(down, up);
  CHECK((lowered - expect).norm() < 1e-12);
}

TEST_CASE("q-bracket of the coproduct on the two-particle sector") {
  for (double q : {0.4, 1.0, 2.0, 3.7}) {
    const QOscillatorSystem s = build_q_oscillators(2, 2, q);
    const UqSu2 j = uq_su2_generators(s);
    const std::vector<Index> both{0, 1};
    const ComplexMatrix one = s.total_at_most(both, 1) - s.total_at_most(both, 0);
    const ComplexMatrix p = kron(one, one);
    const ComplexMatrix dp = q_coproduct(UqGenerator::Plus, j, j, q);
    const ComplexMatrix dm = q_coproduct(UqGenerator::Minus, j, j, q);
    const ComplexMatrix d3 = q_coproduct(UqGenerator::J3, j, j, q);
    CHECK(oracle::max_abs((comm(dp, dm) - q_number_operator(2.0 * d3, q)) * p) < 1e-10);
    CHECK(oracle::max_abs(comm(d3, dp) - dp) < 1e-10);
  }
}

TEST_CASE("q-boson entropy is flat in q") {
  const double theta = 1.0, phi = 0.7;
  const double ref = oracle::boson_entropy(theta, phi);
  for (double q : {0.3, 0.5, 1.0, 2.0, 3.7}) {
    const QBosonResult r = q_boson_example(theta, phi, q);
    CHECK(std::abs(r.entropy - ref) < 1e-9);
    CHECK(r.gns_dimension == 6);
    CHECK(r.algebra_dimension == 14);
    CHECK(std::abs(q_boson_example(kPi / 2, 0.0, q).entropy) < 1e-12);
  }
  // The literal triplet span is M3 + C: doublet and singlet weights merge into one block.
  const double s = std::sin(theta) * std::cos(phi);
  for (double q : {0.5, 2.0}) {
    const QBosonResult literal = q_boson_example(theta, phi, q, {}, 42, QBosonObservables::TripletSpan);
    CHECK(literal.algebra_dimension == 10);
    CHECK(std::abs(literal.entropy - oracle::binary_entropy(s * s)) < 1e-9);
  }
}

TEST_CASE("q-boson basis is orthonormal and lies in the two-quantum sector") {
  const QBosonSetup setup = q_boson_setup(1.0, 0.7, 2.0);
  CHECK(setup.basis.rows() == 27);
  CHECK(setup.basis.cols() == 6);
  CHECK(oracle::max_abs(setup.basis.adjoint() * setup.basis - ComplexMatrix::Identity(6, 6)) < 1e-12);
  const std::vector<Index> all{0, 1, 2};
  const ComplexMatrix two = setup.system.total_at_most(all, 2) - setup.system.total_at_most(all, 1);
  CHECK(oracle::max_abs(two * setup.basis - setup.basis) < 1e-12);
  CHECK(std::abs(setup.state.norm() - 1.0) < 1e-12);
}
