#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "gns/restrictions.hpp"
#include "oracles.hpp"

using namespace gns;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

// Parity with a corner structure: 1+ = diag(1,1,0,0), odd elements live in the 1- corner.
ParitySetup corner_setup() {
  ParitySetup s = parity_commutant_setup(diag({1, 1, 1, -1}));
  s.corners = CornerProjectors{diag({1, 1, 0, 0}), diag({0, 0, 1, 1})};
  s.odd_elements = {oracle::unit(4, 2, 3) + oracle::unit(4, 3, 2)};
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::SchemaError;
}

}  // namespace

TEST_CASE("two-level parity toy: restriction equals the average") {
  const ParitySetup setup = parity_commutant_setup(diag({1, -1}));
  CHECK(setup.even_subalgebra.dim() == 2);
  for (double theta : {0.0, 0.4, 1.0, kPi / 4}) {
    ComplexVector v(2);
    v << std::cos(theta), std::sin(theta);
    const AlgebraState w = state_from_vector(v);
    const ParityReport r = parity_restriction_vs_average(w, setup, 42);
    CHECK(r.max_deviation <= 1e-12);
    const double c2 = std::cos(theta) * std::cos(theta);
    CHECK(std::abs(r.restricted_entropy - oracle::binary_entropy(c2)) < 1e-9);
    CHECK(std::abs(r.averaged_entropy - r.restricted_entropy) < 1e-12);
    // Brute force on the two diagonal units.
    const oracle::Mat p = diag({1, -1});
    const oracle::Mat avg = 0.5 * (w.density() + p * w.density() * p);
    for (Index i = 0; i < 2; ++i) {
      const oracle::Mat e = oracle::unit(2, i, i);
      CHECK(std::abs((w.density() * e).trace() - (avg * e).trace()) < 1e-15);
    }
  }
}

TEST_CASE("parity-invariant state equals its average everywhere") {
  const oracle::Mat p = diag({1, -1});
  ComplexVector v(2);
  v << 1.0, 0.0;
  const AlgebraState w = state_from_vector(v);
  const oracle::Mat avg = 0.5 * (w.density() + p * w.density() * p);
  CHECK(oracle::max_abs(avg - w.density()) < 1e-15);
}

TEST_CASE("random four-level states agree with their parity average on the commutant") {
  std::mt19937 gen(97);
  const ParitySetup setup = parity_commutant_setup(diag({1, 1, -1, -1}));
  CHECK(setup.even_subalgebra.dim() == 8);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mat rho = oracle::random_density(4, 1 + trial % 4, gen);
    const ParityReport r = parity_restriction_vs_average(AlgebraState(rho), setup, 42);
    CHECK(r.max_deviation <= 1e-12);
    CHECK(std::abs(r.restricted_entropy - r.averaged_entropy) < 1e-9);
    const oracle::Mat avg = 0.5 * (rho + setup.parity * rho * setup.parity);
    for (const auto& a : setup.even_subalgebra.basis())
      CHECK(std::abs((rho * a).trace() - (avg * a).trace()) < 1e-12);
  }
}

TEST_CASE("corner instance validates and reports corner weights") {
  std::mt19937 gen(101);
  const ParitySetup setup = corner_setup();
  validate_parity(setup);
  const oracle::Mat rho = oracle::random_density(4, 2, gen);
  const ParityReport r = parity_restriction_vs_average(AlgebraState(rho), setup, 42);
  REQUIRE(r.corner_weights.has_value());
  CHECK(std::abs((*r.corner_weights)[0] - (rho(0, 0) + rho(1, 1)).real()) < 1e-12);
  CHECK(std::abs((*r.corner_weights)[0] + (*r.corner_weights)[1] - 1.0) < 1e-12);
  CHECK(r.max_deviation <= 1e-12);
}

TEST_CASE("parity validation errors") {
  CHECK_NOTHROW(validate_parity(parity_commutant_setup(diag({1, 1, 1, -1}))));
  CHECK(kind_of([] { parity_commutant_setup(diag({1, 2})); }) == ErrorKind::InvalidParity);

  ParitySetup wrong_odd = corner_setup();
  wrong_odd.odd_elements = {diag({1, 0, 0, 0})};
  CHECK(kind_of([&] { validate_parity(wrong_odd); }) == ErrorKind::InvalidParity);

  ParitySetup leaky = corner_setup();
  leaky.odd_elements = {oracle::unit(4, 0, 3) + oracle::unit(4, 3, 0)};
  CHECK(kind_of([&] { validate_parity(leaky); }) == ErrorKind::CornerViolation);

  ParitySetup overlap = corner_setup();
  overlap.corners->minus = diag({1, 0, 1, 1});
  CHECK(kind_of([&] { validate_parity(overlap); }) == ErrorKind::CornerViolation);

  ParitySetup not_even = corner_setup();
  const std::vector<ComplexMatrix> odd{oracle::unit(4, 2, 3) + oracle::unit(4, 3, 2)};
  not_even.even_subalgebra = generate_algebra(odd, true);
  CHECK(kind_of([&] { validate_parity(not_even); }) == ErrorKind::InvalidParity);
}

TEST_CASE("relative commutant of a projector") {
  const std::vector<ComplexMatrix> ops{diag({1, 1, 0, 0})};
  CHECK(relative_commutant(ops).dim() == 8);
  const MatrixAlgebra diag4 = diagonal_algebra(4);
  CHECK(relative_commutant(ops, &diag4).dim() == 4);
}

TEST_CASE("collapse on the Bell state gives weights one half") {
  const AlgebraState bell = state_from_vector(oracle::bell_vector(kPi / 4));
  const oracle::Mat p = oracle::kron(0.5 * (oracle::sigma(0) + oracle::sigma(3)), oracle::sigma(0));
  const CollapseReport r = measurement_restriction(bell, p, 42);
  CHECK(std::abs(r.weights[0] - 0.5) < 1e-12);
  CHECK(std::abs(r.weights[1] - 0.5) < 1e-12);
  CHECK(r.max_deviation <= 1e-12);
  CHECK(std::abs(r.restricted_entropy - std::log(2.0)) < 1e-9);
  CHECK(std::abs(r.collapsed_entropy - std::log(2.0)) < 1e-9);
}

TEST_CASE("collapse of a state inside the projector changes nothing") {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = 0.6;
  v(1) = Complex(0.0, 0.8);
  const AlgebraState w = state_from_vector(v);
  const CollapseReport r = measurement_restriction(w, diag({1, 1, 0, 0}), 42);
  CHECK(std::abs(r.weights[0] - 1.0) < 1e-12);
  CHECK(std::abs(r.weights[1]) < 1e-12);
  CHECK(oracle::max_abs(r.collapsed - w.density()) < 1e-12);
}

TEST_CASE("collapse identity on random instances") {
  std::mt19937 gen(103);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mat rho = oracle::random_density(4, 1 + trial % 4, gen);
    const oracle::Mat u = oracle::random_unitary(4, gen);
    const oracle::Mat p = (u.leftCols(2) * u.leftCols(2).adjoint()).eval();
    const oracle::Mat psym = (0.5 * (p + p.adjoint())).eval();
    const CollapseReport r = measurement_restriction(AlgebraState(rho), psym, 42);
    CHECK(r.max_deviation <= 1e-12);
    CHECK(r.observables.dim() == 8);
    const oracle::Mat q = oracle::Mat::Identity(4, 4) - psym;
    const oracle::Mat collapsed = psym * rho * psym + q * rho * q;
    for (const auto& a : r.observables.basis()) {
      CHECK(oracle::max_abs(a * psym - psym * a) < 1e-10);
      CHECK(std::abs((rho * a).trace() - (collapsed * a).trace()) < 1e-12);
    }
    CHECK(r.weights[0] >= -1e-12);
    CHECK(r.weights[1] >= -1e-12);
    CHECK(std::abs(r.weights[0] + r.weights[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("collapse rejects non-projectors") {
  const AlgebraState w(oracle::m2_density(0.5));
  CHECK(kind_of([&] { measurement_restriction(w, diag({0.5, 0}), 42); }) == ErrorKind::NotProjector);
  CHECK(kind_of([&] { measurement_restriction(w, diag({0, 0}), 42); }) == ErrorKind::NotProjector);
  CHECK(kind_of([&] { measurement_restriction(w, diag({1, 1}), 42); }) == ErrorKind::NotProjector);
  CHECK(kind_of([&] { measurement_restriction(w, oracle::unit(2, 0, 1), 42); }) == ErrorKind::NotProjector);
}
