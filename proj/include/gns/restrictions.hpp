#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gns/quantum_state.hpp"

namespace gns {

struct CornerProjectors {
  ComplexMatrix plus;
  ComplexMatrix minus;
};

/// A parity operator with a parity-even observable algebra. Optional corner
/// units and odd elements are checked by validate_parity.
struct ParitySetup {
  ComplexMatrix parity;
  MatrixAlgebra even_subalgebra;
  std::optional<CornerProjectors> corners;
  std::vector<ComplexMatrix> odd_elements;
};

/// The setup whose observables are every ambient matrix commuting with P.
ParitySetup parity_commutant_setup(const ComplexMatrix& parity, Tolerance tol = {});

/// Throws InvalidParity when P is not a hermitian involution, the algebra is
/// not even, or an odd element is not odd; CornerViolation when the corner
/// units fail 1+ + 1- = 1, 1+ 1- = 0, or 1+ a = a 1+ = 0 for an odd a.
void validate_parity(const ParitySetup& setup, Tolerance tol = {});

struct ParityReport {
  Index algebra_dimension = 0;
  double max_deviation = 0.0;      // |omega(b) - omega_avg(b)| over the algebra basis
  double restricted_entropy = 0.0;
  double averaged_entropy = 0.0;
  std::optional<std::array<double, 2>> corner_weights;  // omega(1+), omega(1-)
};

/// Compares omega restricted to the even algebra with the parity average
/// (omega + P omega P) / 2 restricted to it.
ParityReport parity_restriction_vs_average(const AlgebraState& omega, const ParitySetup& setup,
                                           std::uint64_t seed, Tolerance tol = {});

/// The matrices of `within` (default: all ambient matrices) that commute with every `ops` element.
MatrixAlgebra relative_commutant(std::span<const ComplexMatrix> ops,
                                 const MatrixAlgebra* within = nullptr, Tolerance tol = {});

struct CollapseReport {
  MatrixAlgebra observables;
  ComplexMatrix collapsed;           // p rho p + (1-p) rho (1-p)
  double max_deviation = 0.0;        // restriction vs collapse over the observable basis
  double restricted_entropy = 0.0;   // canonical entropy of omega on the observables
  double collapsed_entropy = 0.0;    // von Neumann entropy of the collapsed density
  std::array<double, 2> weights{};   // omega(p), omega(1-p)
  Index gns_dimension = 0;
};

/// Restriction to the commutant of a projector, compared with the collapsed
/// state. Throws NotProjector unless p = p^2 = p^dag with 0 < Tr p < dim.
CollapseReport measurement_restriction(const AlgebraState& omega, const ComplexMatrix& p,
                                       std::uint64_t seed, Tolerance tol = {},
                                       const MatrixAlgebra* within = nullptr);

}  // namespace gns
