#pragma once

#include <cstdint>
#include <vector>

#include "gns/quantum_state.hpp"

namespace gns {

/// The GNS data of a state on a subalgebra. Vectors of the GNS space are
/// stored in algebra coordinates; the Gel'fand ideal is the Gram kernel and
/// the quotient is its Gram-orthonormal complement.
struct GnsRepresentation {
  MatrixAlgebra source;
  RestrictedState state;
  ComplexMatrix gram;            // G_ij = omega(b_i^dagger b_j)
  ComplexMatrix ideal_basis;     // columns: coordinates spanning the ideal
  ComplexMatrix quotient_basis;  // columns: Gram-orthonormal coordinates
  std::vector<ComplexMatrix> rep_matrices;  // pi(b_i) on the quotient basis
  ComplexVector cyclic;          // |[1]> on the quotient basis
  ComplexVector unit_coordinates;

  Index dimension() const noexcept { return quotient_basis.cols(); }
  Index ideal_dimension() const noexcept { return ideal_basis.cols(); }

  /// pi(a) for a in the span of the source algebra.
  ComplexMatrix represent(const ComplexMatrix& a) const;
  /// The represented algebra pi(A) as a matrix algebra on the GNS space.
  MatrixAlgebra represented_algebra(Tolerance tol = {}) const;
};

GnsRepresentation build_gns(const RestrictedState& omega0, Tolerance tol = {});
GnsRepresentation build_gns(const AlgebraState& omega, const MatrixAlgebra& subalgebra,
                            Tolerance tol = {});

enum class DecompositionMode { CanonicalSchmidt, RandomSplit, IsotypicOnly };

struct GnsDecomposition {
  DecompositionMode kind = DecompositionMode::CanonicalSchmidt;
  std::vector<ComplexMatrix> projectors;  // on the GNS space
  std::vector<double> weights;            // ||P cyclic||^2, summing to <cyclic|cyclic>
  std::vector<Index> block_of;            // isotypic block of each projector
  std::vector<Index> block_dims;          // d_k of the represented algebra
  std::vector<Index> block_multiplicities;  // m_k in the GNS space
  double cyclic_norm_squared = 1.0;
};

GnsDecomposition decompose(const GnsRepresentation& gns, DecompositionMode mode,
                           std::uint64_t seed, Tolerance tol = {});

/// -sum lambda log lambda over the decomposition weights, renormalized by
/// <cyclic|cyclic> when that differs from one.
double gns_entropy(const GnsDecomposition& decomposition, LogBase base = LogBase::Natural,
                   Tolerance tol = {});

struct GnsDiagnostics {
  double homomorphism = 0.0;     // max |pi(ab) - pi(a) pi(b)|
  double star = 0.0;             // max |pi(a^dagger) - pi(a)^dagger|
  double reconstruction = 0.0;   // max |omega(a) - <cyclic|pi(a)|cyclic>|
  Index cyclic_rank = 0;         // rank of {pi(b_i) cyclic}
  Index dimension = 0;
  double max_deviation() const;
  bool cyclic() const noexcept { return cyclic_rank == dimension; }
};

GnsDiagnostics verify_gns(const GnsRepresentation& gns, Tolerance tol = {});

}  // namespace gns
