#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gns/algebra.hpp"

namespace gns {

enum class LogBase { Natural, Two };

/// A normalized positive functional on ambient matrices, stored as its density.
class AlgebraState {
 public:
  /// Validates hermiticity, unit trace and positivity; throws NotDensity.
  explicit AlgebraState(ComplexMatrix density, Tolerance tol = {},
                        std::optional<bool> purity_hint = std::nullopt);

  Index ambient_dim() const noexcept { return density_.rows(); }
  const ComplexMatrix& density() const noexcept { return density_; }
  std::optional<bool> purity_hint() const noexcept { return purity_hint_; }

 private:
  ComplexMatrix density_;
  std::optional<bool> purity_hint_;
};

/// |psi><psi| for psi normalized. Throws ZeroVector for a null vector and
/// DimensionMismatch when psi.size() != dim.
AlgebraState state_from_vector(const ComplexVector& psi, Index dim);
inline AlgebraState state_from_vector(const ComplexVector& psi) {
  return state_from_vector(psi, psi.size());
}

/// Tr(rho a).
Complex evaluate(const AlgebraState& omega, const ComplexMatrix& a);

/// The state seen only through a subalgebra: its values on the subalgebra basis.
struct RestrictedState {
  MatrixAlgebra subalgebra;
  ComplexVector values;

  /// omega(a) for a in the subalgebra span, by linearity on the basis.
  Complex evaluate(const ComplexMatrix& a) const;
  /// Largest |omega(b^dagger) - conj(omega(b))| over basis elements.
  double star_defect() const;
};

RestrictedState restrict_state(const AlgebraState& omega, const MatrixAlgebra& subalgebra);

/// -sum lambda log lambda over eigenvalues above tolerance.
double von_neumann_entropy(const ComplexMatrix& density, LogBase base = LogBase::Natural,
                           Tolerance tol = {});

/// -sum p log p over entries above tolerance, after normalizing to unit sum.
double shannon_entropy(std::span<const double> weights, LogBase base = LogBase::Natural,
                       Tolerance tol = {});

struct CanonicalEntropy {
  double entropy = 0.0;
  std::vector<ComplexMatrix> block_densities;  // per block, (rho_k)_{ij} = omega(E_ji)
  std::vector<double> block_weights;           // traces of block densities, unnormalized
  std::vector<Index> block_dims;
  double unit_value = 1.0;                     // omega(unit of the subalgebra)

  /// The direct sum of block densities, renormalized to unit trace.
  ComplexMatrix assembled() const;
  /// Number of eigenvalues of the assembled density above tolerance.
  Index rank(Tolerance tol = {}) const;
  std::vector<double> spectrum(Tolerance tol = {}) const;
};

/// Entropy of the block density of the restricted state: the least entropy
/// over all irreducible splittings of its GNS space.
CanonicalEntropy canonical_entropy(const RestrictedState& omega0, std::uint64_t seed,
                                   Tolerance tol = {}, LogBase base = LogBase::Natural);
/// Same, reusing a block structure already computed for omega0.subalgebra.
CanonicalEntropy canonical_entropy(const BlockStructure& bs, const RestrictedState& omega0,
                                   Tolerance tol = {}, LogBase base = LogBase::Natural);
CanonicalEntropy canonical_entropy(const AlgebraState& omega, const MatrixAlgebra& subalgebra,
                                   std::uint64_t seed, Tolerance tol = {},
                                   LogBase base = LogBase::Natural);

}  // namespace gns
