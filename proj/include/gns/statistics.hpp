#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gns/algebra.hpp"
#include "gns/quantum_state.hpp"

namespace gns {

enum class Sector { Full, Symmetric, Antisymmetric };

inline constexpr Index kDefaultSizeCap = 4096;

/// A statistics sector of the k-fold tensor power of C^d, given by an
/// isometry from sector coordinates into the full tensor space. Tensor
/// indices put the first factor most significant, matching kron().
struct ParticleSpace {
  Index one_particle_dim = 0;
  Index particles = 0;
  Sector sector = Sector::Full;
  ComplexMatrix isometry;  // d^k x D
  std::vector<std::vector<Index>> basis_labels;  // zero-based one-particle levels

  Index dim() const noexcept { return isometry.cols(); }
  Index tensor_dim() const noexcept { return isometry.rows(); }
};

/// Lexicographic basis: i<j<... (antisymmetric), i<=j<=... (symmetric), all
/// tuples (full). Basis vectors are normalized (anti)symmetrized products.
ParticleSpace make_particle_space(Index d, Index k, Sector sector, Index cap = kDefaultSizeCap);

/// The same sector with basis vectors reordered to `labels` (each label must
/// name an existing basis vector).
ParticleSpace reorder_basis(const ParticleSpace& space,
                            const std::vector<std::vector<Index>>& labels);

/// The same sector in a new orthonormal basis: column c of `change` gives new
/// basis vector c in the old sector coordinates.
ParticleSpace change_basis(const ParticleSpace& space, const ComplexMatrix& change,
                           Tolerance tol = {});

ComplexMatrix symmetrizer(Index d, Index k, Index cap = kDefaultSizeCap);
ComplexMatrix antisymmetrizer(Index d, Index k, Index cap = kDefaultSizeCap);

/// sum over positions of 1 (x) ... (x) L (x) ... (x) 1 on the full tensor space.
ComplexMatrix position_sum(const ComplexMatrix& l, Index k);
/// g (x) g (x) ... (x) g.
ComplexMatrix tensor_power(const ComplexMatrix& g, Index k);

/// Additive coproduct of a one-particle operator, restricted to the sector.
ComplexMatrix coproduct_lie(const ComplexMatrix& l, const ParticleSpace& space);
/// Group-like coproduct g -> g (x) ... (x) g, restricted to the sector.
ComplexMatrix coproduct_group(const ComplexMatrix& g, const ParticleSpace& space,
                              Tolerance tol = {});

/// The algebra generated by the coproducts of |e_i><e_j| for i, j in `levels`
/// (zero-based) together with the sector identity.
MatrixAlgebra one_particle_subalgebra(const ParticleSpace& space, std::span<const Index> levels,
                                      Tolerance tol = {});

/// Normalized sector vector from coefficients on the basis labels.
ComplexVector wedge_vector(const ComplexVector& coefficients, const ParticleSpace& space);
ComplexVector vee_vector(const ComplexVector& coefficients, const ParticleSpace& space);
ComplexVector to_tensor(const ComplexVector& sector_vector, const ParticleSpace& space);

// ---------------------------------------------------------------------------
// The identical-particle configurations worked out in the examples.

/// Two fermions on C^4 in the ordered basis (a; alpha1, alpha2; beta1, beta2; b)
/// = (e1^e2; e1^e3, e2^e3; e1^e4, e2^e4; e3^e4).
ParticleSpace fermi4_space();
/// cos(theta) |beta1> + sin(theta) |alpha2>.
ComplexVector fermi4_state(double theta);

/// Two fermions on C^3 in the basis f^k = eps^{ijk} e_i ^ e_j (i<j):
/// f1 = e2^e3, f2 = e3^e1, f3 = e1^e2.
ParticleSpace fermi3_space();
/// Full one-particle algebra on the two-fermion space (levels 1..3).
MatrixAlgebra fermi3_choice1_algebra(Tolerance tol = {});
/// One-particle observables touching only e1, e2, plus the identity.
MatrixAlgebra fermi3_choice2_algebra(Tolerance tol = {});
/// cos(theta) f1 + sin(theta) f3.
ComplexVector fermi3_state(double theta);

/// Two bosons on C^3 in the basis of the 3 + 2 + 1 invariant subspaces:
/// (e1ve1, e1ve2, e2ve2; e1ve3, e2ve3; e3ve3).
ParticleSpace bose3_space();
/// sin(theta)cos(phi) e1ve2 + sin(theta)sin(phi) e1ve3 + cos(theta) e3ve3.
ComplexVector bose3_state(double theta, double phi);
/// Closed-form entropy of bose3_state restricted to the e1, e2 observables.
double bose3_entropy_closed_form(double theta, double phi);

}  // namespace gns
