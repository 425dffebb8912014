#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gns/numkernel.hpp"

namespace gns {

/// A *-closed, multiplicatively closed span of ambient_dim x ambient_dim
/// complex matrices, stored through a Hilbert-Schmidt orthonormal basis.
class MatrixAlgebra {
 public:
  MatrixAlgebra() = default;

  /// Orthonormalizes `spanning` and keeps the span as is. Closure is the
  /// caller's responsibility; use generate_algebra when it is not known.
  MatrixAlgebra(Index ambient_dim, std::span<const ComplexMatrix> spanning, Tolerance tol = {});

  Index ambient_dim() const noexcept { return ambient_dim_; }
  Index dim() const noexcept { return static_cast<Index>(basis_.size()); }
  const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }
  const ComplexMatrix& basis(Index i) const { return basis_.at(static_cast<std::size_t>(i)); }
  bool has_ambient_identity() const noexcept { return has_ambient_identity_; }

  /// Hilbert-Schmidt coordinates of `a` on the basis (projection, no membership check).
  ComplexVector coordinates(const ComplexMatrix& a) const;
  ComplexMatrix element(const ComplexVector& coordinates) const;

  /// Distance from `a` to the span, in Hilbert-Schmidt norm.
  double distance(const ComplexMatrix& a) const;
  bool contains(const ComplexMatrix& a, Tolerance tol = {}) const;

  /// Largest deviation from *-closure and from product closure over the basis.
  double star_closure_defect() const;
  double product_closure_defect() const;

 private:
  Index ambient_dim_ = 0;
  std::vector<ComplexMatrix> basis_;
  bool has_ambient_identity_ = false;
};

MatrixAlgebra full_matrix_algebra(Index d);
MatrixAlgebra diagonal_algebra(Index d);

/// Smallest *-algebra containing the generators (and the ambient identity when
/// requested), by breadth-first product closure until the span is stable.
MatrixAlgebra generate_algebra(std::span<const ComplexMatrix> generators,
                               bool include_ambient_identity, Tolerance tol = {});

/// All ambient matrices commuting with every element of `a`.
MatrixAlgebra commutant(const MatrixAlgebra& a, Tolerance tol = {});

/// a intersected with its commutant.
MatrixAlgebra center(const MatrixAlgebra& a, Tolerance tol = {});

/// The unit of the algebra (a projection; equals the ambient identity when that
/// lies in the span). Throws NotUnital if none exists.
ComplexMatrix algebra_unit(const MatrixAlgebra& a, Tolerance tol = {});

/// A simple summand M_d (x) 1_m of the algebra.
struct Block {
  ComplexMatrix central_projection;
  Index dim = 0;           // d_k
  Index multiplicity = 0;  // m_k, in the ambient representation
  std::vector<ComplexMatrix> units;  // E_ij stored row-major, i,j < dim

  const ComplexMatrix& unit(Index i, Index j) const {
    return units.at(static_cast<std::size_t>(i * dim + j));
  }
};

struct BlockStructure {
  ComplexMatrix unit;  // sum of the central projections
  std::vector<Block> blocks;
};

/// Wedderburn decomposition: minimal central projections, block dimensions,
/// multiplicities and a system of matrix units per block. Blocks are ordered by
/// descending dimension, then descending trace of the central projection.
/// Random splittings draw from `seed`; on eigenvalue collision the split is
/// retried with a derived seed up to 8 times before DegenerateSplit is thrown.
BlockStructure block_structure(const MatrixAlgebra& a, std::uint64_t seed, Tolerance tol = {});

/// Largest entrywise deviation of the block data from the matrix-unit relations.
double matrix_unit_defect(const BlockStructure& bs);

}  // namespace gns
