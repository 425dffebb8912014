#include "gns/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gns {

namespace {

// Column-major vec of a square matrix, as a column vector.
ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

void require_ambient(const ComplexMatrix& m, Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected " +
                                                  std::to_string(d) + "x" + std::to_string(d) +
                                                  " matrix");
  }
}

// Consecutive groups of ascending eigenvalues. Returns the group boundaries, or
// an empty vector when two groups sit suspiciously close to each other.
std::vector<std::pair<Index, Index>> cluster_ascending(const RealVector& values) {
  std::vector<std::pair<Index, Index>> groups;
  if (values.size() == 0) return groups;
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  const double same = 1e-7 * scale;
  const double separated = 1e-3 * scale;
  Index start = 0;
  for (Index i = 1; i < values.size(); ++i) {
    const double gap = values(i) - values(i - 1);
    if (gap <= same) continue;
    if (gap < separated) return {};
    groups.emplace_back(start, i);
    start = i;
  }
  groups.emplace_back(start, values.size());
  return groups;
}

// Orthonormal basis of the range of a hermitian projection.
ComplexMatrix projection_range(const ComplexMatrix& p, Tolerance tol) {
  const Eigensystem es = hermitian_eigensystem(p, Tolerance(std::max(tol.epsilon, 1e-8)));
  std::vector<Index> keep;
  for (Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > 0.5) keep.push_back(i);
  }
  ComplexMatrix out(p.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Index>(c)) = es.vectors.col(keep[c]);
  return out;
}

ComplexMatrix random_hermitian_element(std::span<const ComplexMatrix> span, SeededGaussian& rng) {
  ComplexMatrix x = ComplexMatrix::Zero(span.front().rows(), span.front().cols());
  for (const auto& b : span) x += rng() * b;
  return 0.5 * (x + x.adjoint());
}

ComplexMatrix random_element(std::span<const ComplexMatrix> span, SeededGaussian& rng) {
  ComplexMatrix x = ComplexMatrix::Zero(span.front().rows(), span.front().cols());
  for (const auto& b : span) {
    const double re = rng();
    const double im = rng();
    x += Complex(re, im) * b;
  }
  return x;
}

// Deterministic total order on projections used to break ordering ties.
bool entrywise_less(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex d = a(i, j) - b(i, j);
      if (std::abs(d.real()) > 1e-8) return a(i, j).real() > b(i, j).real();
      if (std::abs(d.imag()) > 1e-8) return a(i, j).imag() > b(i, j).imag();
    }
  }
  return false;
}

struct SplitFailure {};

BlockStructure try_block_structure(const MatrixAlgebra& a, const ComplexMatrix& unit,
                                   const MatrixAlgebra& z, std::uint64_t seed, Tolerance tol) {
  SeededGaussian rng(seed);
  const Index d = a.ambient_dim();

  // Minimal central projections from a random hermitian central element.
  const ComplexMatrix hc = random_hermitian_element(z.basis(), rng);
  const Eigensystem ces = hermitian_eigensystem(hc, Tolerance(std::max(tol.epsilon, 1e-8)));
  const auto cgroups = cluster_ascending(ces.values);
  if (cgroups.empty()) throw SplitFailure{};

  std::vector<ComplexMatrix> central;
  for (auto [lo, hi] : cgroups) {
    const ComplexMatrix w = ces.vectors.middleCols(lo, hi - lo);
    ComplexMatrix zk = w * w.adjoint() * unit;
    zk = (0.5 * (zk + zk.adjoint())).eval();
    if (zk.trace().real() > 0.5) central.push_back(std::move(zk));
  }
  if (static_cast<Index>(central.size()) != z.dim()) throw SplitFailure{};

  BlockStructure out;
  out.unit = unit;
  for (const auto& zk : central) {
    std::vector<ComplexMatrix> products;
    products.reserve(a.basis().size());
    for (const auto& b : a.basis()) products.push_back(b * zk);
    const auto ak = orthonormalize(products, hs_inner, tol);
    const Index dk = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(ak.size()))));
    if (dk * dk != static_cast<Index>(ak.size()) || dk == 0) throw SplitFailure{};

    const ComplexMatrix range = projection_range(zk, tol);
    const Index rk = range.cols();
    if (rk % dk != 0) throw SplitFailure{};
    const Index mk = rk / dk;

    // Minimal projections of A z_k from a random hermitian element.
    const ComplexMatrix hk = random_hermitian_element(ak, rng);
    const ComplexMatrix compressed = range.adjoint() * hk * range;
    const Eigensystem kes =
        hermitian_eigensystem(0.5 * (compressed + compressed.adjoint()), Tolerance(1e-8));
    const auto kgroups = cluster_ascending(kes.values);
    if (static_cast<Index>(kgroups.size()) != dk) throw SplitFailure{};
    std::vector<ComplexMatrix> minimal;
    for (auto [lo, hi] : kgroups) {
      if (hi - lo != mk) throw SplitFailure{};
      const ComplexMatrix w = range * kes.vectors.middleCols(lo, hi - lo);
      minimal.push_back(w * w.adjoint());
    }

    Block block;
    block.central_projection = zk;
    block.dim = dk;
    block.multiplicity = mk;
    std::vector<ComplexMatrix> column(static_cast<std::size_t>(dk));  // E_{i1}
    column[0] = minimal[0];
    for (Index i = 1; i < dk; ++i) {
      const ComplexMatrix y = random_element(ak, rng);
      const ComplexMatrix x = minimal[static_cast<std::size_t>(i)] * y * minimal[0];
      const double c = (x.adjoint() * x).trace().real() / static_cast<double>(mk);
      if (!(c > 1e-6 * std::max(1.0, max_abs(y) * max_abs(y)))) throw SplitFailure{};
      column[static_cast<std::size_t>(i)] = x / std::sqrt(c);
    }
    block.units.resize(static_cast<std::size_t>(dk * dk));
    for (Index i = 0; i < dk; ++i) {
      for (Index j = 0; j < dk; ++j) {
        block.units[static_cast<std::size_t>(i * dk + j)] =
            column[static_cast<std::size_t>(i)] * column[static_cast<std::size_t>(j)].adjoint();
      }
    }
    out.blocks.push_back(std::move(block));
  }

  Index total = 0;
  for (const auto& b : out.blocks) total += b.dim * b.dim;
  if (total != a.dim()) throw SplitFailure{};
  (void)d;

  std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& x, const Block& y) {
    if (x.dim != y.dim) return x.dim > y.dim;
    const double tx = x.central_projection.trace().real();
    const double ty = y.central_projection.trace().real();
    if (std::abs(tx - ty) > 0.5) return tx > ty;
    return entrywise_less(x.central_projection, y.central_projection);
  });
  return out;
}

}  // namespace

MatrixAlgebra::MatrixAlgebra(Index ambient_dim, std::span<const ComplexMatrix> spanning,
                             Tolerance tol)
    : ambient_dim_(ambient_dim) {
  if (ambient_dim <= 0) throw Error(ErrorKind::DimensionMismatch, "ambient dimension must be positive");
  for (const auto& m : spanning) require_ambient(m, ambient_dim, "algebra element");
  basis_ = orthonormalize(spanning, hs_inner, tol);
  has_ambient_identity_ =
      !basis_.empty() && contains(ComplexMatrix::Identity(ambient_dim, ambient_dim), Tolerance(1e-8));
}

ComplexVector MatrixAlgebra::coordinates(const ComplexMatrix& a) const {
  require_ambient(a, ambient_dim_, "coordinates");
  ComplexVector c(dim());
  for (Index i = 0; i < dim(); ++i) c(i) = hs_inner(basis_[static_cast<std::size_t>(i)], a);
  return c;
}

ComplexMatrix MatrixAlgebra::element(const ComplexVector& coordinates) const {
  if (coordinates.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate count differs from algebra dimension");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ambient_dim_, ambient_dim_);
  for (Index i = 0; i < dim(); ++i) out += coordinates(i) * basis_[static_cast<std::size_t>(i)];
  return out;
}

double MatrixAlgebra::distance(const ComplexMatrix& a) const {
  return (a - element(coordinates(a))).norm();
}

bool MatrixAlgebra::contains(const ComplexMatrix& a, Tolerance tol) const {
  return distance(a) <= tol.epsilon * std::max(a.norm(), 1.0);
}

double MatrixAlgebra::star_closure_defect() const {
  double worst = 0.0;
  for (const auto& b : basis_) worst = std::max(worst, distance(b.adjoint()));
  return worst;
}

double MatrixAlgebra::product_closure_defect() const {
  double worst = 0.0;
  for (const auto& x : basis_) {
    for (const auto& y : basis_) worst = std::max(worst, distance(x * y));
  }
  return worst;
}

MatrixAlgebra full_matrix_algebra(Index d) {
  std::vector<ComplexMatrix> units;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) units.push_back(matrix_unit(d, i, j));
  }
  return MatrixAlgebra(d, units);
}

MatrixAlgebra diagonal_algebra(Index d) {
  std::vector<ComplexMatrix> units;
  for (Index i = 0; i < d; ++i) units.push_back(matrix_unit(d, i, i));
  return MatrixAlgebra(d, units);
}

MatrixAlgebra generate_algebra(std::span<const ComplexMatrix> generators,
                               bool include_ambient_identity, Tolerance tol) {
  if (generators.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "generate_algebra needs at least one generator");
  }
  const Index d = generators.front().rows();
  std::vector<ComplexMatrix> seed;
  if (include_ambient_identity) seed.push_back(ComplexMatrix::Identity(d, d));
  for (const auto& g : generators) {
    require_ambient(g, d, "generator");
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  std::vector<ComplexMatrix> basis = orthonormalize(seed, hs_inner, tol);

  for (;;) {
    const std::size_t before = basis.size();
    std::vector<ComplexMatrix> candidates = basis;
    for (std::size_t i = 0; i < before; ++i) {
      for (std::size_t j = 0; j < before; ++j) candidates.push_back(basis[i] * basis[j]);
    }
    basis = orthonormalize(candidates, hs_inner, tol);
    if (basis.size() == before) break;
  }
  return MatrixAlgebra(d, basis, tol);
}

MatrixAlgebra commutant(const MatrixAlgebra& a, Tolerance tol) {
  const Index d = a.ambient_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix stacked(a.dim() * d * d, d * d);
  for (Index i = 0; i < a.dim(); ++i) {
    const ComplexMatrix& b = a.basis(i);
    stacked.middleRows(i * d * d, d * d) = kron(id, b) - kron(b.transpose(), id);
  }
  const ComplexMatrix ker = a.dim() == 0 ? ComplexMatrix::Identity(d * d, d * d)
                                         : kernel_basis(stacked, tol);
  std::vector<ComplexMatrix> elems;
  for (Index c = 0; c < ker.cols(); ++c) elems.push_back(unvec(ker.col(c), d));
  return MatrixAlgebra(d, elems, tol);
}

MatrixAlgebra center(const MatrixAlgebra& a, Tolerance tol) {
  const Index d = a.ambient_dim();
  const Index n = a.dim();
  ComplexMatrix stacked(n * d * d, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix comm = a.basis(i) * a.basis(j) - a.basis(j) * a.basis(i);
      stacked.block(i * d * d, j, d * d, 1) = vec(comm);
    }
  }
  const ComplexMatrix ker = kernel_basis(stacked, tol);
  std::vector<ComplexMatrix> elems;
  for (Index c = 0; c < ker.cols(); ++c) elems.push_back(a.element(ker.col(c)));
  return MatrixAlgebra(d, elems, tol);
}

ComplexMatrix algebra_unit(const MatrixAlgebra& a, Tolerance tol) {
  const Index d = a.ambient_dim();
  if (a.dim() == 0) throw Error(ErrorKind::NotUnital, "zero algebra has no unit");
  if (a.has_ambient_identity()) return ComplexMatrix::Identity(d, d);
  const Index n = a.dim();
  // Solve sum_j c_j b_j b_i = b_i and b_i b_j c_j = b_i for every i.
  ComplexMatrix lhs(2 * n * d * d, n);
  ComplexVector rhs(2 * n * d * d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      lhs.block(2 * i * d * d, j, d * d, 1) = vec(a.basis(j) * a.basis(i));
      lhs.block((2 * i + 1) * d * d, j, d * d, 1) = vec(a.basis(i) * a.basis(j));
    }
    rhs.segment(2 * i * d * d, d * d) = vec(a.basis(i));
    rhs.segment((2 * i + 1) * d * d, d * d) = vec(a.basis(i));
  }
  const ComplexVector c = lhs.colPivHouseholderQr().solve(rhs);
  const double residual = (lhs * c - rhs).norm();
  if (residual > std::max(tol.epsilon, 1e-8) * std::max(rhs.norm(), 1.0)) {
    throw Error(ErrorKind::NotUnital, "algebra has no unit element");
  }
  ComplexMatrix u = a.element(c);
  return 0.5 * (u + u.adjoint());
}

BlockStructure block_structure(const MatrixAlgebra& a, std::uint64_t seed, Tolerance tol) {
  const ComplexMatrix unit = algebra_unit(a, tol);
  const MatrixAlgebra z = center(a, tol);
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
    try {
      return try_block_structure(a, unit, z, s, tol);
    } catch (const SplitFailure&) {
    }
  }
  throw Error(ErrorKind::DegenerateSplit,
              "random splitting failed to separate blocks after 8 attempts");
}

double matrix_unit_defect(const BlockStructure& bs) {
  double worst = 0.0;
  ComplexMatrix sum_z = ComplexMatrix::Zero(bs.unit.rows(), bs.unit.cols());
  for (std::size_t k = 0; k < bs.blocks.size(); ++k) {
    const Block& b = bs.blocks[k];
    sum_z += b.central_projection;
    for (std::size_t l = 0; l < bs.blocks.size(); ++l) {
      const ComplexMatrix expect =
          k == l ? b.central_projection : ComplexMatrix::Zero(b.central_projection.rows(), b.central_projection.cols());
      worst = std::max(worst, max_abs(b.central_projection * bs.blocks[l].central_projection - expect));
    }
    ComplexMatrix diag_sum = ComplexMatrix::Zero(b.central_projection.rows(), b.central_projection.cols());
    for (Index i = 0; i < b.dim; ++i) {
      diag_sum += b.unit(i, i);
      for (Index j = 0; j < b.dim; ++j) {
        worst = std::max(worst, max_abs(b.unit(i, j).adjoint() - b.unit(j, i)));
        for (Index l = 0; l < b.dim; ++l) {
          for (Index m = 0; m < b.dim; ++m) {
            const ComplexMatrix prod = b.unit(i, j) * b.unit(l, m);
            const ComplexMatrix expect =
                j == l ? b.unit(i, m) : ComplexMatrix::Zero(prod.rows(), prod.cols());
            worst = std::max(worst, max_abs(prod - expect));
          }
        }
      }
    }
    worst = std::max(worst, max_abs(diag_sum - b.central_projection));
  }
  worst = std::max(worst, max_abs(sum_z - bs.unit));
  return worst;
}

}  // namespace gns
