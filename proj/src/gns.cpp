#include "gns/gns.hpp"

#include <algorithm>
#include <cmath>

namespace gns {

namespace {

// (L_a)_ij = <b_i, a b_j>: left multiplication in algebra coordinates.
ComplexMatrix left_multiplication(const MatrixAlgebra& alg, const ComplexMatrix& a) {
  const Index n = alg.dim();
  ComplexMatrix l(n, n);
  for (Index j = 0; j < n; ++j) l.col(j) = alg.coordinates(a * alg.basis(j));
  return l;
}

ComplexMatrix range_of(const ComplexMatrix& p) {
  const Eigensystem es = hermitian_eigensystem(0.5 * (p + p.adjoint()), Tolerance(1e-8));
  std::vector<Index> keep;
  for (Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > 0.5) keep.push_back(i);
  }
  ComplexMatrix out(p.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Index>(c)) = es.vectors.col(keep[c]);
  return out;
}

struct SplitFailure {};

void random_split(const GnsRepresentation& gns, const MatrixAlgebra& rep,
                  const BlockStructure& bs, std::uint64_t seed, Tolerance tol,
                  GnsDecomposition& out) {
  const MatrixAlgebra comm = commutant(rep, tol);
  SeededGaussian rng(seed);
  ComplexMatrix h = ComplexMatrix::Zero(rep.ambient_dim(), rep.ambient_dim());
  for (const auto& b : comm.basis()) h += rng() * b;
  h = (0.5 * (h + h.adjoint())).eval();
  for (std::size_t k = 0; k < bs.blocks.size(); ++k) {
    const Block& block = bs.blocks[k];
    const ComplexMatrix range = range_of(block.central_projection);
    const ComplexMatrix hk = range.adjoint() * h * range;
    const Eigensystem es = hermitian_eigensystem(0.5 * (hk + hk.adjoint()), Tolerance(1e-8));
    const double scale = std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
    Index start = 0;
    for (Index i = 1; i <= es.values.size(); ++i) {
      const bool boundary = i == es.values.size() || es.values(i) - es.values(i - 1) > 1e-7 * scale;
      if (!boundary) continue;
      if (i < es.values.size() && es.values(i) - es.values(i - 1) < 1e-3 * scale) throw SplitFailure{};
      if (i - start != block.dim) throw SplitFailure{};
      const ComplexMatrix w = range * es.vectors.middleCols(start, i - start);
      const ComplexMatrix p = w * w.adjoint();
      out.projectors.push_back(p);
      out.weights.push_back((p * gns.cyclic).squaredNorm());
      out.block_of.push_back(static_cast<Index>(k));
      start = i;
    }
  }
}

}  // namespace

ComplexMatrix GnsRepresentation::represent(const ComplexMatrix& a) const {
  const ComplexVector c = source.coordinates(a);
  ComplexMatrix out = ComplexMatrix::Zero(dimension(), dimension());
  for (Index i = 0; i < c.size(); ++i) out += c(i) * rep_matrices[static_cast<std::size_t>(i)];
  return out;
}

MatrixAlgebra GnsRepresentation::represented_algebra(Tolerance tol) const {
  return MatrixAlgebra(dimension(), rep_matrices, tol);
}

GnsRepresentation build_gns(const RestrictedState& omega0, Tolerance tol) {
  const MatrixAlgebra& alg = omega0.subalgebra;
  const Index n = alg.dim();
  GnsRepresentation g{alg, omega0, ComplexMatrix(n, n), {}, {}, {}, {}, {}};

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      g.gram(i, j) = omega0.evaluate(alg.basis(i).adjoint() * alg.basis(j));
    }
  }
  g.gram = (0.5 * (g.gram + g.gram.adjoint())).eval();

  const Eigensystem es = hermitian_eigensystem(g.gram, Tolerance(std::max(tol.epsilon, 1e-8)));
  const double top = std::max(es.values.size() > 0 ? es.values.maxCoeff() : 0.0, 0.0);
  const double cut = tol.epsilon * std::max(top, 1e-300);
  if (es.values.size() > 0 && es.values(0) < -std::max(cut, 1e-12)) {
    throw Error(ErrorKind::NotPositive, "Gram matrix has a negative eigenvalue");
  }
  std::vector<Index> null_cols, pos_cols;
  for (Index i = 0; i < es.values.size(); ++i) {
    (es.values(i) > cut ? pos_cols : null_cols).push_back(i);
  }
  g.ideal_basis.resize(n, static_cast<Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) {
    g.ideal_basis.col(static_cast<Index>(c)) = es.vectors.col(null_cols[c]);
  }
  // Largest Gram eigenvalues first.
  std::reverse(pos_cols.begin(), pos_cols.end());
  g.quotient_basis.resize(n, static_cast<Index>(pos_cols.size()));
  for (std::size_t c = 0; c < pos_cols.size(); ++c) {
    g.quotient_basis.col(static_cast<Index>(c)) =
        es.vectors.col(pos_cols[c]) / std::sqrt(es.values(pos_cols[c]));
  }

  const ComplexMatrix metric_dual = g.quotient_basis.adjoint() * g.gram;
  for (Index i = 0; i < n; ++i) {
    const ComplexMatrix l = left_multiplication(alg, alg.basis(i));
    g.rep_matrices.push_back(metric_dual * l * g.quotient_basis);
  }

  g.unit_coordinates = alg.coordinates(algebra_unit(alg, tol));
  g.cyclic = metric_dual * g.unit_coordinates;
  return g;
}

GnsRepresentation build_gns(const AlgebraState& omega, const MatrixAlgebra& subalgebra,
                            Tolerance tol) {
  return build_gns(restrict_state(omega, subalgebra), tol);
}

GnsDecomposition decompose(const GnsRepresentation& gns, DecompositionMode mode,
                           std::uint64_t seed, Tolerance tol) {
  const MatrixAlgebra rep = gns.represented_algebra(tol);
  const BlockStructure bs = block_structure(rep, seed, tol);

  auto fresh = [&] {
    GnsDecomposition out;
    out.kind = mode;
    out.cyclic_norm_squared = gns.cyclic.squaredNorm();
    for (const auto& b : bs.blocks) {
      out.block_dims.push_back(b.dim);
      out.block_multiplicities.push_back(b.multiplicity);
    }
    return out;
  };

  switch (mode) {
    case DecompositionMode::IsotypicOnly: {
      GnsDecomposition out = fresh();
      for (std::size_t k = 0; k < bs.blocks.size(); ++k) {
        const ComplexMatrix& z = bs.blocks[k].central_projection;
        out.projectors.push_back(z);
        out.weights.push_back((z * gns.cyclic).squaredNorm());
        out.block_of.push_back(static_cast<Index>(k));
      }
      return out;
    }
    case DecompositionMode::CanonicalSchmidt: {
      GnsDecomposition out = fresh();
      for (std::size_t k = 0; k < bs.blocks.size(); ++k) {
        const Block& block = bs.blocks[k];
        // H_k = C^d (x) C^m with basis E_i1 f_mu, f_mu spanning range(E_11).
        const ComplexMatrix f = range_of(block.unit(0, 0));
        const Index m = f.cols();
        ComplexMatrix coeff(block.dim, m);
        for (Index i = 0; i < block.dim; ++i) {
          coeff.row(i) = (f.adjoint() * block.unit(0, i) * gns.cyclic).transpose();
        }
        Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeFullV);
        const ComplexMatrix& v = svd.matrixV();
        for (Index j = 0; j < m; ++j) {
          const ComplexVector gvec = f * v.col(j).conjugate();
          ComplexMatrix q = ComplexMatrix::Zero(gns.dimension(), gns.dimension());
          for (Index i = 0; i < block.dim; ++i) {
            const ComplexVector u = block.unit(i, 0) * gvec;
            q += u * u.adjoint();
          }
          out.projectors.push_back(q);
          out.weights.push_back((q * gns.cyclic).squaredNorm());
          out.block_of.push_back(static_cast<Index>(k));
        }
      }
      return out;
    }
    case DecompositionMode::RandomSplit: {
      for (int attempt = 0; attempt < 8; ++attempt) {
        GnsDecomposition out = fresh();
        try {
          random_split(gns, rep, bs, seed + 0x51ED27ULL * static_cast<std::uint64_t>(attempt + 1),
                       tol, out);
          return out;
        } catch (const SplitFailure&) {
        }
      }
      throw Error(ErrorKind::DegenerateSplit, "random irreducible split failed after 8 attempts");
    }
  }
  throw Error(ErrorKind::SchemaError, "unknown decomposition mode");
}

double gns_entropy(const GnsDecomposition& decomposition, LogBase base, Tolerance tol) {
  return shannon_entropy(decomposition.weights, base, tol);
}

double GnsDiagnostics::max_deviation() const {
  return std::max({homomorphism, star, reconstruction});
}

GnsDiagnostics verify_gns(const GnsRepresentation& gns, Tolerance tol) {
  GnsDiagnostics d;
  d.dimension = gns.dimension();
  const MatrixAlgebra& alg = gns.source;
  for (Index i = 0; i < alg.dim(); ++i) {
    const ComplexMatrix& pi = gns.rep_matrices[static_cast<std::size_t>(i)];
    d.star = std::max(d.star, max_abs(gns.represent(alg.basis(i).adjoint()) - pi.adjoint()));
    const Complex expect = gns.state.values(i);
    d.reconstruction =
        std::max(d.reconstruction, std::abs(expect - gns.cyclic.dot(pi * gns.cyclic)));
    for (Index j = 0; j < alg.dim(); ++j) {
      const ComplexMatrix& pj = gns.rep_matrices[static_cast<std::size_t>(j)];
      d.homomorphism = std::max(
          d.homomorphism, max_abs(gns.represent(alg.basis(i) * alg.basis(j)) - pi * pj));
    }
  }
  if (d.dimension > 0) {
    ComplexMatrix orbit(d.dimension, alg.dim());
    for (Index i = 0; i < alg.dim(); ++i) {
      orbit.col(i) = gns.rep_matrices[static_cast<std::size_t>(i)] * gns.cyclic;
    }
    d.cyclic_rank = numerical_rank(orbit, Tolerance(std::max(tol.epsilon, 1e-8)));
  }
  return d;
}

}  // namespace gns
