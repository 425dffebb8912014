#include "gns/restrictions.hpp"

#include <cmath>

#include "gns/gns.hpp"

namespace gns {

namespace {

double check_scale(Tolerance tol) { return std::max(tol.epsilon, 1e-12) * 100.0; }

Eigen::VectorXcd vec(const ComplexMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

ParitySetup parity_commutant_setup(const ComplexMatrix& parity, Tolerance tol) {
  ParitySetup s;
  s.parity = parity;
  const std::vector<ComplexMatrix> ops = {parity};
  s.even_subalgebra = relative_commutant(ops, nullptr, tol);
  validate_parity(s, tol);
  return s;
}

void validate_parity(const ParitySetup& setup, Tolerance tol) {
  const ComplexMatrix& p = setup.parity;
  if (p.rows() != p.cols()) throw Error(ErrorKind::InvalidParity, "parity must be square");
  const Index n = p.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const double eps = check_scale(tol);
  if (max_abs(p - p.adjoint()) > eps || max_abs(p * p - id) > eps) {
    throw Error(ErrorKind::InvalidParity, "parity must satisfy P = P^dag and P^2 = 1");
  }
  if (setup.even_subalgebra.ambient_dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, "even algebra size differs from parity");
  }
  for (const auto& b : setup.even_subalgebra.basis()) {
    if (max_abs(p * b - b * p) > eps) {
      throw Error(ErrorKind::InvalidParity, "observable algebra contains a parity-odd element");
    }
  }
  for (const auto& a : setup.odd_elements) {
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "odd element size differs from parity");
    }
    if (max_abs(p * a * p + a) > eps) {
      throw Error(ErrorKind::InvalidParity, "supplied odd element is not parity-odd");
    }
  }
  if (!setup.corners) return;
  const ComplexMatrix& up = setup.corners->plus;
  const ComplexMatrix& um = setup.corners->minus;
  if (up.rows() != n || um.rows() != n || up.cols() != n || um.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "corner size differs from parity");
  }
  if (max_abs(up + um - id) > eps || max_abs(up * um) > eps || max_abs(up * up - up) > eps ||
      max_abs(up - up.adjoint()) > eps) {
    throw Error(ErrorKind::CornerViolation, "corners must be complementary projections");
  }
  for (const auto& a : setup.odd_elements) {
    if (max_abs(up * a) > eps || max_abs(a * up) > eps) {
      throw Error(ErrorKind::CornerViolation, "1+ does not annihilate an odd element");
    }
  }
}

ParityReport parity_restriction_vs_average(const AlgebraState& omega, const ParitySetup& setup,
                                           std::uint64_t seed, Tolerance tol) {
  validate_parity(setup, tol);
  if (omega.ambient_dim() != setup.parity.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "state size differs from parity");
  }
  const ComplexMatrix& p = setup.parity;
  const AlgebraState averaged(0.5 * (omega.density() + p * omega.density() * p), tol);

  const RestrictedState r = restrict_state(omega, setup.even_subalgebra);
  const RestrictedState ra = restrict_state(averaged, setup.even_subalgebra);

  ParityReport rep;
  rep.algebra_dimension = setup.even_subalgebra.dim();
  for (const auto& b : setup.even_subalgebra.basis()) {
    rep.max_deviation = std::max(rep.max_deviation, std::abs(evaluate(omega, b) - evaluate(averaged, b)));
  }
  rep.restricted_entropy = canonical_entropy(r, seed, tol).entropy;
  rep.averaged_entropy = canonical_entropy(ra, seed, tol).entropy;
  if (setup.corners) {
    rep.corner_weights = std::array<double, 2>{evaluate(omega, setup.corners->plus).real(),
                                               evaluate(omega, setup.corners->minus).real()};
  }
  return rep;
}

MatrixAlgebra relative_commutant(std::span<const ComplexMatrix> ops, const MatrixAlgebra* within,
                                 Tolerance tol) {
  if (ops.empty()) throw Error(ErrorKind::DimensionMismatch, "need at least one operator");
  const Index n = ops.front().rows();
  MatrixAlgebra full;
  if (!within) full = full_matrix_algebra(n);
  const MatrixAlgebra& host = within ? *within : full;
  if (host.ambient_dim() != n) throw Error(ErrorKind::DimensionMismatch, "algebra size differs");

  // Column i of the stacked map is vec([b_i, x]) for every x in ops.
  const Index m = host.dim();
  ComplexMatrix map(n * n * static_cast<Index>(ops.size()), m);
  for (Index i = 0; i < m; ++i) {
    const ComplexMatrix& b = host.basis(i);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k].rows() != n || ops[k].cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "operator size differs");
      }
      map.block(static_cast<Index>(k) * n * n, i, n * n, 1) = vec(b * ops[k] - ops[k] * b);
    }
  }
  const ComplexMatrix ker = kernel_basis(map, tol);
  std::vector<ComplexMatrix> elems;
  for (Index c = 0; c < ker.cols(); ++c) elems.push_back(host.element(ker.col(c)));
  return MatrixAlgebra(n, elems, tol);
}

CollapseReport measurement_restriction(const AlgebraState& omega, const ComplexMatrix& p,
                                       std::uint64_t seed, Tolerance tol,
                                       const MatrixAlgebra* within) {
  const Index n = omega.ambient_dim();
  if (p.rows() != n || p.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "projector size differs from state");
  }
  const double eps = check_scale(tol);
  const double tr = p.trace().real();
  if (max_abs(p - p.adjoint()) > eps || max_abs(p * p - p) > eps || tr < 0.5 ||
      tr > static_cast<double>(n) - 0.5) {
    throw Error(ErrorKind::NotProjector, "need p = p^2 = p^dag with 0 < Tr p < dim");
  }
  const ComplexMatrix q = ComplexMatrix::Identity(n, n) - p;

  CollapseReport rep;
  const std::vector<ComplexMatrix> ops = {p};
  rep.observables = relative_commutant(ops, within, tol);
  rep.collapsed = p * omega.density() * p + q * omega.density() * q;
  const AlgebraState collapsed(rep.collapsed, Tolerance(std::max(tol.epsilon, 1e-9)));
  for (const auto& b : rep.observables.basis()) {
    rep.max_deviation = std::max(rep.max_deviation, std::abs(evaluate(omega, b) - evaluate(collapsed, b)));
  }
  const RestrictedState r = restrict_state(omega, rep.observables);
  rep.restricted_entropy = canonical_entropy(r, seed, tol).entropy;
  rep.collapsed_entropy = von_neumann_entropy(rep.collapsed, LogBase::Natural, tol);
  rep.weights = {evaluate(omega, p).real(), evaluate(omega, q).real()};
  rep.gns_dimension = build_gns(r, tol).dimension();
  return rep;
}

}  // namespace gns
