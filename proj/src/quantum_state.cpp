#include "gns/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gns {

namespace {

double log_in(double x, LogBase base) {
  return base == LogBase::Two ? std::log2(x) : std::log(x);
}

}  // namespace

AlgebraState::AlgebraState(ComplexMatrix density, Tolerance tol, std::optional<bool> purity_hint)
    : density_(std::move(density)), purity_hint_(purity_hint) {
  if (density_.rows() != density_.cols() || density_.rows() == 0) {
    throw Error(ErrorKind::NotDensity, "density must be a non-empty square matrix");
  }
  const double scale = std::max(max_abs(density_), 1.0);
  if (!is_hermitian(density_, tol)) throw Error(ErrorKind::NotDensity, "density is not hermitian");
  const Complex tr = density_.trace();
  if (std::abs(tr - 1.0) > std::max(tol.epsilon, 1e-12) * density_.rows() * scale) {
    throw Error(ErrorKind::NotDensity, "density does not have unit trace");
  }
  const Eigensystem es = hermitian_eigensystem(density_, tol);
  if (es.values(0) < -std::max(tol.epsilon, 1e-12) * scale) {
    throw Error(ErrorKind::NotDensity, "density has a negative eigenvalue");
  }
}

AlgebraState state_from_vector(const ComplexVector& psi, Index dim) {
  if (psi.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "state vector length differs from dimension");
  }
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::ZeroVector, "cannot build a state from the zero vector");
  const ComplexVector unit = psi / n;
  ComplexMatrix rho = unit * unit.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return AlgebraState(std::move(rho), Tolerance{}, true);
}

Complex evaluate(const AlgebraState& omega, const ComplexMatrix& a) {
  if (a.rows() != omega.ambient_dim() || a.cols() != omega.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "observable dimension differs from state dimension");
  }
  return (omega.density() * a).trace();
}

Complex RestrictedState::evaluate(const ComplexMatrix& a) const {
  return (subalgebra.coordinates(a).array() * values.array()).sum();
}

double RestrictedState::star_defect() const {
  double worst = 0.0;
  for (Index i = 0; i < subalgebra.dim(); ++i) {
    const Complex lhs = evaluate(subalgebra.basis(i).adjoint());
    worst = std::max(worst, std::abs(lhs - std::conj(values(i))));
  }
  return worst;
}

RestrictedState restrict_state(const AlgebraState& omega, const MatrixAlgebra& subalgebra) {
  if (subalgebra.ambient_dim() != omega.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "subalgebra and state live in different dimensions");
  }
  RestrictedState out{subalgebra, ComplexVector(subalgebra.dim())};
  for (Index i = 0; i < subalgebra.dim(); ++i) out.values(i) = evaluate(omega, subalgebra.basis(i));
  return out;
}

double von_neumann_entropy(const ComplexMatrix& density, LogBase base, Tolerance tol) {
  if (density.rows() != density.cols() || density.rows() == 0) {
    throw Error(ErrorKind::NotDensity, "density must be a non-empty square matrix");
  }
  if (!is_hermitian(density, tol)) throw Error(ErrorKind::NotDensity, "density is not hermitian");
  if (std::abs(density.trace() - 1.0) > std::max(tol.epsilon, 1e-12) * density.rows()) {
    throw Error(ErrorKind::NotDensity, "density does not have unit trace");
  }
  const Eigensystem es = hermitian_eigensystem(density, tol);
  if (es.values(0) < -std::max(tol.epsilon, 1e-12)) {
    throw Error(ErrorKind::NotDensity, "density has a negative eigenvalue");
  }
  double s = 0.0;
  for (Index i = 0; i < es.values.size(); ++i) {
    const double l = es.values(i);
    if (l > tol.epsilon) s -= l * log_in(l, base);
  }
  return std::max(s, 0.0);
}

double shannon_entropy(std::span<const double> weights, LogBase base, Tolerance tol) {
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  if (!(total > 0.0)) return 0.0;
  double s = 0.0;
  for (double w : weights) {
    const double p = w / total;
    if (p > tol.epsilon) s -= p * log_in(p, base);
  }
  return std::max(s, 0.0);
}

ComplexMatrix CanonicalEntropy::assembled() const {
  Index n = 0;
  for (const auto& b : block_densities) n += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Index offset = 0;
  for (const auto& b : block_densities) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  const double tr = out.trace().real();
  if (tr > 0.0) out /= tr;
  return out;
}

std::vector<double> CanonicalEntropy::spectrum(Tolerance tol) const {
  const ComplexMatrix rho = assembled();
  const Eigensystem es = hermitian_eigensystem(0.5 * (rho + rho.adjoint()), Tolerance(1e-8));
  std::vector<double> out;
  for (Index i = es.values.size(); i-- > 0;) {
    if (es.values(i) > tol.epsilon) out.push_back(es.values(i));
  }
  return out;
}

Index CanonicalEntropy::rank(Tolerance tol) const {
  return static_cast<Index>(spectrum(tol).size());
}

CanonicalEntropy canonical_entropy(const RestrictedState& omega0, std::uint64_t seed,
                                   Tolerance tol, LogBase base) {
  return canonical_entropy(block_structure(omega0.subalgebra, seed, tol), omega0, tol, base);
}

CanonicalEntropy canonical_entropy(const BlockStructure& bs, const RestrictedState& omega0,
                                   Tolerance tol, LogBase base) {
  CanonicalEntropy out;
  out.unit_value = omega0.evaluate(bs.unit).real();
  for (const auto& block : bs.blocks) {
    ComplexMatrix rho(block.dim, block.dim);
    for (Index i = 0; i < block.dim; ++i) {
      for (Index j = 0; j < block.dim; ++j) rho(i, j) = omega0.evaluate(block.unit(j, i));
    }
    rho = (0.5 * (rho + rho.adjoint())).eval();
    out.block_weights.push_back(rho.trace().real());
    out.block_dims.push_back(block.dim);
    out.block_densities.push_back(std::move(rho));
  }
  const std::vector<double> spec = out.spectrum(tol);
  out.entropy = shannon_entropy(spec, base, tol);
  return out;
}

CanonicalEntropy canonical_entropy(const AlgebraState& omega, const MatrixAlgebra& subalgebra,
                                   std::uint64_t seed, Tolerance tol, LogBase base) {
  return canonical_entropy(restrict_state(omega, subalgebra), seed, tol, base);
}

}  // namespace gns
