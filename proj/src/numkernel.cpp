#include "gns/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gns {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotUnital: return "NotUnital";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NonPositiveQ: return "NonPositiveQ";
    case ErrorKind::RankIncrease: return "RankIncrease";
    case ErrorKind::InvalidParity: return "InvalidParity";
    case ErrorKind::CornerViolation: return "CornerViolation";
    case ErrorKind::NotProjector: return "NotProjector";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

namespace {

// Phase-fix a unit vector: first component above the cut becomes real positive.
void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double cut = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > cut) {
      v *= std::conj(v(i)) / a;
      return;
    }
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix");
  }
}

bool is_hermitian(const ComplexMatrix& m, Tolerance tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix diff = m - m.adjoint();
  return max_abs(diff) <= tol.epsilon * std::max(max_abs(m), 1.0);
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m, Tolerance tol) {
  require_square(m, "hermitian_eigensystem input");
  if (!is_hermitian(m, tol)) {
    throw Error(ErrorKind::NonHermitian, "hermitian_eigensystem input is not hermitian");
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  Eigensystem out{solver.eigenvalues(), solver.eigenvectors()};
  for (Index c = 0; c < out.vectors.cols(); ++c) fix_phase(out.vectors.col(c));
  return out;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, Tolerance tol) {
  const Index cols = m.cols();
  if (cols == 0) return ComplexMatrix(0, 0);
  if (m.rows() == 0) return ComplexMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Index rank = 0;
  if (smax > 0.0) {
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol.epsilon * smax) ++rank;
    }
  }
  ComplexMatrix kernel = svd.matrixV().rightCols(cols - rank);
  for (Index c = 0; c < kernel.cols(); ++c) fix_phase(kernel.col(c));
  return kernel;
}

Index numerical_rank(const ComplexMatrix& m, Tolerance tol) {
  return m.cols() - kernel_basis(m, tol).cols();
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

std::vector<ComplexMatrix> orthonormalize(std::span<const ComplexMatrix> vectors,
                                          const InnerProduct& inner, Tolerance tol) {
  std::vector<ComplexMatrix> out;
  for (const auto& v : vectors) {
    const double norm0 = std::sqrt(std::max(inner(v, v).real(), 0.0));
    if (norm0 <= tol.epsilon) continue;
    ComplexMatrix r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) r -= inner(q, r) * q;
    }
    const double norm = std::sqrt(std::max(inner(r, r).real(), 0.0));
    if (norm <= tol.epsilon * std::max(norm0, 1.0)) continue;
    out.push_back(r / norm);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix matrix_unit(Index d, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

ComplexVector basis_vector(Index d, Index i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f,
                                 Tolerance tol) {
  const Eigensystem es = hermitian_eigensystem(h, tol);
  ComplexVector fv(es.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(es.values(i));
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t, Tolerance tol) {
  const Eigensystem es = hermitian_eigensystem(h, tol);
  ComplexVector phases(es.values.size());
  for (Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * es.values(i));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double SeededGaussian::uniform_open() {
  // 53 random bits mapped into (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededGaussian::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

ComplexMatrix SeededGaussian::hermitian(Index d) {
  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double re = (*this)();
      const double im = (*this)();
      g(i, j) = Complex(re, im);
    }
  }
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix SeededGaussian::unitary(Index d) {
  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double re = (*this)();
      const double im = (*this)();
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < d; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

ComplexVector SeededGaussian::unit_vector(Index d) {
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) {
    const double re = (*this)();
    const double im = (*this)();
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

}  // namespace gns
