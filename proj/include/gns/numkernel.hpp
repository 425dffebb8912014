#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gns/error.hpp"

namespace gns {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative threshold for every rank and zero decision in the library.
struct Tolerance {
  double epsilon = 1e-10;

  constexpr Tolerance() = default;
  explicit Tolerance(double eps) : epsilon(eps) {
    if (!(eps >= 0.0)) throw Error(ErrorKind::DimensionMismatch, "tolerance must be non-negative");
  }
};

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns, phase fixed
};

/// Eigen-decomposition of a hermitian matrix. Eigenvalues ascend; each
/// eigenvector has its first non-negligible component real and positive.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m, Tolerance tol = {});

/// Orthonormal columns spanning the numerical null space of `m`.
ComplexMatrix kernel_basis(const ComplexMatrix& m, Tolerance tol = {});

/// Number of singular values above tol * (largest singular value).
Index numerical_rank(const ComplexMatrix& m, Tolerance tol = {});

using InnerProduct = std::function<Complex(const ComplexMatrix&, const ComplexMatrix&)>;

/// Tr(a^dagger b); Euclidean for column vectors.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Gram-Schmidt (two passes) under `inner`. Vectors whose residual norm falls
/// below tol relative to their own norm are dropped.
std::vector<ComplexMatrix> orthonormalize(std::span<const ComplexMatrix> vectors,
                                          const InnerProduct& inner = hs_inner,
                                          Tolerance tol = {});

// ---------------------------------------------------------------------------
// Small helpers shared across modules.

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix unit |i><j| in dimension d (zero-based).
ComplexMatrix matrix_unit(Index d, Index i, Index j);

ComplexVector basis_vector(Index d, Index i);

double max_abs(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, Tolerance tol = {});

void require_square(const ComplexMatrix& m, const char* what);

/// exp(i * t * H) for hermitian H, by spectral calculus.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t, Tolerance tol = {});

/// f(H) for hermitian H, applied to the eigenvalues.
ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f,
                                 Tolerance tol = {});

/// Platform-independent normal deviates: mt19937_64 feeding Box-Muller.
/// std::normal_distribution is implementation-defined, so it is avoided.
class SeededGaussian {
 public:
  explicit SeededGaussian(std::uint64_t seed) : engine_(seed) {}

  double operator()();

  ComplexMatrix hermitian(Index d);
  ComplexMatrix unitary(Index d);
  ComplexVector unit_vector(Index d);

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gns
