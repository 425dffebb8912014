#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gns/statistics.hpp"

namespace gns {

/// [s]_q = (q^{s/2} - q^{-s/2}) / (q^{1/2} - q^{-1/2}); equals s at q = 1.
/// Throws NonPositiveQ unless q > 0.
double q_number(double s, double q);

/// [n]_q! = [n]_q [n-1]_q ... [1]_q, with [0]_q! = 1.
double q_factorial(int n, double q);

/// n commuting q-oscillators on the truncated Fock space with occupations
/// 0..cutoff per mode. Mode 0 is the most significant tensor factor.
struct QOscillatorSystem {
  Index modes = 0;
  Index cutoff = 0;
  double q = 1.0;
  std::vector<ComplexMatrix> a;      // undeformed lowering operators
  std::vector<ComplexMatrix> A;      // dressed: A = a sqrt([N]_q / N)
  std::vector<ComplexMatrix> A_dag;
  std::vector<ComplexMatrix> N;

  Index dim() const noexcept { return N.empty() ? 0 : N.front().rows(); }
  Index fock_index(std::span<const Index> occupations) const;
  ComplexVector fock_state(std::span<const Index> occupations) const;
  ComplexVector vacuum() const;
  /// Projector onto Fock states with fewer than `cutoff` quanta in `mode`.
  ComplexMatrix below_cutoff(Index mode) const;
  /// Projector onto Fock states whose quanta in the listed modes sum to at most `total`.
  ComplexMatrix total_at_most(std::span<const Index> modes, Index total) const;
};

QOscillatorSystem build_q_oscillators(Index modes, Index cutoff, double q,
                                      Index cap = kDefaultSizeCap);

/// Schwinger generators J+ = A_i^dag A_j, J- = A_j^dag A_i, J3 = (N_i - N_j)/2.
struct UqSu2 {
  ComplexMatrix plus;
  ComplexMatrix minus;
  ComplexMatrix j3;
};

UqSu2 uq_su2_generators(const QOscillatorSystem& system, Index mode_i = 0, Index mode_j = 1);

/// Cartan-Chevalley generators of U_q(su(n)) on n modes: E_l = A_l^dag A_{l+1},
/// F_l = A_{l+1}^dag A_l, H_l = (N_l - N_{l+1}) / 2 for l < n - 1.
struct CartanChevalley {
  std::vector<ComplexMatrix> raising;
  std::vector<ComplexMatrix> lowering;
  std::vector<ComplexMatrix> cartan;
};

CartanChevalley uq_sun_generators(const QOscillatorSystem& system);

/// q^{x H} for hermitian H.
ComplexMatrix q_power(const ComplexMatrix& h, double q, double x);
/// [H]_q for hermitian H.
ComplexMatrix q_number_operator(const ComplexMatrix& h, double q);

enum class UqGenerator { Plus, Minus, J3 };

/// Two-particle coproduct on the tensor product of the two generator spaces:
/// Delta(J+-) = q^{-J3/2} (x) J+- + J+- (x) q^{J3/2}, Delta(J3) = 1 (x) J3 + J3 (x) 1.
ComplexMatrix q_coproduct(UqGenerator which, const UqSu2& first, const UqSu2& second, double q);

enum class QBosonObservables {
  /// Algebra generated by the q-Schwinger generators of modes 1, 2 on the
  /// two-quantum sector, plus the identity (blocks 3 + 2 + 1, dimension 14).
  Generated,
  /// Literal span of the triplet matrix units plus the identity (dimension 10).
  TripletSpan,
};

struct QBosonSetup {
  double q = 1.0;
  QOscillatorSystem system;
  ComplexMatrix basis;  // 27 x 6 columns |1>,|0>,|-1>,|1/2>,|-1/2>,|0~>
  ComplexVector state;  // coordinates on `basis`
  MatrixAlgebra observables;
};

QBosonSetup q_boson_setup(double theta, double phi, double q,
                          QBosonObservables kind = QBosonObservables::Generated,
                          Tolerance tol = {});

/// Coordinates of the q-boson family state on the basis of q_boson_setup.
ComplexVector q_boson_state(double theta, double phi, double q);

/// Algebra generated by A_i^dag A_j for modes i, j in `levels` (zero-based),
/// compressed to the two-quantum sector of `setup`, plus the identity.
MatrixAlgebra q_boson_level_observables(const QBosonSetup& setup, std::span<const Index> levels,
                                        Tolerance tol = {});

struct QBosonResult {
  double entropy = 0.0;
  Index gns_dimension = 0;
  Index algebra_dimension = 0;
};

QBosonResult q_boson_example(double theta, double phi, double q, Tolerance tol = {},
                             std::uint64_t seed = 42,
                             QBosonObservables kind = QBosonObservables::Generated);

}  // namespace gns
