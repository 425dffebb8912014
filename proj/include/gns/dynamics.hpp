#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gns/quantum_state.hpp"

namespace gns {

/// rho(t) = e^{itH} rho e^{-itH}.
AlgebraState evolve_state(const AlgebraState& omega, const ComplexMatrix& h, double t,
                          Tolerance tol = {});

struct RankEvent {
  std::size_t index = 0;  // sample where the new rank is first seen
  double time_before = 0.0;
  double time_after = 0.0;
  Index rank_before = 0;
  Index rank_after = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> entropies;
  std::vector<Index> ranks;
  std::vector<std::vector<double>> weights_path;  // canonical spectrum per sample
  std::vector<RankEvent> events;
};

/// Evolve, restrict to `a0`, take the canonical entropy, at every time. Times
/// must increase strictly.
Trajectory restricted_trajectory(const AlgebraState& omega0, const ComplexMatrix& h,
                                 const MatrixAlgebra& a0, std::span<const double> times,
                                 std::uint64_t seed, Tolerance tol = {},
                                 LogBase base = LogBase::Natural);

struct KrausPair {
  double theta_from = 0.0;
  double theta_to = 0.0;
  ComplexMatrix rho_from;
  ComplexMatrix rho_to;
  std::vector<ComplexMatrix> maps;

  /// sum_a Lambda_a^dag rho_from Lambda_a
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// Largest entry of apply(rho_from) - rho_to.
  double residual() const;
};

/// Maps Lambda_a = sqrt(l'_a / l_a) |chi_a><chi'_a| pairing each nonzero
/// eigenvector of rho_to with a distinct nonzero eigenvector of rho_from
/// (greedy by overlap). Throws RankIncrease when rho_to has larger rank.
KrausPair kraus_maps(const ComplexMatrix& rho_from, const ComplexMatrix& rho_to,
                     Tolerance tol = {});

/// H = -i|f3><f1| + i|f1><f3| on the two-fermion C^3 sector; it rotates
/// cos(theta) f1 + sin(theta) f3 into angle theta + t.
ComplexMatrix fermi3_rotation_hamiltonian();

/// Canonical block density of the rotating two-fermion state restricted to the
/// e1, e2 observables.
ComplexMatrix fermi3_block_density(double theta, std::uint64_t seed, Tolerance tol = {});

KrausPair fermi3_kraus_maps(double theta_from, double theta_to, std::uint64_t seed,
                            Tolerance tol = {});

}  // namespace gns
