#include "gns/dynamics.hpp"

#include <cmath>

#include "gns/statistics.hpp"

namespace gns {

AlgebraState evolve_state(const AlgebraState& omega, const ComplexMatrix& h, double t,
                          Tolerance tol) {
  require_square(h, "hamiltonian");
  if (h.rows() != omega.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "hamiltonian size differs from state dimension");
  }
  if (!is_hermitian(h, tol)) throw Error(ErrorKind::NonHermitian, "hamiltonian is not hermitian");
  const ComplexMatrix u = unitary_from_hamiltonian(h, t, tol);
  ComplexMatrix rho = u * omega.density() * u.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return AlgebraState(std::move(rho), Tolerance(std::max(tol.epsilon, 1e-9)), omega.purity_hint());
}

Trajectory restricted_trajectory(const AlgebraState& omega0, const ComplexMatrix& h,
                                 const MatrixAlgebra& a0, std::span<const double> times,
                                 std::uint64_t seed, Tolerance tol, LogBase base) {
  Trajectory tr;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorKind::DimensionMismatch, "trajectory times must increase");
    }
    const AlgebraState omega_t = evolve_state(omega0, h, times[i], tol);
    const CanonicalEntropy ce = canonical_entropy(omega_t, a0, seed, tol, base);
    std::vector<double> w = ce.spectrum(tol);
    tr.times.push_back(times[i]);
    tr.entropies.push_back(ce.entropy);
    tr.ranks.push_back(static_cast<Index>(w.size()));
    tr.weights_path.push_back(std::move(w));
    if (i > 0 && tr.ranks[i] != tr.ranks[i - 1]) {
      tr.events.push_back({i, times[i - 1], times[i], tr.ranks[i - 1], tr.ranks[i]});
    }
  }
  return tr;
}

ComplexMatrix KrausPair::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& l : maps) out += l.adjoint() * rho * l;
  return out;
}

double KrausPair::residual() const { return max_abs(apply(rho_from) - rho_to); }

namespace {

struct Support {
  std::vector<double> values;
  std::vector<ComplexVector> vectors;
};

Support support_of(const ComplexMatrix& rho, Tolerance tol) {
  const Eigensystem es = hermitian_eigensystem(0.5 * (rho + rho.adjoint()), Tolerance(1e-8));
  Support s;
  for (Index i = es.values.size(); i-- > 0;) {
    if (es.values(i) > tol.epsilon) {
      s.values.push_back(es.values(i));
      s.vectors.push_back(es.vectors.col(i));
    }
  }
  return s;
}

}  // namespace

KrausPair kraus_maps(const ComplexMatrix& rho_from, const ComplexMatrix& rho_to, Tolerance tol) {
  require_square(rho_from, "initial density");
  require_square(rho_to, "final density");
  if (rho_from.rows() != rho_to.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "densities differ in size");
  }
  const Support from = support_of(rho_from, tol);
  const Support to = support_of(rho_to, tol);
  if (to.values.size() > from.values.size()) {
    throw Error(ErrorKind::RankIncrease, "rank " + std::to_string(from.values.size()) +
                                             " cannot grow to " + std::to_string(to.values.size()));
  }

  KrausPair kp;
  kp.rho_from = rho_from;
  kp.rho_to = rho_to;
  std::vector<bool> used(from.values.size(), false);
  for (std::size_t b = 0; b < to.values.size(); ++b) {
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t a = 0; a < from.values.size(); ++a) {
      if (used[a]) continue;
      const double ov = std::abs(from.vectors[a].dot(to.vectors[b]));
      if (ov > best_overlap + 1e-12) {
        best_overlap = ov;
        best = a;
      }
    }
    used[best] = true;
    const double scale = std::sqrt(to.values[b] / from.values[best]);
    kp.maps.push_back(scale * from.vectors[best] * to.vectors[b].adjoint());
  }
  return kp;
}

ComplexMatrix fermi3_rotation_hamiltonian() {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(2, 0) = Complex(0.0, -1.0);
  h(0, 2) = Complex(0.0, 1.0);
  return h;
}

ComplexMatrix fermi3_block_density(double theta, std::uint64_t seed, Tolerance tol) {
  const AlgebraState omega = state_from_vector(fermi3_state(theta));
  return canonical_entropy(omega, fermi3_choice2_algebra(tol), seed, tol).assembled();
}

KrausPair fermi3_kraus_maps(double theta_from, double theta_to, std::uint64_t seed,
                            Tolerance tol) {
  KrausPair kp = kraus_maps(fermi3_block_density(theta_from, seed, tol),
                            fermi3_block_density(theta_to, seed, tol), tol);
  kp.theta_from = theta_from;
  kp.theta_to = theta_to;
  return kp;
}

}  // namespace gns
