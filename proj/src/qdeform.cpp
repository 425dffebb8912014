#include "gns/qdeform.hpp"

#include <cmath>

#include "gns/gns.hpp"

namespace gns {

double q_number(double s, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::NonPositiveQ, "q must be a positive real number");
  }
  const double h = 0.5 * std::log(q);
  if (h == 0.0) return s;
  // sinh form avoids cancellation near q = 1.
  return std::sinh(s * h) / std::sinh(h);
}

double q_factorial(int n, double q) {
  double f = q_number(1.0, q);
  for (int i = 2; i <= n; ++i) f *= q_number(i, q);
  return f;
}

Index QOscillatorSystem::fock_index(std::span<const Index> occupations) const {
  if (static_cast<Index>(occupations.size()) != modes) {
    throw Error(ErrorKind::DimensionMismatch, "occupation count differs from mode count");
  }
  Index idx = 0;
  for (Index n : occupations) {
    if (n < 0 || n > cutoff) throw Error(ErrorKind::DimensionMismatch, "occupation beyond cutoff");
    idx = idx * (cutoff + 1) + n;
  }
  return idx;
}

ComplexVector QOscillatorSystem::fock_state(std::span<const Index> occupations) const {
  return basis_vector(dim(), fock_index(occupations));
}

ComplexVector QOscillatorSystem::vacuum() const { return basis_vector(dim(), 0); }

namespace {

std::vector<Index> occupations_of(Index idx, Index modes, Index cutoff) {
  std::vector<Index> occ(static_cast<std::size_t>(modes));
  for (Index m = modes; m-- > 0;) {
    occ[static_cast<std::size_t>(m)] = idx % (cutoff + 1);
    idx /= cutoff + 1;
  }
  return occ;
}

}  // namespace

ComplexMatrix QOscillatorSystem::below_cutoff(Index mode) const {
  ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i) {
    if (occupations_of(i, modes, cutoff)[static_cast<std::size_t>(mode)] < cutoff) p(i, i) = 1.0;
  }
  return p;
}

ComplexMatrix QOscillatorSystem::total_at_most(std::span<const Index> which, Index total) const {
  ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i) {
    const auto occ = occupations_of(i, modes, cutoff);
    Index sum = 0;
    for (Index m : which) sum += occ.at(static_cast<std::size_t>(m));
    if (sum <= total) p(i, i) = 1.0;
  }
  return p;
}

QOscillatorSystem build_q_oscillators(Index modes, Index cutoff, double q, Index cap) {
  if (modes < 1 || cutoff < 1) {
    throw Error(ErrorKind::DimensionMismatch, "need at least one mode and cutoff >= 1");
  }
  q_number(1.0, q);
  Index dim = 1;
  for (Index m = 0; m < modes; ++m) {
    dim *= cutoff + 1;
    if (dim > cap) throw Error(ErrorKind::SizeOverflow, "Fock space exceeds size cap");
  }

  const Index levels = cutoff + 1;
  ComplexMatrix a1 = ComplexMatrix::Zero(levels, levels);
  ComplexMatrix dressed = ComplexMatrix::Zero(levels, levels);
  ComplexMatrix n1 = ComplexMatrix::Zero(levels, levels);
  for (Index k = 1; k < levels; ++k) {
    a1(k - 1, k) = std::sqrt(static_cast<double>(k));
    // a sqrt([N]_q / N) on |k> gives sqrt([k]_q) |k-1>; the N = 0 factor is 1.
    dressed(k - 1, k) = std::sqrt(q_number(static_cast<double>(k), q));
    n1(k, k) = static_cast<double>(k);
  }

  auto embed = [&](const ComplexMatrix& op, Index mode) {
    ComplexMatrix out = mode == 0 ? op : ComplexMatrix::Identity(levels, levels);
    for (Index m = 1; m < modes; ++m) {
      out = kron(out, m == mode ? op : ComplexMatrix(ComplexMatrix::Identity(levels, levels)));
    }
    return out;
  };

  QOscillatorSystem sys;
  sys.modes = modes;
  sys.cutoff = cutoff;
  sys.q = q;
  for (Index m = 0; m < modes; ++m) {
    sys.a.push_back(embed(a1, m));
    sys.A.push_back(embed(dressed, m));
    sys.A_dag.push_back(sys.A.back().adjoint());
    sys.N.push_back(embed(n1, m));
  }
  return sys;
}

UqSu2 uq_su2_generators(const QOscillatorSystem& system, Index mode_i, Index mode_j) {
  if (system.modes < 2) throw Error(ErrorKind::DimensionMismatch, "need at least two modes");
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= system.modes ||
      mode_j >= system.modes) {
    throw Error(ErrorKind::DimensionMismatch, "invalid mode pair");
  }
  const auto i = static_cast<std::size_t>(mode_i);
  const auto j = static_cast<std::size_t>(mode_j);
  return {system.A_dag[i] * system.A[j], system.A_dag[j] * system.A[i],
          0.5 * (system.N[i] - system.N[j])};
}

CartanChevalley uq_sun_generators(const QOscillatorSystem& system) {
  CartanChevalley cc;
  for (Index l = 0; l + 1 < system.modes; ++l) {
    const UqSu2 g = uq_su2_generators(system, l, l + 1);
    cc.raising.push_back(g.plus);
    cc.lowering.push_back(g.minus);
    cc.cartan.push_back(g.j3);
  }
  return cc;
}

ComplexMatrix q_power(const ComplexMatrix& h, double q, double x) {
  q_number(1.0, q);
  const double lq = std::log(q);
  return hermitian_function(h, [&](double v) { return std::exp(x * v * lq); });
}

ComplexMatrix q_number_operator(const ComplexMatrix& h, double q) {
  q_number(1.0, q);
  return hermitian_function(h, [&](double v) { return q_number(v, q); });
}

ComplexMatrix q_coproduct(UqGenerator which, const UqSu2& first, const UqSu2& second, double q) {
  const Index d1 = first.j3.rows();
  const Index d2 = second.j3.rows();
  if (which == UqGenerator::J3) {
    return kron(ComplexMatrix::Identity(d1, d1), second.j3) +
           kron(first.j3, ComplexMatrix::Identity(d2, d2));
  }
  const ComplexMatrix& x1 = which == UqGenerator::Plus ? first.plus : first.minus;
  const ComplexMatrix& x2 = which == UqGenerator::Plus ? second.plus : second.minus;
  return kron(q_power(first.j3, q, -0.5), x2) + kron(x1, q_power(second.j3, q, 0.5));
}

namespace {

QBosonSetup q_boson_space(double theta, double phi, double q) {
  QBosonSetup s;
  s.q = q;
  s.system = build_q_oscillators(3, 2, q);
  const auto& Ad = s.system.A_dag;
  const ComplexVector vac = s.system.vacuum();
  const double r2 = std::sqrt(q_number(2.0, q));

  s.basis.resize(s.system.dim(), 6);
  s.basis.col(0) = Ad[0] * Ad[0] * vac / r2;
  s.basis.col(1) = Ad[0] * Ad[1] * vac;
  s.basis.col(2) = Ad[1] * Ad[1] * vac / r2;
  s.basis.col(3) = Ad[0] * Ad[2] * vac;
  s.basis.col(4) = Ad[1] * Ad[2] * vac;
  s.basis.col(5) = Ad[2] * Ad[2] * vac / r2;

  const ComplexVector psi = (std::sin(theta) * std::cos(phi) * Ad[0] * Ad[1] +
                             std::sin(theta) * std::sin(phi) * Ad[0] * Ad[2] +
                             std::cos(theta) / r2 * Ad[2] * Ad[2]) *
                            vac;
  s.state = s.basis.adjoint() * psi;
  return s;
}

}  // namespace

ComplexVector q_boson_state(double theta, double phi, double q) {
  return q_boson_space(theta, phi, q).state;
}

QBosonSetup q_boson_setup(double theta, double phi, double q, QBosonObservables kind,
                          Tolerance tol) {
  QBosonSetup s = q_boson_space(theta, phi, q);
  std::vector<ComplexMatrix> gens;
  if (kind == QBosonObservables::Generated) {
    const UqSu2 j = uq_su2_generators(s.system, 0, 1);
    for (const ComplexMatrix* m : {&j.plus, &j.minus, &j.j3}) {
      gens.push_back(s.basis.adjoint() * (*m) * s.basis);
    }
    s.observables = generate_algebra(gens, true, tol);
  } else {
    for (Index i = 0; i < 3; ++i) {
      for (Index k = 0; k < 3; ++k) gens.push_back(matrix_unit(6, i, k));
    }
    gens.push_back(ComplexMatrix::Identity(6, 6));
    s.observables = generate_algebra(gens, true, tol);
  }
  return s;
}

MatrixAlgebra q_boson_level_observables(const QBosonSetup& setup, std::span<const Index> levels,
                                        Tolerance tol) {
  if (levels.empty()) throw Error(ErrorKind::DimensionMismatch, "levels must be non-empty");
  std::vector<ComplexMatrix> gens;
  for (Index i : levels) {
    for (Index j : levels) {
      if (i < 0 || j < 0 || i >= setup.system.modes || j >= setup.system.modes) {
        throw Error(ErrorKind::DimensionMismatch, "mode index out of range");
      }
      const ComplexMatrix op = setup.system.A_dag[static_cast<std::size_t>(i)] *
                               setup.system.A[static_cast<std::size_t>(j)];
      gens.push_back(setup.basis.adjoint() * op * setup.basis);
    }
  }
  return generate_algebra(gens, true, tol);
}

QBosonResult q_boson_example(double theta, double phi, double q, Tolerance tol,
                             std::uint64_t seed, QBosonObservables kind) {
  const QBosonSetup s = q_boson_setup(theta, phi, q, kind, tol);
  const AlgebraState omega = state_from_vector(s.state);
  const RestrictedState restricted = restrict_state(omega, s.observables);
  QBosonResult r;
  r.entropy = canonical_entropy(restricted, seed, tol).entropy;
  r.gns_dimension = build_gns(restricted, tol).dimension();
  r.algebra_dimension = s.observables.dim();
  return r;
}

}  // namespace gns
