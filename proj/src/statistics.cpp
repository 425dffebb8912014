#include "gns/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gns {

namespace {

Index checked_power(Index d, Index k, Index cap) {
  if (d < 1 || k < 1) throw Error(ErrorKind::DimensionMismatch, "need d >= 1 and k >= 1");
  Index n = 1;
  for (Index i = 0; i < k; ++i) {
    n *= d;
    if (n > cap) {
      throw Error(ErrorKind::SizeOverflow, "tensor power exceeds size cap of " + std::to_string(cap));
    }
  }
  return n;
}

Index tensor_index(std::span<const Index> levels, Index d) {
  Index idx = 0;
  for (Index l : levels) idx = idx * d + l;
  return idx;
}

int permutation_sign(std::span<const Index> perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

// Operator permuting tensor factors: factor p of the input lands at position perm[p].
ComplexMatrix permutation_operator(Index d, std::span<const Index> perm) {
  const Index k = static_cast<Index>(perm.size());
  const Index n = checked_power(d, k, std::numeric_limits<Index>::max());
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  std::vector<Index> in(static_cast<std::size_t>(k)), out(static_cast<std::size_t>(k));
  for (Index idx = 0; idx < n; ++idx) {
    Index rest = idx;
    for (Index pos = k; pos-- > 0;) {
      in[static_cast<std::size_t>(pos)] = rest % d;
      rest /= d;
    }
    for (Index pos = 0; pos < k; ++pos) {
      out[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = in[static_cast<std::size_t>(pos)];
    }
    p(tensor_index(out, d), idx) = 1.0;
  }
  return p;
}

ComplexMatrix permutation_average(Index d, Index k, bool signed_sum, Index cap) {
  const Index n = checked_power(d, k, cap);
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index{0});
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  double count = 0.0;
  do {
    const double s = signed_sum ? permutation_sign(perm) : 1.0;
    acc += s * permutation_operator(d, perm);
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / count;
}

void enumerate_labels(Index d, Index k, Sector sector, std::vector<Index>& cur,
                      std::vector<std::vector<Index>>& out) {
  if (static_cast<Index>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  Index start = 0;
  if (!cur.empty()) {
    if (sector == Sector::Antisymmetric) start = cur.back() + 1;
    if (sector == Sector::Symmetric) start = cur.back();
  }
  for (Index i = start; i < d; ++i) {
    cur.push_back(i);
    enumerate_labels(d, k, sector, cur, out);
    cur.pop_back();
  }
}

ComplexVector symmetrized_vector(std::vector<Index> label, Index d, bool antisymmetric) {
  const Index k = static_cast<Index>(label.size());
  ComplexVector v = ComplexVector::Zero(checked_power(d, k, std::numeric_limits<Index>::max()));
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<Index> levels(static_cast<std::size_t>(k));
  do {
    for (Index p = 0; p < k; ++p) {
      levels[static_cast<std::size_t>(p)] = label[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])];
    }
    const double s = antisymmetric ? permutation_sign(perm) : 1.0;
    v(tensor_index(levels, d)) += s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return v / v.norm();
}

const std::vector<std::vector<Index>> kFermi4Order = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
const std::vector<std::vector<Index>> kBose3Order = {{0, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 2}};

}  // namespace

ParticleSpace make_particle_space(Index d, Index k, Sector sector, Index cap) {
  const Index n = checked_power(d, k, cap);
  ParticleSpace s;
  s.one_particle_dim = d;
  s.particles = k;
  s.sector = sector;
  std::vector<Index> cur;
  enumerate_labels(d, k, sector, cur, s.basis_labels);
  s.isometry = ComplexMatrix::Zero(n, static_cast<Index>(s.basis_labels.size()));
  for (std::size_t c = 0; c < s.basis_labels.size(); ++c) {
    const auto& label = s.basis_labels[c];
    if (sector == Sector::Full) {
      s.isometry(tensor_index(label, d), static_cast<Index>(c)) = 1.0;
    } else {
      s.isometry.col(static_cast<Index>(c)) =
          symmetrized_vector(label, d, sector == Sector::Antisymmetric);
    }
  }
  return s;
}

ParticleSpace reorder_basis(const ParticleSpace& space,
                            const std::vector<std::vector<Index>>& labels) {
  ParticleSpace out = space;
  out.basis_labels = labels;
  out.isometry.resize(space.tensor_dim(), static_cast<Index>(labels.size()));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto it = std::find(space.basis_labels.begin(), space.basis_labels.end(), labels[c]);
    if (it == space.basis_labels.end()) {
      throw Error(ErrorKind::DimensionMismatch, "reorder_basis: unknown basis label");
    }
    out.isometry.col(static_cast<Index>(c)) =
        space.isometry.col(static_cast<Index>(it - space.basis_labels.begin()));
  }
  return out;
}

ParticleSpace change_basis(const ParticleSpace& space, const ComplexMatrix& change, Tolerance tol) {
  if (change.rows() != space.dim() || change.cols() != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "change_basis: matrix must be D x D");
  }
  const ComplexMatrix gram = change.adjoint() * change;
  if (max_abs(gram - ComplexMatrix::Identity(space.dim(), space.dim())) > std::max(tol.epsilon, 1e-12)) {
    throw Error(ErrorKind::NotUnitary, "change_basis: matrix is not unitary");
  }
  ParticleSpace out = space;
  out.isometry = space.isometry * change;
  out.basis_labels.clear();
  return out;
}

ComplexMatrix symmetrizer(Index d, Index k, Index cap) { return permutation_average(d, k, false, cap); }

ComplexMatrix antisymmetrizer(Index d, Index k, Index cap) { return permutation_average(d, k, true, cap); }

ComplexMatrix position_sum(const ComplexMatrix& l, Index k) {
  require_square(l, "one-particle operator");
  const Index d = l.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix sum;
  for (Index pos = 0; pos < k; ++pos) {
    ComplexMatrix term = pos == 0 ? l : id;
    for (Index p = 1; p < k; ++p) term = kron(term, p == pos ? l : id);
    sum = pos == 0 ? term : ComplexMatrix(sum + term);
  }
  return sum;
}

ComplexMatrix tensor_power(const ComplexMatrix& g, Index k) {
  ComplexMatrix out = g;
  for (Index p = 1; p < k; ++p) out = kron(out, g);
  return out;
}

ComplexMatrix coproduct_lie(const ComplexMatrix& l, const ParticleSpace& space) {
  if (l.rows() != space.one_particle_dim || l.cols() != space.one_particle_dim) {
    throw Error(ErrorKind::DimensionMismatch, "coproduct_lie: operator size differs from d");
  }
  return space.isometry.adjoint() * position_sum(l, space.particles) * space.isometry;
}

ComplexMatrix coproduct_group(const ComplexMatrix& g, const ParticleSpace& space, Tolerance tol) {
  if (g.rows() != space.one_particle_dim || g.cols() != space.one_particle_dim) {
    throw Error(ErrorKind::DimensionMismatch, "coproduct_group: operator size differs from d");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(g.rows(), g.cols());
  if (max_abs(g.adjoint() * g - id) > std::max(tol.epsilon, 1e-12) * 100.0) {
    throw Error(ErrorKind::NotUnitary, "coproduct_group: operator is not unitary");
  }
  return space.isometry.adjoint() * tensor_power(g, space.particles) * space.isometry;
}

MatrixAlgebra one_particle_subalgebra(const ParticleSpace& space, std::span<const Index> levels,
                                      Tolerance tol) {
  if (levels.empty()) throw Error(ErrorKind::DimensionMismatch, "levels must be non-empty");
  std::vector<ComplexMatrix> gens;
  for (Index i : levels) {
    for (Index j : levels) {
      if (i < 0 || j < 0 || i >= space.one_particle_dim || j >= space.one_particle_dim) {
        throw Error(ErrorKind::DimensionMismatch, "level index out of range");
      }
      gens.push_back(coproduct_lie(matrix_unit(space.one_particle_dim, i, j), space));
    }
  }
  return generate_algebra(gens, true, tol);
}

namespace {

ComplexVector sector_vector(const ComplexVector& coefficients, const ParticleSpace& space) {
  if (coefficients.size() != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient count differs from sector dimension");
  }
  const double n = coefficients.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::ZeroVector, "sector vector is zero");
  return coefficients / n;
}

}  // namespace

ComplexVector wedge_vector(const ComplexVector& coefficients, const ParticleSpace& space) {
  if (space.sector != Sector::Antisymmetric) {
    throw Error(ErrorKind::DimensionMismatch, "wedge_vector needs an antisymmetric sector");
  }
  return sector_vector(coefficients, space);
}

ComplexVector vee_vector(const ComplexVector& coefficients, const ParticleSpace& space) {
  if (space.sector != Sector::Symmetric) {
    throw Error(ErrorKind::DimensionMismatch, "vee_vector needs a symmetric sector");
  }
  return sector_vector(coefficients, space);
}

ComplexVector to_tensor(const ComplexVector& sector_vector, const ParticleSpace& space) {
  if (sector_vector.size() != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector size differs from sector dimension");
  }
  return space.isometry * sector_vector;
}

ParticleSpace fermi4_space() {
  return reorder_basis(make_particle_space(4, 2, Sector::Antisymmetric), kFermi4Order);
}

ComplexVector fermi4_state(double theta) {
  ComplexVector v = ComplexVector::Zero(6);
  v(3) = std::cos(theta);  // beta1
  v(2) = std::sin(theta);  // alpha2
  return v;
}

ParticleSpace fermi3_space() {
  // Lexicographic order is (e1^e2, e1^e3, e2^e3).
  const ParticleSpace lex = make_particle_space(3, 2, Sector::Antisymmetric);
  ComplexMatrix change = ComplexMatrix::Zero(3, 3);
  change(2, 0) = 1.0;   // f1 = e2^e3
  change(1, 1) = -1.0;  // f2 = e3^e1 = -e1^e3
  change(0, 2) = 1.0;   // f3 = e1^e2
  ParticleSpace out = change_basis(lex, change);
  out.basis_labels = {{1, 2}, {2, 0}, {0, 1}};
  return out;
}

MatrixAlgebra fermi3_choice1_algebra(Tolerance tol) {
  const std::vector<Index> levels = {0, 1, 2};
  return one_particle_subalgebra(fermi3_space(), levels, tol);
}

MatrixAlgebra fermi3_choice2_algebra(Tolerance tol) {
  const std::vector<Index> levels = {0, 1};
  return one_particle_subalgebra(fermi3_space(), levels, tol);
}

ComplexVector fermi3_state(double theta) {
  ComplexVector v = ComplexVector::Zero(3);
  v(0) = std::cos(theta);
  v(2) = std::sin(theta);
  return v;
}

ParticleSpace bose3_space() {
  return reorder_basis(make_particle_space(3, 2, Sector::Symmetric), kBose3Order);
}

ComplexVector bose3_state(double theta, double phi) {
  ComplexVector v = ComplexVector::Zero(6);
  v(1) = std::sin(theta) * std::cos(phi);
  v(3) = std::sin(theta) * std::sin(phi);
  v(5) = std::cos(theta);
  return v;
}

double bose3_entropy_closed_form(double theta, double phi) {
  const double c[3] = {std::pow(std::sin(theta) * std::cos(phi), 2),
                       std::pow(std::sin(theta) * std::sin(phi), 2), std::pow(std::cos(theta), 2)};
  double s = 0.0;
  for (double p : c) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace gns
