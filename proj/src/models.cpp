#include "csym/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csym/linalg.hpp"
#include "csym/random.hpp"
#include "csym/symmetry.hpp"

namespace csym {

namespace {

CMatrix symmetrized(const CMatrix& s) { return 0.5 * (s + s.transpose()); }

void require_normal(const CMatrix& m, const char* what) {
  const double f = m.frobenius_norm();
  if (normality_residual(m) > 1e-9 * f * f)
    throw Error(ErrorKind::NotNormal, std::string(what) + " is not normal");
}

void require_commuting(const CMatrix& x, const CMatrix& y, const std::string& what) {
  if (commutator(x, y).frobenius_norm() > 1e-9 * x.frobenius_norm() * y.frobenius_norm())
    throw Error(ErrorKind::NotCommuting, what + " do not commute");
}

}  // namespace

CsoPair random_cso(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "random_cso: n must be >= 1");
  Rng rng(seed);
  const CMatrix a = real_symmetric_gaussian(n, rng);
  const CMatrix b = real_symmetric_gaussian(n, rng);
  const CMatrix m = a + cplx{0.0, 1.0} * b;
  const CMatrix u = haar_unitary(n, rng);
  return {u * m * u.adjoint(), Conjugation(symmetrized(u * u.transpose()))};
}

CsoPair jordan_block(std::size_t n, cplx lambda) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "jordan_block: n must be >= 1");
  CMatrix t = lambda * CMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) t(i, i + 1) = 1.0;
  return {std::move(t), Conjugation(CMatrix::flip(n))};
}

bool palindromic_moduli(std::span<const cplx> w, double rel_tol) {
  double scale = 0.0;
  for (const auto& z : w) scale = std::max(scale, std::abs(z));
  const std::size_t m = w.size();
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(std::abs(w[j]) - std::abs(w[m - 1 - j])) > rel_tol * scale) return false;
  return true;
}

ShiftModel weighted_shift(const WeightedShiftSpec& spec) {
  const auto& w = spec.weights;
  if (w.empty()) throw Error(ErrorKind::InvalidSpec, "weighted_shift: no weights");
  for (const auto& z : w)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::InvalidSpec, "weighted_shift: non-finite weight");
  const std::size_t m = w.size(), dim = m + 1;

  if (spec.symmetry_index) {
    const long k = *spec.symmetry_index;
    double scale = 0.0;
    for (const auto& z : w) scale = std::max(scale, std::abs(z));
    for (long j = 0; j < static_cast<long>(m); ++j) {
      const long partner = k - j;
      if (partner < 0 || partner >= static_cast<long>(m)) continue;
      if (std::abs(std::abs(w[j]) - std::abs(w[partner])) > 1e-10 * scale)
        throw Error(ErrorKind::InvalidSpec, "weighted_shift: |w[k-j]| = |w[j]| fails at j = " + std::to_string(j));
    }
  }

  ShiftModel out{CMatrix(dim), std::nullopt};
  for (std::size_t i = 0; i < m; ++i) out.t(i + 1, i) = w[i];
  if (!palindromic_moduli(w)) return out;

  // s has phi_r on the antidiagonal (r, m - r). Matching s conj(t) = t^* s on
  // entry (r, m - 1 - r) gives phi_{r+1} conj(w_r) = phi_r conj(w_{m-1-r}).
  std::vector<cplx> phi(dim);
  phi[0] = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    const cplx num = std::conj(w[m - 1 - r]), den = std::conj(w[r]);
    const cplx ratio = std::abs(den) == 0.0 ? cplx{1.0} : num / den;
    phi[r + 1] = phi[r] * (ratio / std::abs(ratio));
  }
  CMatrix s(dim);
  for (std::size_t r = 0; r < dim; ++r) s(r, m - r) = phi[r];
  out.c = Conjugation(symmetrized(s));
  return out;
}

namespace {

CMatrix simdiag_recurse(const std::vector<CMatrix>& mats, Rng& rng, int depth) {
  const std::size_t n = mats.front().n();
  if (n == 1) return CMatrix::identity(1);
  CMatrix h(n);
  for (const auto& m : mats) {
    const double f = m.frobenius_norm();
    if (f == 0.0) continue;
    h += (2.0 * rng.uniform() - 1.0) / f * hermitian_part(m);
    h += (2.0 * rng.uniform() - 1.0) / f * skew_hermitian_part(m);
  }
  h = hermitian_part(h);
  const EigenDecomposition e = hermitian_eig(h);
  CMatrix v = e.vectors;
  if (depth >= 5) return v;

  double scale = 1.0;
  for (double x : e.values) scale = std::max(scale, std::abs(x));
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && e.values[end] - e.values[end - 1] < 1e-7 * scale) ++end;
    if (end - start > 1) {
      const std::size_t k = end - start;
      CMatrix vc(n, k);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) vc(i, j) = v(i, start + j);
      std::vector<CMatrix> sub;
      for (const auto& m : mats) sub.push_back(vc.adjoint() * m * vc);
      const CMatrix wsub = simdiag_recurse(sub, rng, depth + 1);
      const CMatrix rotated = vc * wsub;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) v(i, start + j) = rotated(i, j);
    }
    start = end;
  }
  return v;
}

}  // namespace

CMatrix simultaneous_diagonalize(std::span<const CMatrix> mats, std::uint64_t seed) {
  if (mats.empty()) throw Error(ErrorKind::InvalidInput, "simultaneous_diagonalize: no matrices");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    require_same_square(mats[0], mats[i], "simultaneous_diagonalize");
    require_finite(mats[i], "simultaneous_diagonalize");
    require_normal(mats[i], ("matrix " + std::to_string(i)).c_str());
  }
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      require_commuting(mats[i], mats[j], "matrices " + std::to_string(i) + " and " + std::to_string(j));

  Rng rng(seed);
  const CMatrix v = simdiag_recurse(std::vector<CMatrix>(mats.begin(), mats.end()), rng, 0);
  for (const auto& m : mats) {
    CMatrix d = v.adjoint() * m * v;
    for (std::size_t i = 0; i < d.n(); ++i) d(i, i) = 0.0;
    if (d.frobenius_norm() > 1e-8 * m.frobenius_norm())
      throw Error(ErrorKind::NumericalBreakdown, "simultaneous_diagonalize: residual above 1e-8");
  }
  return v;
}

void BinormalSpec::validate() const {
  for (std::size_t i = 0; i < 4; ++i) {
    require_same_square(blocks[0], blocks[i], "BinormalSpec");
    require_normal(blocks[i], ("block " + std::to_string(i)).c_str());
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      require_commuting(blocks[i], blocks[j], "blocks " + std::to_string(i) + " and " + std::to_string(j));
}

BinormalModel binormal_matrix(const BinormalSpec& spec) {
  spec.validate();
  const std::size_t n = spec.blocks[0].n();
  const CMatrix v = simultaneous_diagonalize(spec.blocks);
  BinormalModel out{CMatrix(2 * n), CMatrix(2 * n)};
  for (std::size_t bi = 0; bi < 2; ++bi)
    for (std::size_t bj = 0; bj < 2; ++bj) {
      const CMatrix& blk = spec.blocks[2 * bi + bj];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.t(bi * n + i, bj * n + j) = blk(i, j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) {
      out.basis(r, 2 * i) = v(r, i);
      out.basis(n + r, 2 * i + 1) = v(r, i);
    }
  return out;
}

std::vector<CMatrix> extract_2x2_blocks(const CMatrix& t, const CMatrix& basis) {
  require_same_square(t, basis, "extract_2x2_blocks");
  if (t.n() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "extract_2x2_blocks: odd dimension");
  const CMatrix d = basis.adjoint() * t * basis;
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < t.n(); i += 2)
    blocks.push_back(CMatrix{{d(i, i), d(i, i + 1)}, {d(i + 1, i), d(i + 1, i + 1)}});
  return blocks;
}

double block_decomposition_residual(const CMatrix& t, const CMatrix& basis) {
  require_same_square(t, basis, "block_decomposition_residual");
  CMatrix d = basis.adjoint() * t * basis;
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t j = 0; j < d.n(); ++j)
      if (i / 2 == j / 2) d(i, j) = 0.0;
  return d.frobenius_norm();
}

Conjugation block_conjugation(const CMatrix& t, const CMatrix& basis) {
  const auto blocks = extract_2x2_blocks(t, basis);
  std::vector<CMatrix> parts;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const FindResult found = find_conjugation(blocks[i]);
    if (!found.found())
      throw Error(ErrorKind::NumericalBreakdown, "block_conjugation: no certificate for block " + std::to_string(i));
    parts.push_back(found.certificate->conjugation.s());
  }
  const CMatrix s = basis * block_diagonal(parts) * basis.transpose();
  return Conjugation(symmetrized(s));
}

CMatrix sqrt_normal_matrix(const std::optional<CMatrix>& nrm, const CMatrix& a, const CMatrix& b) {
  require_same_square(a, b, "sqrt_normal_matrix");
  if (nrm) {
    require_square(*nrm, "sqrt_normal_matrix");
    require_normal(*nrm, "N");
  }
  require_normal(a, "A");
  const double bf = b.frobenius_norm();
  if ((b - b.adjoint()).frobenius_norm() > 1e-10 * bf)
    throw Error(ErrorKind::NotPositive, "sqrt_normal_matrix: B is not Hermitian");
  const EigenDecomposition be = hermitian_eig(b);
  const double bnorm = std::max(std::abs(be.values.front()), std::abs(be.values.back()));
  if (be.values.front() < -1e-10 * bnorm)
    throw Error(ErrorKind::NotPositive, "sqrt_normal_matrix: B has a negative eigenvalue");
  if (commutator(a, b).frobenius_norm() > 1e-9 * a.frobenius_norm() * bf)
    throw Error(ErrorKind::NotCommuting, "sqrt_normal_matrix: A and B do not commute");

  const std::size_t m = a.n();
  CMatrix block(2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      block(i, j) = a(i, j);
      block(i, m + j) = b(i, j);
      block(m + i, m + j) = -a(i, j);
    }
  std::vector<CMatrix> parts;
  if (nrm) parts.push_back(*nrm);
  parts.push_back(std::move(block));
  CMatrix t = block_diagonal(parts);

  const CMatrix t2 = t * t;
  const double tf = t.frobenius_norm();
  if (normality_residual(t2) > 1e-8 * std::max(1.0, tf * tf * tf * tf))
    throw Error(ErrorKind::NumericalBreakdown, "sqrt_normal_matrix: T^2 is not normal");
  return t;
}

DirectSum direct_sum(std::span<const CMatrix> parts, std::span<const std::optional<Conjugation>> conjs) {
  if (parts.empty()) throw Error(ErrorKind::InvalidInput, "direct_sum: no parts");
  DirectSum out{block_diagonal(parts), std::nullopt};
  if (conjs.size() != parts.size()) return out;
  std::vector<CMatrix> ss;
  for (std::size_t i = 0; i < conjs.size(); ++i) {
    if (!conjs[i]) return out;
    require_same_square(parts[i], conjs[i]->s(), "direct_sum");
    ss.push_back(conjs[i]->s());
  }
  out.c = Conjugation(block_diagonal(ss));
  return out;
}

CsoPair conjugate_by_unitary(const CMatrix& t, const Conjugation& c, const CMatrix& u) {
  require_same_square(t, u, "conjugate_by_unitary");
  require_same_square(t, c.s(), "conjugate_by_unitary");
  if (unitarity_residual(u) > 1e-10 * static_cast<double>(u.n()))
    throw Error(ErrorKind::NotUnitary, "conjugate_by_unitary: u is not unitary");
  return {u * t * u.adjoint(), Conjugation(symmetrized(u * c.s() * u.transpose()))};
}

CsoPair random_reducible_cso(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "random_reducible_cso: n must be >= 2");
  Rng rng(seed);
  const auto n1 = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 1));
  const CsoPair p1 = random_cso(n1, derive_seed(seed, 1));
  const CsoPair p2 = random_cso(n - n1, derive_seed(seed, 2));
  const std::vector<CMatrix> parts{p1.t, p2.t};
  const std::vector<std::optional<Conjugation>> conjs{p1.c, p2.c};
  const DirectSum sum = direct_sum(parts, conjs);
  const CMatrix u = haar_unitary(n, rng);
  return conjugate_by_unitary(sum.t, *sum.c, u);
}

CMatrix random_normal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix u = haar_unitary(n, rng);
  CVector z(n);
  for (auto& x : z) x = rng.complex_normal();
  return u * CMatrix::diagonal(z) * u.adjoint();
}

BinormalSpec random_binormal_spec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix v = haar_unitary(n, rng);
  BinormalSpec spec;
  for (auto& blk : spec.blocks) {
    CVector z(n);
    for (auto& x : z) x = rng.complex_normal();
    blk = v * CMatrix::diagonal(z) * v.adjoint();
  }
  return spec;
}

CsoPair random_sqrt_normal(std::size_t n_normal, std::size_t n_block, std::uint64_t seed) {
  if (n_block == 0) throw Error(ErrorKind::InvalidInput, "random_sqrt_normal: n_block must be >= 1");
  Rng rng(seed);
  std::optional<CMatrix> nrm;
  std::optional<Conjugation> nrm_conj;
  if (n_normal > 0) {
    const CMatrix w = haar_unitary(n_normal, rng);
    CVector z(n_normal);
    for (auto& x : z) x = rng.complex_normal();
    nrm = w * CMatrix::diagonal(z) * w.adjoint();
    nrm_conj = Conjugation(symmetrized(w * w.transpose()));
  }
  const CMatrix v = haar_unitary(n_block, rng);
  CVector da(n_block), db(n_block);
  for (auto& x : da) x = rng.complex_normal();
  for (auto& x : db) x = std::abs(rng.normal());
  const CMatrix a = v * CMatrix::diagonal(da) * v.adjoint();
  const CMatrix b = hermitian_part(v * CMatrix::diagonal(db) * v.adjoint());
  const CMatrix t = sqrt_normal_matrix(nrm, a, b);

  // [[A, B], [0, -A]] is binormal; certify it block by block.
  BinormalSpec spec{{a, b, CMatrix(n_block), -1.0 * a}};
  const BinormalModel model = binormal_matrix(spec);
  const Conjugation block_c = block_conjugation(model.t, model.basis);
  if (!nrm) return {t, block_c};
  const std::vector<CMatrix> ss{nrm_conj->s(), block_c.s()};
  return {t, Conjugation(block_diagonal(ss))};
}

}  // namespace csym
