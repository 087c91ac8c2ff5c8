#include "csym/conjugation.hpp"

#include <cmath>

#include "csym/linalg.hpp"
#include "csym/random.hpp"

namespace csym {

Conjugation::Conjugation(CMatrix s) : s_(std::move(s)) { require_square(s_, "Conjugation"); }

CVector Conjugation::apply(std::span<const cplx> x) const {
  if (x.size() != n()) throw Error(ErrorKind::DimensionMismatch, "apply_conjugation: vector size");
  const CVector cx = conj(x);
  return s_ * std::span<const cplx>(cx);
}

CMatrix Conjugation::sandwich(const CMatrix& x) const {
  require_same_square(s_, x, "Conjugation::sandwich");
  return s_ * x.conj() * s_.adjoint();
}

Conjugation canonical_conjugation(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "canonical_conjugation: n must be >= 1");
  return Conjugation(CMatrix::identity(n));
}

Conjugation random_conjugation(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "random_conjugation: n must be >= 1");
  Rng rng(seed);
  const CMatrix u = haar_unitary(n, rng);
  CMatrix s = u * u.transpose();
  // Exact symmetry; the rounding asymmetry of the product is ~1e-16.
  return Conjugation(0.5 * (s + s.transpose()));
}

CVector apply_conjugation(const Conjugation& c, std::span<const cplx> x) { return c.apply(x); }

ConjugationReport verify_conjugation(const Conjugation& c) {
  const CMatrix& s = c.s();
  return {(s - s.transpose()).frobenius_norm(), (s * s.adjoint() - CMatrix::identity(s.n())).frobenius_norm()};
}

CVector c_real_candidate(const Conjugation& c, std::span<const cplx> x) {
  const CVector cx = c.apply(x);
  CVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + cx[i];
  if (norm2(y) < 0.1)
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = cplx{0.0, 1.0} * (x[i] - cx[i]);
  return y;
}

CRealBasis c_real_basis(const Conjugation& c, std::uint64_t seed) {
  const std::size_t n = c.n();
  Rng rng(seed);
  std::vector<CVector> basis;
  basis.reserve(n);

  auto project_out = [&](CVector& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const cplx h = inner(x, b);
        for (std::size_t i = 0; i < n; ++i) x[i] -= h * b[i];
      }
  };

  constexpr int kMaxDraws = 50;
  while (basis.size() < n) {
    bool found = false;
    for (int draw = 0; draw < kMaxDraws && !found; ++draw) {
      CVector x = random_unit_vector(n, rng);
      project_out(x);
      const double nx = norm2(x);
      if (nx < 1e-6) continue;
      for (auto& z : x) z /= nx;
      CVector y = c_real_candidate(c, x);
      // The complement is C-invariant, so y stays in it; this pass only
      // removes rounding drift.
      project_out(y);
      const double ny = norm2(y);
      if (ny < 0.5) continue;
      for (auto& z : y) z /= ny;
      basis.push_back(std::move(y));
      found = true;
    }
    if (!found) throw Error(ErrorKind::NumericalBreakdown, "c_real_basis: greedy construction stalled");
  }
  return {CMatrix::from_columns(basis, n)};
}

double fixedness_residual(const Conjugation& c, const CMatrix& u) {
  double worst = 0.0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const CVector b = u.column(j);
    const CVector cb = c.apply(b);
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) d += std::norm(cb[i] - b[i]);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

}  // namespace csym
