#include "csym/commutant.hpp"

#include <cmath>
#include <limits>

#include "csym/linalg.hpp"

namespace csym {

CMatrix commutant_constraint_operator(const CMatrix& t) {
  require_square(t, "commutant_constraint_operator");
  const std::size_t n = t.n(), nn = n * n;
  CMatrix op(2 * nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      // (XT)_{ij} = sum_l X_{il} T_{lj};  (TX)_{ij} = sum_k T_{ik} X_{kj}
      for (std::size_t l = 0; l < n; ++l) {
        op(row, i * n + l) += t(l, j);
        op(nn + row, i * n + l) += std::conj(t(j, l));
      }
      for (std::size_t k = 0; k < n; ++k) {
        op(row, k * n + j) -= t(i, k);
        op(nn + row, k * n + j) -= std::conj(t(k, i));
      }
    }
  return op;
}

CommutantReport commutant_dimension(const CMatrix& t, double tol) {
  require_square(t, "commutant_dimension");
  require_finite(t, "commutant_dimension");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "commutant_dimension: tol must be positive");
  const std::size_t n = t.n(), nn = n * n;
  const SvdResult dec = svd(commutant_constraint_operator(t), false);

  CommutantReport report;
  report.threshold = tol * std::max(1.0, dec.sigma.front());
  std::size_t kept = nn;
  while (kept > 0 && dec.sigma[kept - 1] <= report.threshold) --kept;
  report.dimension = nn - kept;
  for (std::size_t k = kept; k < nn; ++k) {
    CMatrix x(n);
    for (std::size_t r = 0; r < nn; ++r) x.data()[r] = dec.v(r, k);
    report.basis.push_back(std::move(x));
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (kept == 0 || kept == nn || dec.sigma[kept] == 0.0)
    report.gap = inf;
  else
    report.gap = dec.sigma[kept - 1] / dec.sigma[kept];
  report.ambiguous = report.gap < kGapRatioFloor;
  return report;
}

bool is_irreducible(const CMatrix& t, double tol) {
  const CommutantReport r = commutant_dimension(t, tol);
  if (r.ambiguous)
    throw Error(ErrorKind::NumericalAmbiguity,
                "commutant dimension " + std::to_string(r.dimension) + " has gap ratio " + std::to_string(r.gap));
  return r.dimension == 1;
}

double commutation_residual(const CMatrix& x, const CMatrix& t) {
  return commutator(x, t).frobenius_norm() + commutator(x, t.adjoint()).frobenius_norm();
}

namespace {

// Spectral projection of a Hermitian h onto eigenvalues above the midpoint of
// its extreme eigenvalues; nullopt when h is numerically scalar.
std::optional<CMatrix> split_projection(const CMatrix& h) {
  const std::size_t n = h.n();
  const EigenDecomposition e = hermitian_eig(h);
  const double lo = e.values.front(), hi = e.values.back();
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  if (hi - lo <= 1e-6 * scale) return std::nullopt;
  const double mid = 0.5 * (lo + hi);
  CMatrix p(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] <= mid) continue;
    const CVector v = e.vectors.column(k);
    p += rank_one(v, v);
  }
  return p;
}

}  // namespace

std::optional<CMatrix> reducing_projection(const CMatrix& t, double tol) {
  const CommutantReport r = commutant_dimension(t, tol);
  if (r.ambiguous)
    throw Error(ErrorKind::NumericalAmbiguity, "reducing_projection: commutant gap ratio below floor");
  if (r.dimension <= 1) return std::nullopt;

  const std::size_t n = t.n();
  const double bound = 1e-7 * (1.0 + t.frobenius_norm());
  const CMatrix eye = CMatrix::identity(n);
  for (const CMatrix& x : r.basis) {
    // The commutant of {T, T^*} is adjoint-closed, so both Hermitian parts of
    // a basis element lie in it.
    for (const CMatrix& h : {hermitian_part(x), skew_hermitian_part(x)}) {
      const cplx mean = h.trace() / static_cast<double>(n);
      const CMatrix deflated = h - mean * eye;
      const auto p = split_projection(deflated);
      if (!p) continue;
      const double rank = p->trace().real();
      if (rank < 0.5 || rank > static_cast<double>(n) - 0.5) continue;
      if (commutator(*p, t).frobenius_norm() > bound) continue;
      return p;
    }
  }
  throw Error(ErrorKind::NumericalAmbiguity,
              "reducing_projection: commutant dimension " + std::to_string(r.dimension) +
                  " but every basis element is numerically scalar");
}

}  // namespace csym
