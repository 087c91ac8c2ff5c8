#pragma once

#include <optional>
#include <vector>

#include "csym/matrix.hpp"

namespace csym {

inline constexpr double kCommutantTol = 1e-8;
/// Reports whose singular-value gap ratio falls below this are flagged.
inline constexpr double kGapRatioFloor = 10.0;

struct CommutantReport {
  std::size_t dimension = 0;
  /// Frobenius-orthonormal basis of {X : XT = TX, XT^* = T^*X}.
  std::vector<CMatrix> basis;
  /// Smallest retained over largest discarded singular value; +inf when one
  /// side is empty or the discarded values are exactly zero.
  double gap = 0.0;
  double threshold = 0.0;
  bool ambiguous = false;
};

/// Stacked operator vec(X) -> (vec(XT - TX), vec(XT^* - T^*X)), 2n^2 x n^2,
/// with row-major vectorization vec(X)[i*n + j] = X(i, j).
CMatrix commutant_constraint_operator(const CMatrix& t);

/// Numerical dimension of the commutant of {T, T^*}: number of singular values
/// of the constraint operator at or below tol * max(1, sigma_1). The report is
/// flagged ambiguous (not thrown) when the gap ratio is below 10.
CommutantReport commutant_dimension(const CMatrix& t, double tol = kCommutantTol);

/// True iff the commutant is the scalars. Throws NumericalAmbiguity when the
/// dimension estimate is flagged.
bool is_irreducible(const CMatrix& t, double tol = kCommutantTol);

/// An orthogonal projection P, 0 < rank P < n, commuting with T; nullopt when
/// T is irreducible. Throws NumericalAmbiguity when the commutant is nontrivial
/// but no split could be extracted, or the dimension estimate is flagged.
std::optional<CMatrix> reducing_projection(const CMatrix& t, double tol = kCommutantTol);

/// ||XT - TX||_F + ||XT^* - T^*X||_F.
double commutation_residual(const CMatrix& x, const CMatrix& t);

}  // namespace csym
