#pragma once

#include <cstdint>

#include "csym/matrix.hpp"

namespace csym {

/// Default acceptance tolerance (times n) on both conjugation residuals.
inline constexpr double kConjugationTol = 1e-10;

/// A conjugation C x = s conj(x) stored by its symmetric unitary s.
///
/// Any conjugation on C^n has this form in a fixed basis; symmetry of s gives
/// C^2 = I and unitarity gives <Cx, Cy> = <y, x>. Construction does not
/// validate; use verify_conjugation / is_valid.
class Conjugation {
 public:
  Conjugation() = default;
  explicit Conjugation(CMatrix s);

  const CMatrix& s() const noexcept { return s_; }
  std::size_t n() const noexcept { return s_.n(); }

  CVector apply(std::span<const cplx> x) const;

  /// C X C as a matrix, i.e. s conj(X) s^*.
  CMatrix sandwich(const CMatrix& x) const;

 private:
  CMatrix s_;
};

struct ConjugationReport {
  double symmetry_residual = 0.0;   // ||s - s^T||_F
  double unitarity_residual = 0.0;  // ||s s^* - I||_F
  bool valid(std::size_t n, double tol = kConjugationTol) const {
    const double bound = tol * static_cast<double>(n);
    return symmetry_residual <= bound && unitarity_residual <= bound;
  }
};

/// Orthonormal basis of C-fixed vectors (columns of u); u u^T = s.
struct CRealBasis {
  CMatrix u;
};

Conjugation canonical_conjugation(std::size_t n);

/// s = U U^T for a Haar unitary drawn from `seed`.
Conjugation random_conjugation(std::size_t n, std::uint64_t seed);

CVector apply_conjugation(const Conjugation& c, std::span<const cplx> x);

ConjugationReport verify_conjugation(const Conjugation& c);

/// Greedy symmetrization: draws x in the (C-invariant) orthogonal complement
/// of the vectors found so far and keeps x + Cx, or i(x - Cx) when that one is
/// short. Throws NumericalBreakdown after 50 failed draws for one vector.
CRealBasis c_real_basis(const Conjugation& c, std::uint64_t seed = 0);

/// The greedy step on a unit vector x: x + Cx, or i(x - Cx) when
/// ||x + Cx|| < 0.1. Unnormalized; the result is fixed by C.
CVector c_real_candidate(const Conjugation& c, std::span<const cplx> x);

/// max_j ||s conj(b_j) - b_j||_2 over the columns of u.
double fixedness_residual(const Conjugation& c, const CMatrix& u);

}  // namespace csym
