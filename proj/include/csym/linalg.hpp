#pragma once

#include <vector>

#include "csym/matrix.hpp"

namespace csym {

/// Relative tolerance used for numerical ranks and kernels unless a caller
/// passes its own.
inline constexpr double kDefaultRankTol = 1e-10;

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // unitary, columns are eigenvectors
};

/// Thin SVD a = u * diag(sigma) * v^*. For a square input u and v are unitary;
/// for a tall m x n input u is m x n with orthonormal columns.
struct SvdResult {
  CMatrix u;
  std::vector<double> sigma;  // descending
  CMatrix v;
};

/// Largest singular value.
double operator_norm(const CMatrix& a);

/// Cyclic complex Jacobi. Requires ||a - a^*||_F <= 1e-10 ||a||_F.
EigenDecomposition hermitian_eig(const CMatrix& a);

/// One-sided (Hestenes) Jacobi, preconditioned by a column-pivoted QR; wide
/// inputs go through the adjoint. With compute_u = false only sigma and v are
/// filled.
SvdResult svd(const CMatrix& a, bool compute_u = true);

/// Singular values only, descending.
std::vector<double> singular_values(const CMatrix& a);

/// Eigenvalues of a general square matrix, sorted lexicographically by
/// (real, imag). Hessenberg reduction followed by shifted complex QR.
std::vector<cplx> eig_general(const CMatrix& a);

/// Orthonormal basis of the right null space: right singular vectors whose
/// singular values are <= tol * max(1, sigma_1).
std::vector<CVector> null_space_basis(const CMatrix& a, double tol = kDefaultRankTol);

/// Smallest singular value of a square matrix.
double min_singular_value(const CMatrix& a);

/// Unitary polar factor u v^* of a square matrix.
CMatrix polar_unitary(const CMatrix& a);

/// Minimum-norm least-squares solution of a x = b via the SVD; singular
/// values below rcond * sigma_1 are treated as zero.
CVector least_squares(const CMatrix& a, std::span<const cplx> b, double rcond = 1e-13);

/// ||u^* u - I||_F.
double unitarity_residual(const CMatrix& u);

/// ||a a^* - a^* a||_F.
double normality_residual(const CMatrix& a);

/// Hermitian part (a + a^*)/2 and skew part (a - a^*)/(2i); both Hermitian.
CMatrix hermitian_part(const CMatrix& a);
CMatrix skew_hermitian_part(const CMatrix& a);

/// Throws NonFinite when any entry is NaN or infinite.
void require_finite(const CMatrix& a, const char* where);

}  // namespace csym
