#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csym/conjugation.hpp"
#include "csym/matrix.hpp"

namespace csym {

/// Relative residual below which a conjugation is accepted as a witness.
inline constexpr double kCertificateTol = 1e-8;

/// Witness that C T C = T^*.
struct CsoCertificate {
  Conjugation conjugation;
  double residual = 0.0;  // ||s conj(T) - T^* s||_F / max(1, ||T||_F)
};

/// Noncommutative polynomial in z, w. Each term is coefficient * word, the
/// word read left to right as a product; the empty word is the identity.
struct NcTerm {
  cplx coeff;
  std::string word;
};

struct NcPolynomial {
  std::vector<NcTerm> terms;

  /// Same words, conjugated coefficients.
  NcPolynomial conjugate_coefficients() const;
  std::size_t degree() const;
  /// Throws InvalidSpec on empty term lists, letters outside {z, w} or words
  /// longer than 8.
  void validate() const;
};

double c_symmetry_residual(const CMatrix& t, const Conjugation& c);

struct FindOptions {
  int restarts = 5;
  int max_iter = 500;           // alternating-projection iterations per restart
  int polish_iter = 30;         // Gauss-Newton steps on the unitarity defect
  double kernel_tol = 1e-9;     // relative threshold for the Sylvester kernel
  std::uint64_t seed = 0;
};

struct FindResult {
  std::optional<CsoCertificate> certificate;  // set iff found
  double best_residual = 0.0;
  std::size_t solution_dim = 0;  // dimension of the symmetric solution space
  int restarts_used = 0;

  bool found() const { return certificate.has_value(); }
};

/// Searches for a conjugation making t complex symmetric. NotFound (no
/// certificate) is inconclusive unless an independent obstruction such as a
/// nonzero trace_defect is available.
FindResult find_conjugation(const CMatrix& t, const FindOptions& opts = {});
FindResult find_conjugation(const CMatrix& t, int restarts, int max_iter);

/// Substitutes z -> first, w -> second.
CMatrix word_eval(const NcPolynomial& p, const CMatrix& first, const CMatrix& second);

/// max_p | ||p(T^*, T)|| - ||p~(T, T^*)|| | / (1 + ||p(T^*, T)||).
double gnormal_defect(const CMatrix& t, std::span<const NcPolynomial> polys);

/// max_p | tr p~(T, T^*) - conj(tr p(T^*, T)) |.
double trace_defect(const CMatrix& t, std::span<const NcPolynomial> polys);

/// Words of length 1..4, 1..5 terms, coefficients uniform in the closed unit
/// disk.
std::vector<NcPolynomial> random_polynomials(std::size_t count, std::uint64_t seed);

inline constexpr std::uint64_t kStandardPolySeed = 0xC50;
inline constexpr std::size_t kStandardPolyCount = 50;

/// The fixed 50-polynomial set used by every defect report.
const std::vector<NcPolynomial>& standard_polynomials();

/// One monomial per binary necklace of length 6..8 that differs from its
/// reversal. A word of length <= 5 is a rotation of its reversal, so its trace
/// defect vanishes for every matrix; these words are the shortest that can
/// separate T from T^T up to unitary similarity.
const std::vector<NcPolynomial>& obstruction_polynomials();

}  // namespace csym
