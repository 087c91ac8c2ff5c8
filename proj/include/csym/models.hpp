#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "csym/conjugation.hpp"
#include "csym/matrix.hpp"

namespace csym {

/// A matrix together with a conjugation witnessing its complex symmetry.
struct CsoPair {
  CMatrix t;
  Conjugation c;
};

/// t = U (A + iB) U^*, s = U U^T with A, B real symmetric Gaussian and U Haar.
CsoPair random_cso(std::size_t n, std::uint64_t seed);

/// lambda I + N with N e_i = e_{i-1} (ones on the superdiagonal), certified by
/// the flip conjugation.
CsoPair jordan_block(std::size_t n, cplx lambda);

enum class ShiftKind { Unilateral, BilateralTruncation };

/// T e_i = weights[i] e_{i+1} on C^{m+1}. A bilateral truncation is the same
/// finite matrix read as a window of a two-sided shift; it is an
/// approximation only, not a model of the infinite operator.
struct WeightedShiftSpec {
  std::vector<cplx> weights;
  ShiftKind kind = ShiftKind::Unilateral;
  /// When set, claims |w[k - j]| = |w[j]| for every j with both indices in range.
  std::optional<int> symmetry_index;
};

struct ShiftModel {
  CMatrix t;
  std::optional<Conjugation> c;  // present iff the weight moduli are palindromic
};

/// |w[j]| = |w[m-1-j]| within rel_tol of the largest modulus.
bool palindromic_moduli(std::span<const cplx> weights, double rel_tol = 1e-10);

/// Builds the shift; for palindromic moduli the conjugation is the flip with a
/// phase on each antidiagonal entry, phases fixed by a forward recursion.
ShiftModel weighted_shift(const WeightedShiftSpec& spec);

/// Unitary v with v^* M v diagonal for every M. Inputs must be normal and
/// pairwise commuting.
CMatrix simultaneous_diagonalize(std::span<const CMatrix> mats, std::uint64_t seed = 0);

/// Row-major 2x2 grid of n x n commuting normal blocks.
struct BinormalSpec {
  std::array<CMatrix, 4> blocks;  // N11, N12, N21, N22
  void validate() const;
};

struct BinormalModel {
  CMatrix t;      // [[N11, N12], [N21, N22]]
  CMatrix basis;  // columns (v_i, 0), (0, v_i) interleaved
};

/// In `basis`, t is a direct sum of 2x2 blocks [[l11_i, l12_i], [l21_i, l22_i]].
BinormalModel binormal_matrix(const BinormalSpec& spec);

/// The 2x2 diagonal blocks of basis^* t basis.
std::vector<CMatrix> extract_2x2_blocks(const CMatrix& t, const CMatrix& basis);

/// Frobenius mass of basis^* t basis outside its 2x2 diagonal blocks.
double block_decomposition_residual(const CMatrix& t, const CMatrix& basis);

/// Conjugation for t assembled from one found per 2x2 block. Throws
/// NumericalBreakdown if a block has no certificate.
Conjugation block_conjugation(const CMatrix& t, const CMatrix& basis);

/// N (+) [[A, B], [0, -A]] with N, A normal and B >= 0 commuting with A; the
/// square of the result is normal. `nrm` may be absent.
CMatrix sqrt_normal_matrix(const std::optional<CMatrix>& nrm, const CMatrix& a, const CMatrix& b);

struct DirectSum {
  CMatrix t;
  std::optional<Conjugation> c;  // present iff every part came with one
};

DirectSum direct_sum(std::span<const CMatrix> parts, std::span<const std::optional<Conjugation>> conjs = {});

/// (u t u^*, s' = u s u^T).
CsoPair conjugate_by_unitary(const CMatrix& t, const Conjugation& c, const CMatrix& u);

// Samplers used by experiments and test corpora.

/// U (A (+) B) U^* with A, B random CSOs of sizes n1 + n2 = n (n >= 2).
CsoPair random_reducible_cso(std::size_t n, std::uint64_t seed);

/// U diag(z) U^* with complex Gaussian z.
CMatrix random_normal(std::size_t n, std::uint64_t seed);

/// Four blocks V D_k V^* sharing one Haar V.
BinormalSpec random_binormal_spec(std::size_t n, std::uint64_t seed);

/// Random N (+) [[A, B], [0, -A]] together with a certified conjugation; the
/// normal summand has size n_normal (may be 0), A and B have size n_block.
CsoPair random_sqrt_normal(std::size_t n_normal, std::size_t n_block, std::uint64_t seed);

}  // namespace csym
