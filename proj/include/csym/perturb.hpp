#pragma once

#include <optional>
#include <vector>

#include "csym/commutant.hpp"
#include "csym/conjugation.hpp"
#include "csym/matrix.hpp"
#include "csym/symmetry.hpp"

namespace csym {

/// Which Hermitian part of T is spread to a simple spectrum. The imaginary
/// variant runs the construction on i*T and rotates the result back.
enum class SpreadPart { Real, Imaginary };

struct IrreducibleDiagnostics {
  CMatrix basis;                   // u Q: C-real eigenbasis of the spread part
  std::vector<double> eigenvalues; // spectrum of the spread part, ascending
  std::vector<double> a_values;    // pairwise distinct replacements
  double fill = 0.0;               // magnitude given to small off-diagonal entries
  std::size_t filled_entries = 0;  // entries raised to the fill magnitude
  std::optional<CommutantReport> commutant;  // of T + K, when checked
};

struct PointRemoval {
  cplx lambda;
  double budget = 0.0;      // eps passed to the single-point step
  std::size_t kernel_dim = 0;
  double sigma_min_after = 0.0;
  bool no_op = false;       // lambda was not spectral
  bool near_floor = false;  // sigma_min within 10x of the acceptance floor
  int retries = 0;
};

struct PerturbationResult {
  CMatrix k;
  CMatrix perturbed;
  CsoCertificate certificate;
  double norm_bound = 0.0;  // operator_norm(k)
  std::optional<IrreducibleDiagnostics> irreducible;
  std::vector<PointRemoval> removals;
};

struct IrreducibleOptions {
  SpreadPart part = SpreadPart::Real;
  bool check_commutant = true;
  double commutant_tol = kCommutantTol;
  std::uint64_t basis_seed = 0;
};

/// Complex symmetric perturbation K with ||K|| < eps making T + K irreducible.
///
/// In a C-real basis T = A + iB with A, B real symmetric. A is diagonalized by
/// a real orthogonal Q, its sorted eigenvalues d_j are replaced by
/// d_j + (j-1) eps/(4n), and every entry of Q^T B Q smaller than
/// f = eps/(5n^2) in modulus is set to +-f. A projection commuting with the
/// result is diagonal in the eigenbasis of the new real part, and the
/// all-nonzero imaginary part then forces it to be 0 or I.
PerturbationResult make_irreducible_cso(const CMatrix& t, const Conjugation& c, double eps,
                                        const IrreducibleOptions& opts = {});

struct RemovalOptions {
  /// lambda counts as spectral when sigma_min(T - lambda) <= tol * max(1, ||T - lambda||);
  /// the same threshold selects the kernel.
  double spectral_tol = 1e-8;
  /// Post-condition floor, relative to max(1, ||T||).
  double floor = 1e-10;
  int max_retries = 10;
};

/// K = (eps/2) sum_i (C e_i) e_i^* over an orthonormal basis {e_i} of
/// ker(T - lambda). K is C-symmetric with ||K|| = eps/2 and T + K - lambda is
/// invertible. Returns K = 0 with a no-op record when lambda is not spectral.
PerturbationResult remove_point(const CMatrix& t, const Conjugation& c, cplx lambda, double eps,
                                const RemovalOptions& opts = {});

/// Removes each lambda in turn with budgets eps/2, eps/4, ..., halving a step's
/// budget when it pushes an earlier point back into the spectrum.
PerturbationResult remove_points(const CMatrix& t, const Conjugation& c, std::span<const cplx> lambdas, double eps,
                                 const RemovalOptions& opts = {});

/// Raised by remove_points when retries run out; carries what was achieved.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, PerturbationResult partial)
      : Error(ErrorKind::BudgetExhausted, what), partial_(std::move(partial)) {}
  const PerturbationResult& partial() const noexcept { return partial_; }

 private:
  PerturbationResult partial_;
};

}  // namespace csym
