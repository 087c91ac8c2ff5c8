#include "csym/perturb.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "csym/linalg.hpp"

namespace csym {

namespace {

void check_preconditions(const CMatrix& t, const Conjugation& c, double eps, const char* where) {
  require_same_square(t, c.s(), where);
  require_finite(t, where);
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorKind::InvalidInput, std::string(where) + ": eps must be positive and finite");
  const double res = c_symmetry_residual(t, c);
  if (res > kCertificateTol)
    throw Error(ErrorKind::NotCSymmetric,
                std::string(where) + ": certificate residual " + std::to_string(res) + " exceeds 1e-8");
}

CsoCertificate certify_or_throw(const CMatrix& perturbed, const Conjugation& c, const char* where) {
  const double res = c_symmetry_residual(perturbed, c);
  if (res > kCertificateTol)
    throw Error(ErrorKind::NumericalBreakdown,
                std::string(where) + ": perturbed matrix lost C-symmetry (residual " + std::to_string(res) + ")");
  return {c, res};
}

}  // namespace

PerturbationResult make_irreducible_cso(const CMatrix& t, const Conjugation& c, double eps,
                                        const IrreducibleOptions& opts) {
  check_preconditions(t, c, eps, "make_irreducible_cso");
  const std::size_t n = t.n();
  if (eps < 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + operator_norm(t)))
    throw Error(ErrorKind::EpsTooSmall, "make_irreducible_cso: eps is below the rounding level of T");

  if (opts.part == SpreadPart::Imaginary) {
    // C(iT)C = (iT)^*, so the real-part construction applies to iT; K = -i K'.
    IrreducibleOptions inner = opts;
    inner.part = SpreadPart::Real;
    PerturbationResult r = make_irreducible_cso(cplx{0.0, 1.0} * t, c, eps, inner);
    r.k = cplx{0.0, -1.0} * r.k;
    r.perturbed = t + r.k;
    r.certificate = certify_or_throw(r.perturbed, c, "make_irreducible_cso");
    r.norm_bound = operator_norm(r.k);
    return r;
  }

  // In a C-real basis C is entrywise conjugation and T is a symmetric matrix.
  const CMatrix u = c_real_basis(c, opts.basis_seed).u;
  const CMatrix t0 = u.adjoint() * t * u;
  if ((t0 - t0.transpose()).frobenius_norm() > 1e-8 * (1.0 + t.frobenius_norm()))
    throw Error(ErrorKind::NotCSymmetric, "make_irreducible_cso: T is not symmetric in the C-real basis");
  const CMatrix sym = 0.5 * (t0 + t0.transpose());
  const CMatrix a = sym.real_part();
  const CMatrix b = sym.imag_part();

  // A real symmetric input keeps every Jacobi rotation real.
  const EigenDecomposition eig = hermitian_eig(a);
  const CMatrix q = eig.vectors.real_part();
  const CMatrix b1 = (q.transpose() * b * q).real_part();

  IrreducibleDiagnostics diag;
  diag.eigenvalues = eig.values;
  diag.a_values.resize(n);
  const double spread = eps / (4.0 * static_cast<double>(n));
  CMatrix k_basis(n);
  for (std::size_t j = 0; j < n; ++j) {
    diag.a_values[j] = eig.values[j] + static_cast<double>(j) * spread;
    k_basis(j, j) = diag.a_values[j] - eig.values[j];
  }

  diag.fill = eps / (5.0 * static_cast<double>(n * n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j; l < n; ++l) {
      const double v = b1(j, l).real();
      if (std::abs(v) >= diag.fill) continue;
      const double target = v < 0.0 ? -diag.fill : diag.fill;
      k_basis(j, l) += cplx{0.0, target - v};
      if (l != j) k_basis(l, j) += cplx{0.0, target - v};
      diag.filled_entries += l == j ? 1 : 2;
    }

  diag.basis = u * q;
  PerturbationResult r;
  r.k = diag.basis * k_basis * diag.basis.adjoint();
  r.perturbed = t + r.k;
  r.certificate = certify_or_throw(r.perturbed, c, "make_irreducible_cso");
  r.norm_bound = operator_norm(r.k);
  if (!(r.norm_bound < eps))
    throw Error(ErrorKind::NumericalBreakdown, "make_irreducible_cso: ||K|| reached eps");
  if (opts.check_commutant) diag.commutant = commutant_dimension(r.perturbed, opts.commutant_tol);
  r.irreducible = std::move(diag);
  return r;
}

PerturbationResult remove_point(const CMatrix& t, const Conjugation& c, cplx lambda, double eps,
                                const RemovalOptions& opts) {
  check_preconditions(t, c, eps, "remove_point");
  const std::size_t n = t.n();
  const CMatrix eye = CMatrix::identity(n);
  const CMatrix shifted = t - lambda * eye;
  const SvdResult dec = svd(shifted);
  const double thr = opts.spectral_tol * std::max(1.0, dec.sigma.front());

  PointRemoval rec;
  rec.lambda = lambda;
  rec.budget = eps;
  PerturbationResult r;

  if (dec.sigma.back() > thr) {
    rec.no_op = true;
    rec.sigma_min_after = dec.sigma.back();
    r.k = CMatrix(n);
    r.perturbed = t;
    r.certificate = {c, c_symmetry_residual(t, c)};
    r.norm_bound = 0.0;
    r.removals.push_back(rec);
    return r;
  }

  r.k = CMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (dec.sigma[j] > thr) continue;
    const CVector e = dec.v.column(j);
    r.k += rank_one(c.apply(e), e);
    ++rec.kernel_dim;
  }
  if (rec.kernel_dim == 0)
    throw Error(ErrorKind::DegenerateKernel, "remove_point: spectral point with empty numerical kernel");
  r.k *= eps / 2.0;
  r.perturbed = t + r.k;

  const double floor = opts.floor * std::max(1.0, operator_norm(t));
  rec.sigma_min_after = min_singular_value(r.perturbed - lambda * eye);
  if (!(rec.sigma_min_after > floor))
    throw Error(ErrorKind::NumericalBreakdown, "remove_point: lambda is still spectral after the perturbation");
  rec.near_floor = rec.sigma_min_after < 10.0 * floor;

  r.certificate = certify_or_throw(r.perturbed, c, "remove_point");
  r.norm_bound = operator_norm(r.k);
  r.removals.push_back(rec);
  return r;
}

PerturbationResult remove_points(const CMatrix& t, const Conjugation& c, std::span<const cplx> lambdas, double eps,
                                 const RemovalOptions& opts) {
  check_preconditions(t, c, eps, "remove_points");
  if (lambdas.empty()) throw Error(ErrorKind::InvalidInput, "remove_points: no points given");
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = i + 1; j < lambdas.size(); ++j)
      if (std::abs(lambdas[i] - lambdas[j]) <= 1e-8)
        throw Error(ErrorKind::InvalidInput, "remove_points: points must be pairwise distinct");

  const std::size_t n = t.n();
  const CMatrix eye = CMatrix::identity(n);
  const double floor = opts.floor * std::max(1.0, operator_norm(t));

  CMatrix current = t;
  std::vector<PointRemoval> records;
  auto partial = [&] {
    PerturbationResult p;
    p.perturbed = current;
    p.k = current - t;
    p.certificate = {c, c_symmetry_residual(current, c)};
    p.norm_bound = operator_norm(p.k);
    p.removals = records;
    return p;
  };

  double budget = eps;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    budget /= 2.0;
    double step_budget = budget;
    bool accepted = false;
    for (int attempt = 0; attempt <= opts.max_retries && !accepted; ++attempt) {
      PerturbationResult step;
      try {
        step = remove_point(current, c, lambdas[i], step_budget, opts);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericalBreakdown) throw;
        step_budget /= 2.0;
        continue;
      }
      bool ok = true;
      for (std::size_t j = 0; j <= i && ok; ++j)
        ok = min_singular_value(step.perturbed - lambdas[j] * eye) > floor;
      if (!ok) {
        step_budget /= 2.0;
        continue;
      }
      PointRemoval rec = step.removals.front();
      rec.retries = attempt;
      records.push_back(rec);
      current = std::move(step.perturbed);
      accepted = true;
    }
    if (!accepted)
      throw BudgetExhausted("remove_points: retries exhausted at point " + std::to_string(i), partial());
  }
  PerturbationResult r = partial();
  r.certificate = certify_or_throw(r.perturbed, c, "remove_points");
  return r;
}

}  // namespace csym
