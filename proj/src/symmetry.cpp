#include "csym/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "csym/linalg.hpp"
#include "csym/random.hpp"

namespace csym {

NcPolynomial NcPolynomial::conjugate_coefficients() const {
  NcPolynomial q = *this;
  for (auto& term : q.terms) term.coeff = std::conj(term.coeff);
  return q;
}

std::size_t NcPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& term : terms) d = std::max(d, term.word.size());
  return d;
}

void NcPolynomial::validate() const {
  if (terms.empty()) throw Error(ErrorKind::InvalidSpec, "polynomial has no terms");
  for (const auto& term : terms) {
    if (term.word.size() > 8) throw Error(ErrorKind::InvalidSpec, "word longer than 8: " + term.word);
    if (term.word.find_first_not_of("zw") != std::string::npos)
      throw Error(ErrorKind::InvalidSpec, "word uses letters outside {z, w}: " + term.word);
  }
}

double c_symmetry_residual(const CMatrix& t, const Conjugation& c) {
  require_same_square(t, c.s(), "c_symmetry_residual");
  const CMatrix& s = c.s();
  return (s * t.conj() - t.adjoint() * s).frobenius_norm() / std::max(1.0, t.frobenius_norm());
}

namespace {

// Frobenius-orthonormal basis of complex symmetric n x n matrices.
std::vector<CMatrix> symmetric_basis(std::size_t n) {
  std::vector<CMatrix> basis;
  basis.reserve(n * (n + 1) / 2);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      CMatrix e(n);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = r;
        e(j, i) = r;
      }
      basis.push_back(std::move(e));
    }
  return basis;
}

CMatrix combine(const std::vector<CMatrix>& w, std::span<const cplx> coeff) {
  CMatrix s(w.front().n());
  for (std::size_t k = 0; k < w.size(); ++k) s += coeff[k] * w[k];
  return s;
}

// Frobenius coordinates of x in the orthonormal family w.
CVector coordinates(const std::vector<CMatrix>& w, const CMatrix& x) {
  CVector c(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    cplx h = 0.0;
    const auto wk = w[k].data();
    const auto xd = x.data();
    for (std::size_t i = 0; i < xd.size(); ++i) h += std::conj(wk[i]) * xd[i];
    c[k] = h;
  }
  return c;
}

CMatrix symmetrize(const CMatrix& s) { return 0.5 * (s + s.transpose()); }

// Gauss-Newton on S(c)^* S(c) = I over real and imaginary parts of c.
CVector polish_unitary(const std::vector<CMatrix>& w, CVector coeff, int iters) {
  const std::size_t n = w.front().n(), d = w.size();
  const CMatrix eye = CMatrix::identity(n);
  for (int it = 0; it < iters; ++it) {
    const CMatrix s = combine(w, coeff);
    const CMatrix sa = s.adjoint();
    const CMatrix r = sa * s - eye;
    if (r.frobenius_norm() < 1e-14) break;
    CMatrix jac(2 * n * n, 2 * d);
    for (std::size_t k = 0; k < d; ++k) {
      for (int part = 0; part < 2; ++part) {
        const cplx z = part == 0 ? cplx{1.0, 0.0} : cplx{0.0, 1.0};
        const CMatrix dw = z * w[k];
        const CMatrix dr = sa * dw + dw.adjoint() * s;
        const auto dd = dr.data();
        for (std::size_t i = 0; i < n * n; ++i) {
          jac(i, 2 * k + part) = dd[i].real();
          jac(n * n + i, 2 * k + part) = dd[i].imag();
        }
      }
    }
    CVector rhs(2 * n * n);
    const auto rd = r.data();
    for (std::size_t i = 0; i < n * n; ++i) {
      rhs[i] = -rd[i].real();
      rhs[n * n + i] = -rd[i].imag();
    }
    const CVector step = least_squares(jac, rhs);
    for (std::size_t k = 0; k < d; ++k) coeff[k] += cplx{step[2 * k].real(), step[2 * k + 1].real()};
  }
  return coeff;
}

}  // namespace

FindResult find_conjugation(const CMatrix& t, const FindOptions& opts) {
  require_square(t, "find_conjugation");
  require_finite(t, "find_conjugation");
  if (opts.restarts < 1 || opts.max_iter < 1)
    throw Error(ErrorKind::InvalidInput, "find_conjugation: restarts and max_iter must be >= 1");
  const std::size_t n = t.n();
  FindResult result;

  const Conjugation canonical = canonical_conjugation(n);
  const double canonical_res = c_symmetry_residual(t, canonical);
  if (canonical_res <= kCertificateTol) {
    result.certificate = CsoCertificate{canonical, canonical_res};
    result.best_residual = canonical_res;
    result.solution_dim = n * (n + 1) / 2;
    return result;
  }

  // S conj(T) = T^* S restricted to symmetric S, in coordinates of the
  // symmetric basis. Row index i*n + j holds entry (i, j).
  const std::vector<CMatrix> sym = symmetric_basis(n);
  const CMatrix tc = t.conj(), ta = t.adjoint();
  CMatrix op(n * n, sym.size());
  for (std::size_t k = 0; k < sym.size(); ++k) {
    const CMatrix img = sym[k] * tc - ta * sym[k];
    const auto d = img.data();
    for (std::size_t i = 0; i < d.size(); ++i) op(i, k) = d[i];
  }
  const SvdResult dec = svd(op, false);
  const double thr = opts.kernel_tol * dec.sigma.front();
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < dec.sigma.size(); ++k)
    if (dec.sigma[k] <= thr) keep.push_back(k);
  result.solution_dim = keep.size();
  // With an empty kernel the search still runs on the least-violating
  // direction so that a best residual can be reported.
  if (keep.empty()) keep.push_back(dec.sigma.size() - 1);

  std::vector<CMatrix> w;
  for (std::size_t k : keep) {
    const CVector coeff = dec.v.column(k);
    w.push_back(combine(sym, coeff));
  }

  result.best_residual = canonical_res;
  for (int r = 0; r < opts.restarts; ++r) {
    result.restarts_used = r + 1;
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    CVector coeff(w.size());
    for (auto& z : coeff) z = rng.complex_normal();
    CMatrix s = combine(w, coeff);
    for (int it = 0; it < opts.max_iter; ++it) {
      const CMatrix u = symmetrize(polar_unitary(s));
      coeff = coordinates(w, u);
      s = combine(w, coeff);
      if ((u - s).frobenius_norm() < 1e-10 && unitarity_residual(s) < 1e-10) break;
    }
    coeff = polish_unitary(w, coeff, opts.polish_iter);
    const Conjugation cand(symmetrize(polar_unitary(symmetrize(combine(w, coeff)))));
    const double res = c_symmetry_residual(t, cand);
    result.best_residual = std::min(result.best_residual, res);
    if (res <= kCertificateTol && verify_conjugation(cand).valid(n)) {
      result.certificate = CsoCertificate{cand, res};
      return result;
    }
  }
  return result;
}

FindResult find_conjugation(const CMatrix& t, int restarts, int max_iter) {
  FindOptions opts;
  opts.restarts = restarts;
  opts.max_iter = max_iter;
  return find_conjugation(t, opts);
}

CMatrix word_eval(const NcPolynomial& p, const CMatrix& first, const CMatrix& second) {
  require_same_square(first, second, "word_eval");
  p.validate();
  const std::size_t n = first.n();
  CMatrix sum(n);
  for (const auto& term : p.terms) {
    CMatrix prod = CMatrix::identity(n);
    for (char ch : term.word) prod = prod * (ch == 'z' ? first : second);
    sum += term.coeff * prod;
  }
  return sum;
}

double gnormal_defect(const CMatrix& t, std::span<const NcPolynomial> polys) {
  require_square(t, "gnormal_defect");
  if (polys.empty()) throw Error(ErrorKind::InvalidInput, "gnormal_defect: empty polynomial list");
  const CMatrix ta = t.adjoint();
  double worst = 0.0;
  for (const auto& p : polys) {
    const double lhs = operator_norm(word_eval(p, ta, t));
    const double rhs = operator_norm(word_eval(p.conjugate_coefficients(), t, ta));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + lhs));
  }
  return worst;
}

double trace_defect(const CMatrix& t, std::span<const NcPolynomial> polys) {
  require_square(t, "trace_defect");
  if (polys.empty()) throw Error(ErrorKind::InvalidInput, "trace_defect: empty polynomial list");
  const CMatrix ta = t.adjoint();
  double worst = 0.0;
  for (const auto& p : polys) {
    const cplx direct = word_eval(p, ta, t).trace();
    const cplx tilde = word_eval(p.conjugate_coefficients(), t, ta).trace();
    worst = std::max(worst, std::abs(tilde - std::conj(direct)));
  }
  return worst;
}

std::vector<NcPolynomial> random_polynomials(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NcPolynomial> out(count);
  for (auto& p : out) {
    const auto nterms = rng.uniform_int(1, 5);
    for (std::int64_t k = 0; k < nterms; ++k) {
      NcTerm term;
      const auto len = rng.uniform_int(1, 4);
      for (std::int64_t l = 0; l < len; ++l) term.word.push_back(rng.uniform_int(0, 1) == 0 ? 'z' : 'w');
      term.coeff = rng.unit_disk();
      p.terms.push_back(std::move(term));
    }
  }
  return out;
}

const std::vector<NcPolynomial>& standard_polynomials() {
  static const std::vector<NcPolynomial> polys = random_polynomials(kStandardPolyCount, kStandardPolySeed);
  return polys;
}

const std::vector<NcPolynomial>& obstruction_polynomials() {
  static const std::vector<NcPolynomial> polys = [] {
    std::vector<NcPolynomial> out;
    for (const char* w : {"wwzzwz", "wwzzzwz", "wwwzzwz", "wwzzzzwz", "wwzzzwzz", "wwwzzzwz", "wwzzwzwz",
                          "wwwwzzwz", "wwwzzwwz"})
      out.push_back(NcPolynomial{{NcTerm{1.0, w}}});
    return out;
  }();
  return polys;
}

}  // namespace csym
