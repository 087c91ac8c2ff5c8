#include "csym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace csym {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Column-major working storage for the one-sided Jacobi sweeps.
struct ColumnStore {
  std::size_t m = 0, n = 0;
  std::vector<cplx> data;
  cplx* col(std::size_t j) { return data.data() + j * m; }
  const cplx* col(std::size_t j) const { return data.data() + j * m; }
};

double col_norm_sq(const cplx* x, std::size_t m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

// x^* y
cplx col_dot(const cplx* x, const cplx* y, std::size_t m) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double xr = x[i].real(), xi = x[i].imag(), yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

// [x, y] <- [c x - s (y conj(phi)), s x + c (y conj(phi))]
void col_rotate(cplx* x, cplx* y, std::size_t m, double c, double s, cplx phi) {
  const double pr = phi.real(), pi = -phi.imag();
  for (std::size_t i = 0; i < m; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real() * pr - y[i].imag() * pi;
    const double yi = y[i].real() * pi + y[i].imag() * pr;
    x[i] = {c * xr - s * yr, c * xi - s * yi};
    y[i] = {s * xr + c * yr, s * xi + c * yi};
  }
}

// Hestenes sweeps on the columns of w; accumulates the same rotations into v
// when provided.
void one_sided_jacobi(ColumnStore& w, ColumnStore* v) {
  const std::size_t m = w.m, n = w.n;
  const double tol = kEps * std::sqrt(static_cast<double>(std::max<std::size_t>(m, 1)));
  constexpr int kMaxSweeps = 80;
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = col_norm_sq(w.col(j), m);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norms[p], beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const cplx gamma = col_dot(w.col(p), w.col(q), m);
        const double g = std::abs(gamma);
        if (g <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const cplx phi = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        col_rotate(w.col(p), w.col(q), m, c, s, phi);
        if (v) col_rotate(v->col(p), v->col(q), v->m, c, s, phi);
        // Exact update would be alpha - t g / beta + t g; recompute to avoid drift.
        norms[p] = col_norm_sq(w.col(p), m);
        norms[q] = col_norm_sq(w.col(q), m);
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorKind::NoConvergence, "one-sided Jacobi exceeded sweep limit");
}

ColumnStore to_columns(const CMatrix& a) {
  ColumnStore w{a.rows(), a.cols(), std::vector<cplx>(a.rows() * a.cols())};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) w.col(j)[i] = a(i, j);
  return w;
}

// Extends the orthonormal columns marked `have` to a full orthonormal set.
void complete_orthonormal(CMatrix& u, const std::vector<bool>& have) {
  const std::size_t m = u.rows();
  std::vector<std::size_t> known;
  for (std::size_t j = 0; j < u.cols(); ++j)
    if (have[j]) known.push_back(j);
  std::size_t next_unit = 0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (have[j]) continue;
    CVector best;
    double best_norm = -1.0;
    for (; next_unit < m && best_norm < 0.5; ++next_unit) {
      CVector x(m, 0.0);
      x[next_unit] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k : known) {
          const CVector uk = u.column(k);
          const cplx h = inner(x, uk);
          for (std::size_t i = 0; i < m; ++i) x[i] -= h * uk[i];
        }
      const double nx = norm2(x);
      if (nx > best_norm) {
        best_norm = nx;
        best = std::move(x);
      }
    }
    if (best_norm <= 0.0) throw Error(ErrorKind::NumericalBreakdown, "cannot complete orthonormal basis");
    for (auto& z : best) z /= best_norm;
    u.set_column(j, best);
    known.push_back(j);
  }
}

}  // namespace

void require_finite(const CMatrix& a, const char* where) {
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, std::string(where) + ": matrix has NaN/Inf entries");
}

namespace {

// Householder QR with column pivoting, A P = Q R, in place on w. Reflector k
// is stored in refl[k] (length m - k) with scale beta[k].
struct PivotedQr {
  std::vector<std::size_t> perm;
  std::vector<CVector> refl;
  std::vector<double> beta;
  CMatrix r;  // n x n upper triangular
};

PivotedQr pivoted_qr(ColumnStore w) {
  const std::size_t m = w.m, n = w.n;
  PivotedQr qr;
  qr.perm.resize(n);
  std::iota(qr.perm.begin(), qr.perm.end(), 0);
  qr.refl.resize(n);
  qr.beta.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      const double nj = col_norm_sq(w.col(j) + k, m - k);
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    if (best != k) {
      std::swap_ranges(w.col(k), w.col(k) + m, w.col(best));
      std::swap(qr.perm[k], qr.perm[best]);
    }
    cplx* x = w.col(k) + k;
    const std::size_t len = m - k;
    const double xn = std::sqrt(col_norm_sq(x, len));
    CVector v(x, x + len);
    if (xn == 0.0) {
      qr.refl[k] = std::move(v);
      continue;
    }
    const cplx phase = std::abs(x[0]) == 0.0 ? cplx{1.0} : x[0] / std::abs(x[0]);
    const cplx alpha = -phase * xn;
    v[0] -= alpha;
    const double vn2 = col_norm_sq(v.data(), len);
    if (vn2 == 0.0) {
      qr.refl[k] = std::move(v);
      continue;
    }
    const double beta = 2.0 / vn2;
    for (std::size_t j = k; j < n; ++j) {
      cplx* y = w.col(j) + k;
      const cplx h = beta * col_dot(v.data(), y, len);
      for (std::size_t i = 0; i < len; ++i) y[i] -= h * v[i];
    }
    x[0] = alpha;
    for (std::size_t i = 1; i < len; ++i) x[i] = 0.0;
    qr.refl[k] = std::move(v);
    qr.beta[k] = beta;
  }
  qr.r = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j && i < m; ++i) qr.r(i, j) = w.col(j)[i];
  return qr;
}

SvdResult svd_tall(const CMatrix& a, bool compute_u) {
  const std::size_t m = a.rows(), n = a.cols();
  // Jacobi on X = R^* converges fast after pivoted QR, and the normalized
  // columns of the rotated X are the right singular vectors of A.
  const PivotedQr qr = pivoted_qr(to_columns(a));
  ColumnStore x = to_columns(qr.r.adjoint());
  ColumnStore vx{n, n, std::vector<cplx>(n * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) vx.col(j)[j] = 1.0;
  one_sided_jacobi(x, compute_u ? &vx : nullptr);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(col_norm_sq(x.col(j), n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return norms[p] > norms[q]; });

  SvdResult r{CMatrix(), std::vector<double>(n), CMatrix(n, n)};
  CMatrix ux(n, n);
  std::vector<bool> have(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    r.sigma[k] = norms[j];
    if (norms[j] > std::numeric_limits<double>::min()) {
      for (std::size_t i = 0; i < n; ++i) ux(i, k) = x.col(j)[i] / norms[j];
      have[k] = true;
    }
  }
  if (std::find(have.begin(), have.end(), false) != have.end()) complete_orthonormal(ux, have);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) r.v(qr.perm[i], k) = ux(i, k);

  if (compute_u) {
    // u = Q [V_x; 0], reflectors applied last to first.
    ColumnStore u{m, n, std::vector<cplx>(m * n, 0.0)};
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) u.col(k)[i] = vx.col(order[k])[i];
    for (std::size_t kk = n; kk-- > 0;) {
      if (qr.beta[kk] == 0.0) continue;
      const CVector& v = qr.refl[kk];
      const std::size_t len = m - kk;
      for (std::size_t j = 0; j < n; ++j) {
        cplx* y = u.col(j) + kk;
        const cplx h = qr.beta[kk] * col_dot(v.data(), y, len);
        for (std::size_t i = 0; i < len; ++i) y[i] -= h * v[i];
      }
    }
    r.u = CMatrix(m, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) r.u(i, j) = u.col(j)[i];
  }
  return r;
}

}  // namespace

SvdResult svd(const CMatrix& a, bool compute_u) {
  require_finite(a, "svd");
  if (a.rows() < a.cols()) {
    SvdResult r = svd(a.adjoint(), true);
    std::swap(r.u, r.v);
    return r;
  }
  return svd_tall(a, compute_u);
}

std::vector<double> singular_values(const CMatrix& a) {
  require_finite(a, "singular_values");
  if (a.rows() < a.cols()) return singular_values(a.adjoint());
  ColumnStore w = to_columns(a);
  one_sided_jacobi(w, nullptr);
  std::vector<double> s(w.n);
  for (std::size_t j = 0; j < w.n; ++j) s[j] = std::sqrt(col_norm_sq(w.col(j), w.m));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double operator_norm(const CMatrix& a) {
  require_finite(a, "operator_norm");
  if (a.empty()) return 0.0;
  return singular_values(a).front();
}

double min_singular_value(const CMatrix& a) {
  require_square(a, "min_singular_value");
  return singular_values(a).back();
}

EigenDecomposition hermitian_eig(const CMatrix& input) {
  require_square(input, "hermitian_eig");
  require_finite(input, "hermitian_eig");
  const std::size_t n = input.n();
  const double fro = input.frobenius_norm();
  if ((input - input.adjoint()).frobenius_norm() > 1e-10 * fro)
    throw Error(ErrorKind::NotHermitian, "hermitian_eig: input is not Hermitian within 1e-10 relative");

  CMatrix a = hermitian_part(input);
  CMatrix v = CMatrix::identity(n);
  constexpr int kMaxSweeps = 40;
  const double target = 1e-13 * fro;

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; off_mass() > target; ++sweep) {
    if (sweep == kMaxSweeps) throw Error(ErrorKind::NoConvergence, "hermitian_eig: sweep limit exceeded");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const cplx phi = apq / g;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx cphi = std::conj(phi);
        // R = [[c, s], [-s conj(phi), c conj(phi)]] acting on (p, q); a <- R^* a R.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * cphi * akq;
          a(k, q) = s * akp + c * cphi * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * phi * aqk;
          a(q, k) = s * apk + c * phi * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * cphi * vkq;
          v(k, q) = s * vkp + c * cphi * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition r{std::vector<double>(n), CMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void to_hessenberg(CMatrix& h) {
  const std::size_t n = h.n();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    CVector x(len);
    for (std::size_t i = 0; i < len; ++i) x[i] = h(k + 1 + i, k);
    const double xn = norm2(x);
    if (xn == 0.0) continue;
    const cplx phase = std::abs(x[0]) == 0.0 ? cplx{1.0} : x[0] / std::abs(x[0]);
    x[0] += phase * xn;
    const double vn = norm2(x);
    if (vn == 0.0) continue;
    for (auto& z : x) z /= vn;
    // h <- (I - 2 v v^*) h (I - 2 v v^*), v supported on rows k+1..n-1
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += std::conj(x[i]) * h(k + 1 + i, j);
      s *= 2.0;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= x[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += h(i, k + 1 + j) * x[j];
      s *= 2.0;
      for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= s * std::conj(x[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalue of the 2x2 [[a, b], [c, d]] closest to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx half_tr = 0.5 * (a + d);
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(half_tr * half_tr - det);
  const cplx l1 = half_tr + disc, l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<cplx> eig_general(const CMatrix& a) {
  require_square(a, "eig_general");
  require_finite(a, "eig_general");
  const std::size_t n = a.n();
  CMatrix h = a;
  to_hessenberg(h);
  std::vector<cplx> eig;
  eig.reserve(n);

  const double hnorm = h.frobenius_norm();
  const std::size_t max_iter = 100 * n;
  std::size_t total_iter = 0;
  std::size_t since_deflation = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;

  while (hi >= 0) {
    // Locate the start of the unreduced block ending at hi.
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      double tst = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (tst == 0.0) tst = hnorm;
      if (std::abs(h(lo, lo - 1)) <= kEps * tst || std::abs(h(lo, lo - 1)) < std::numeric_limits<double>::min()) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total_iter > max_iter) throw Error(ErrorKind::NoConvergence, "eig_general: QR iteration cap exceeded");
    ++since_deflation;

    cplx mu;
    if (since_deflation % 10 == 0) {
      // Exceptional shift to break cycling.
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) * cplx{1.0, 0.5};
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    // One explicit shifted QR step on the window [lo, hi] via Givens rotations.
    const std::size_t l = static_cast<std::size_t>(lo), u = static_cast<std::size_t>(hi);
    for (std::size_t k = l; k <= u; ++k) h(k, k) -= mu;
    std::vector<double> cs(u - l);
    std::vector<cplx> sn(u - l);
    for (std::size_t k = l; k < u; ++k) {
      const cplx x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      double c;
      cplx s;
      if (r == 0.0) {
        c = 1.0;
        s = 0.0;
      } else if (std::abs(x) == 0.0) {
        c = 0.0;
        s = 1.0;
      } else {
        c = std::abs(x) / r;
        s = (x / std::abs(x)) * std::conj(y) / r;
      }
      cs[k - l] = c;
      sn[k - l] = s;
      for (std::size_t j = k; j <= u; ++j) {
        const cplx p = h(k, j), q = h(k + 1, j);
        h(k, j) = c * p + s * q;
        h(k + 1, j) = -std::conj(s) * p + c * q;
      }
    }
    for (std::size_t k = l; k < u; ++k) {
      const double c = cs[k - l];
      const cplx s = sn[k - l];
      const std::size_t top = std::min(k + 2, u);
      for (std::size_t i = l; i <= top; ++i) {
        const cplx p = h(i, k), q = h(i, k + 1);
        h(i, k) = c * p + std::conj(s) * q;
        h(i, k + 1) = -s * p + c * q;
      }
    }
    for (std::size_t k = l; k <= u; ++k) h(k, k) += mu;
  }

  std::sort(eig.begin(), eig.end(), [](cplx x, cplx y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return eig;
}

std::vector<CVector> null_space_basis(const CMatrix& a, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "null_space_basis: tol must be positive");
  const SvdResult r = svd(a, false);
  const double thr = tol * std::max(1.0, r.sigma.empty() ? 0.0 : r.sigma.front());
  std::vector<CVector> out;
  for (std::size_t k = 0; k < r.sigma.size(); ++k)
    if (r.sigma[k] <= thr) out.push_back(r.v.column(k));
  return out;
}

CMatrix polar_unitary(const CMatrix& a) {
  require_square(a, "polar_unitary");
  const SvdResult r = svd(a);
  return r.u * r.v.adjoint();
}

CVector least_squares(const CMatrix& a, std::span<const cplx> b, double rcond) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "least_squares");
  const SvdResult r = svd(a);
  const std::size_t k = r.sigma.size();
  const double thr = rcond * (k ? r.sigma.front() : 0.0);
  CVector coeff(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    if (r.sigma[j] <= thr || r.sigma[j] == 0.0) continue;
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::conj(r.u(i, j)) * b[i];
    coeff[j] = s / r.sigma[j];
  }
  return r.v * coeff;
}

double unitarity_residual(const CMatrix& u) {
  require_square(u, "unitarity_residual");
  return (u.adjoint() * u - CMatrix::identity(u.n())).frobenius_norm();
}

double normality_residual(const CMatrix& a) {
  require_square(a, "normality_residual");
  return (a * a.adjoint() - a.adjoint() * a).frobenius_norm();
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix skew_hermitian_part(const CMatrix& a) { return cplx{0.0, -0.5} * (a - a.adjoint()); }

}  // namespace csym
