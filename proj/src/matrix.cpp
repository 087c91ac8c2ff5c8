#include "csym/matrix.hpp"

#include <cmath>
#include <string>

namespace csym {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::NotCSymmetric: return "NotCSymmetric";
    case ErrorKind::EpsTooSmall: return "EpsTooSmall";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NumericalAmbiguity: return "NumericalAmbiguity";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotUnitary: return "NotUnitary";
  }
  return "Unknown";
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d) {
  CMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<cplx> d) {
  return diagonal(std::span<const cplx>(d.begin(), d.size()));
}

CMatrix CMatrix::flip(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = 1.0;
  return m;
}

CMatrix CMatrix::from_columns(const std::vector<CVector>& cols, std::size_t rows) {
  CMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

CVector CMatrix::column(std::size_t j) const {
  CVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void CMatrix::set_column(std::size_t j, std::span<const cplx> v) {
  if (v.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "set_column");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r(*this);
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

CMatrix CMatrix::real_part() const {
  CMatrix r(*this);
  for (auto& z : r.data_) z = z.real();
  return r;
}

CMatrix CMatrix::imag_part() const {
  CMatrix r(*this);
  for (auto& z : r.data_) z = z.imag();
  return r;
}

cplx CMatrix::trace() const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double CMatrix::frobenius_norm() const {
  // Scaled accumulation so that huge or tiny entries do not over/underflow.
  double scale = 0.0, ssq = 1.0;
  for (const auto& z : data_) {
    for (double v : {z.real(), z.imag()}) {
      if (v == 0.0) continue;
      const double a = std::abs(v);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

bool CMatrix::all_finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  CMatrix r(a.rows(), b.cols());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const cplx x = a(i, l);
      if (x == cplx{}) continue;
      const double xr = x.real(), xi = x.imag();
      for (std::size_t j = 0; j < n; ++j) {
        const cplx y = b(l, j);
        r(i, j) += cplx{xr * y.real() - xi * y.imag(), xr * y.imag() + xi * y.real()};
      }
    }
  }
  return r;
}

CVector operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

CMatrix block_diagonal(std::span<const CMatrix> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    require_square(b, "block_diagonal");
    n += b.n();
  }
  CMatrix r(n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.n(); ++i)
      for (std::size_t j = 0; j < b.n(); ++j) r(off + i, off + j) = b(i, j);
    off += b.n();
  }
  return r;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix rank_one(std::span<const cplx> e, std::span<const cplx> f) {
  CMatrix r(e.size(), f.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) r(i, j) = e[i] * std::conj(f[j]);
  return r;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "inner product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

CVector conj(std::span<const cplx> x) {
  CVector r(x.begin(), x.end());
  for (auto& z : r) z = std::conj(z);
  return r;
}

void require_square(const CMatrix& a, const char* where) {
  if (!a.is_square() || a.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, std::string(where) + ": expected a nonempty square matrix");
}

void require_same_square(const CMatrix& a, const CMatrix& b, const char* where) {
  require_square(a, where);
  require_square(b, where);
  if (a.n() != b.n())
    throw Error(ErrorKind::DimensionMismatch,
                std::string(where) + ": sizes " + std::to_string(a.n()) + " and " + std::to_string(b.n()));
}

}  // namespace csym
