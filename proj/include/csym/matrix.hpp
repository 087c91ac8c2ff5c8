#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "csym/error.hpp"

namespace csym {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense complex matrix, row-major.
///
/// Operators handled by the library are square; rectangular shapes only occur
/// for internal constraint systems (Kronecker stacks, least-squares Jacobians).
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : CMatrix(n, n) {}
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t n) { return CMatrix(n); }
  static CMatrix diagonal(std::span<const cplx> d);
  static CMatrix diagonal(std::initializer_list<cplx> d);
  /// The antidiagonal permutation (e_i -> e_{n-1-i}).
  static CMatrix flip(std::size_t n);
  /// Columns of the result are the given vectors.
  static CMatrix from_columns(const std::vector<CVector>& cols, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  /// Dimension of a square matrix.
  std::size_t n() const noexcept { return rows_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  CMatrix real_part() const;
  CMatrix imag_part() const;

  cplx trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CVector operator*(const CMatrix& a, std::span<const cplx> x);

/// Block-diagonal matrix with the given square blocks.
CMatrix block_diagonal(std::span<const CMatrix> blocks);
/// AB - BA.
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Rank-one operator x -> <x, f> e, i.e. e f^*.
CMatrix rank_one(std::span<const cplx> e, std::span<const cplx> f);

// Vector helpers.
cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // <x, y> = sum x_i conj(y_i)
double norm2(std::span<const cplx> x);
CVector conj(std::span<const cplx> x);

/// Throws DimensionMismatch unless both matrices are square and of equal size.
void require_same_square(const CMatrix& a, const CMatrix& b, const char* where);
void require_square(const CMatrix& a, const char* where);

}  // namespace csym
