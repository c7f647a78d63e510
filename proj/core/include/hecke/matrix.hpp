#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hecke/error.hpp"
#include "hecke/integer.hpp"
#include "hecke/prime_power.hpp"

namespace hecke {

/// Dense row-major matrix. Arithmetic is exact in T; modular reduction is
/// explicit through the free functions below.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, "matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix c = a;
    for (auto& x : c.data_) x *= s;
    return c;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum: dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rational>;
using IntVector = std::vector<Int>;

// ---------------------------------------------------------------------------
// Linear algebra over Z/ell^N. All inputs may hold arbitrary integers; all
// outputs hold canonical representatives in [0, ell^N).

IntMatrix reduce(const IntMatrix& a, const PrimePower& pp);
IntMatrix mul_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp);
IntMatrix add_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp);
IntMatrix sub_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp);
IntMatrix scale_mod(const Int& s, const IntMatrix& a, const PrimePower& pp);
IntMatrix pow_mod(const IntMatrix& a, unsigned long k, const PrimePower& pp);
bool commute_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp);
bool is_zero_mod(const IntMatrix& a, const PrimePower& pp);

/// Minimum ell-adic valuation of the entries, capped at the precision.
int matrix_valuation(const IntMatrix& a, const PrimePower& pp);

/// Local Smith normal form P*A*Q = diag(ell^exps[i]) over Z/ell^N.
/// `exps[i] == N` marks a zero diagonal entry; `rank` counts the others.
struct SmithForm {
  IntMatrix P;
  IntMatrix Q;
  std::vector<int> exps;
  std::size_t rank = 0;
};

SmithForm smith_form(const IntMatrix& a, const PrimePower& pp);

/// A solution of A x = b modulo ell^N, if one exists.
std::optional<IntVector> solve_mod(const IntMatrix& a, const IntVector& b, const PrimePower& pp);

/// A solution of A x = b modulo ell^k for the largest k <= N at which the
/// system is consistent. `determined` is the precision to which x itself is
/// pinned down (k minus the largest nonzero Smith exponent).
struct BestSolution {
  IntVector x;
  int consistent_precision = 0;
  int determined_precision = 0;
};
BestSolution solve_best_mod(const IntMatrix& a, const IntVector& b, const PrimePower& pp);

/// Generators (as columns) of the kernel {x : A x = 0} over Z/ell^N.
IntMatrix kernel_mod(const IntMatrix& a, const PrimePower& pp);

/// Howell normal form of the row span of A over Z/ell^N: canonical, with the
/// zero rows dropped. Two matrices span the same submodule iff their Howell
/// forms are equal.
IntMatrix howell_form(const IntMatrix& a, const PrimePower& pp);

/// Inverse of a matrix that is invertible mod ell.
IntMatrix inverse_mod(const IntMatrix& a, const PrimePower& pp);

/// Rank of A modulo ell (over the residue field).
std::size_t rank_mod_ell(const IntMatrix& a, const PrimePower& pp);

IntVector mat_vec_mod(const IntMatrix& a, const IntVector& v, const PrimePower& pp);

std::string format_matrix(const IntMatrix& a);

}  // namespace hecke
