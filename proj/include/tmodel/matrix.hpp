#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "tmodel/ring.hpp"

namespace tmodel {

using Vec = std::vector<mpz_class>;

/// Dense row-major matrix of arbitrary-precision integers over a Ring.
/// Over F_p every entry is kept reduced to [0, p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(Ring ring, const std::vector<std::vector<mpz_class>>& rows,
                          std::size_t cols_if_empty = 0);
  static Matrix from_columns(Ring ring, std::size_t rows, const std::vector<Vec>& cols);
  static Matrix diagonal(Ring ring, const Vec& diag);
  static Matrix scalar(Ring ring, std::size_t n, const mpz_class& c);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Ring& ring() const { return ring_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, mpz_class v);
  /// Unreduced access; callers must call normalize() afterwards over F_p.
  mpz_class& raw(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  void normalize();

  Vec column(std::size_t c) const;
  Vec row(std::size_t r) const;
  void set_column(std::size_t c, const Vec& v);
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  Matrix select_columns(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix transpose() const;
  Matrix reduced_in(Ring ring) const;

  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);

  bool is_zero() const;
  bool is_identity() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(const Matrix& a);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const mpz_class& c, const Matrix& a);
  friend Vec operator*(const Matrix& a, const Vec& v);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b, const Ring& ring);
Vec scale(const mpz_class& c, const Vec& a, const Ring& ring);

}  // namespace tmodel
