#include "tmodel/matrix.hpp"

#include <sstream>

#include "tmodel/errors.hpp"

namespace tmodel {

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(Ring ring, std::size_t n) { return scalar(ring, n, 1); }

Matrix Matrix::scalar(Ring ring, std::size_t n, const mpz_class& c) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, c);
  return m;
}

Matrix Matrix::from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<mpz_class>> rr;
  for (const auto& r : rows) {
    std::vector<mpz_class> row;
    for (long v : r) row.emplace_back(v);
    rr.push_back(std::move(row));
  }
  return from_rows(ring, rr);
}

Matrix Matrix::from_rows(Ring ring, const std::vector<std::vector<mpz_class>>& rows,
                         std::size_t cols_if_empty) {
  std::size_t nc = rows.empty() ? cols_if_empty : rows[0].size();
  Matrix m(ring, rows.size(), nc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw ShapeMismatch("ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(Ring ring, std::size_t rows, const std::vector<Vec>& cols) {
  Matrix m(ring, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

Matrix Matrix::diagonal(Ring ring, const Vec& diag) {
  Matrix m(ring, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, mpz_class v) {
  ring_.reduce(v);
  data_[r * cols_ + c] = std::move(v);
}

void Matrix::normalize() {
  if (!ring_.is_field()) return;
  for (auto& x : data_) ring_.reduce(x);
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void Matrix::set_column(std::size_t c, const Vec& v) {
  if (v.size() != rows_) throw ShapeMismatch("column length");
  for (std::size_t i = 0; i < rows_; ++i) set(i, c, v[i]);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeMismatch("block out of range");
  Matrix m(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m.data_[i * nc + j] = (*this)(r0 + i, c0 + j);
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw ShapeMismatch("set_block out of range");
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) set(r0 + i, c0 + j, m(i, j));
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(ring_, rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i) m.data_[i * idx.size() + j] = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(ring_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.data_[i * cols_ + j] = (*this)(idx[i], j);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.data_[j * rows_ + i] = (*this)(i, j);
  return m;
}

Matrix Matrix::reduced_in(Ring ring) const {
  Matrix m(ring, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = ring.reduced(data_[k]);
  return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw ShapeMismatch("hstack row count");
  Matrix m(a.ring_, a.rows_, a.cols_ + b.cols_);
  m.set_block(0, 0, a);
  m.set_block(0, a.cols_, b);
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw ShapeMismatch("vstack column count");
  Matrix m(a.ring_, a.rows_ + b.rows_, a.cols_);
  m.set_block(0, 0, a);
  m.set_block(a.rows_, 0, b);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  normalize();
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  normalize();
  return *this;
}

Matrix operator-(const Matrix& a) {
  Matrix m = a;
  for (auto& x : m.data_) x = -x;
  m.normalize();
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw ShapeMismatch("matrix product");
  Matrix m(a.ring_, a.rows_, b.cols_);
  mpz_class t;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const mpz_class& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const mpz_class& bkj = b(k, j);
        if (bkj != 0) mpz_addmul(m.data_[i * b.cols_ + j].get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
      }
    }
  m.normalize();
  return m;
}

Matrix operator*(const mpz_class& c, const Matrix& a) {
  Matrix m = a;
  for (auto& x : m.data_) x *= c;
  m.normalize();
  return m;
}

Vec operator*(const Matrix& a, const Vec& v) {
  if (a.cols_ != v.size()) throw ShapeMismatch("matrix-vector product");
  Vec r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (v[k] != 0 && a(i, k) != 0) mpz_addmul(r[i].get_mpz_t(), a(i, k).get_mpz_t(), v[k].get_mpz_t());
    a.ring_.reduce(r[i]);
  }
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

Vec zero_vec(std::size_t n) { return Vec(n); }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

Vec add(const Vec& a, const Vec& b, const Ring& ring) {
  if (a.size() != b.size()) throw ShapeMismatch("vector addition");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = ring.reduced(a[i] + b[i]);
  return r;
}

Vec scale(const mpz_class& c, const Vec& a, const Ring& ring) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = ring.reduced(c * a[i]);
  return r;
}

}  // namespace tmodel
