#include "tmodel/snf.hpp"

#include <optional>
#include <utility>

#include "tmodel/errors.hpp"

namespace tmodel {
namespace {

// Dense working state. All row/column operations are mirrored onto the
// transformation matrices so U*M*V = A holds after every step.
class Reducer {
 public:
  Reducer(const Matrix& m, bool track)
      : ring_(m.ring()), rows_(m.rows()), cols_(m.cols()), a_(m), track_(track) {
    if (track_) {
      u_ = Matrix::identity(ring_, rows_);
      ui_ = u_;
      v_ = Matrix::identity(ring_, cols_);
      vi_ = v_;
    }
  }

  void run() {
    std::size_t lim = std::min(rows_, cols_);
    for (std::size_t t = 0; t < lim; ++t) {
      if (!pivot_into(t)) break;
      while (!settle(t)) {
      }
      if (ring_.is_field()) {
        mpz_class inv = ring_.inverse(a_(t, t));
        scale_row(t, inv);
      } else if (a_(t, t) < 0) {
        scale_row(t, -1);
      }
      diag_.push_back(a_(t, t));
    }
  }

  SnfResult result() && {
    std::size_t zc = std::min(rows_, cols_) - diag_.size();
    return SnfResult{std::move(u_), std::move(a_), std::move(v_), std::move(ui_), std::move(vi_),
                     std::move(diag_), zc};
  }
  Vec diagonal() && { return std::move(diag_); }

 private:
  // Smallest |entry| in the trailing block, ties by row then column.
  std::optional<std::pair<std::size_t, std::size_t>> min_entry(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows_; ++i)
      for (std::size_t j = t; j < cols_; ++j) {
        const mpz_class& x = a_(i, j);
        if (x == 0) continue;
        if (!best || mpz_cmpabs(x.get_mpz_t(), a_(best->first, best->second).get_mpz_t()) < 0) best = {{i, j}};
      }
    return best;
  }

  bool pivot_into(std::size_t t) {
    auto p = min_entry(t);
    if (!p) return false;
    if (p->first != t) swap_rows(t, p->first);
    if (p->second != t) swap_cols(t, p->second);
    return true;
  }

  // One elimination sweep; returns true once row/column t are clear and the
  // pivot divides the trailing block.
  bool settle(std::size_t t) {
    bool dirty = false;
    mpz_class q;
    for (std::size_t i = t + 1; i < rows_; ++i) {
      if (a_(i, t) == 0) continue;
      quotient(q, a_(i, t), a_(t, t));
      row_add(i, t, -q);
      if (a_(i, t) != 0) dirty = true;
    }
    for (std::size_t j = t + 1; j < cols_; ++j) {
      if (a_(t, j) == 0) continue;
      quotient(q, a_(t, j), a_(t, t));
      col_add(j, t, -q);
      if (a_(t, j) != 0) dirty = true;
    }
    if (dirty) {
      // A remainder smaller than the pivot appeared; move it into place.
      pivot_into(t);
      return false;
    }
    if (ring_.is_field()) return true;
    for (std::size_t i = t + 1; i < rows_; ++i)
      for (std::size_t j = t + 1; j < cols_; ++j)
        if (!mpz_divisible_p(a_(i, j).get_mpz_t(), a_(t, t).get_mpz_t())) {
          row_add(t, i, 1);
          return false;
        }
    return true;
  }

  void quotient(mpz_class& q, const mpz_class& x, const mpz_class& piv) const {
    if (ring_.is_field()) {
      q = ring_.reduced(x * ring_.inverse(piv));
    } else {
      mpz_tdiv_q(q.get_mpz_t(), x.get_mpz_t(), piv.get_mpz_t());
    }
  }

  static void axpy_row(Matrix& m, std::size_t i, std::size_t t, const mpz_class& c) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(t, j) != 0) mpz_addmul(m.raw(i, j).get_mpz_t(), c.get_mpz_t(), m(t, j).get_mpz_t());
  }
  static void axpy_col(Matrix& m, std::size_t j, std::size_t t, const mpz_class& c) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, t) != 0) mpz_addmul(m.raw(i, j).get_mpz_t(), c.get_mpz_t(), m(i, t).get_mpz_t());
  }
  void reduce_row(Matrix& m, std::size_t i) const {
    if (!ring_.is_field()) return;
    for (std::size_t j = 0; j < m.cols(); ++j) ring_.reduce(m.raw(i, j));
  }
  void reduce_col(Matrix& m, std::size_t j) const {
    if (!ring_.is_field()) return;
    for (std::size_t i = 0; i < m.rows(); ++i) ring_.reduce(m.raw(i, j));
  }

  // row_i += c * row_t
  void row_add(std::size_t i, std::size_t t, const mpz_class& c) {
    axpy_row(a_, i, t, c);
    reduce_row(a_, i);
    if (!track_) return;
    axpy_row(u_, i, t, c);
    reduce_row(u_, i);
    axpy_col(ui_, t, i, -c);
    reduce_col(ui_, t);
  }
  // col_j += c * col_t
  void col_add(std::size_t j, std::size_t t, const mpz_class& c) {
    axpy_col(a_, j, t, c);
    reduce_col(a_, j);
    if (!track_) return;
    axpy_col(v_, j, t, c);
    reduce_col(v_, j);
    axpy_row(vi_, t, j, -c);
    reduce_row(vi_, t);
  }
  static void swap_r(Matrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.raw(a, j), m.raw(b, j));
  }
  static void swap_c(Matrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.raw(i, a), m.raw(i, b));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    swap_r(a_, a, b);
    if (!track_) return;
    swap_r(u_, a, b);
    swap_c(ui_, a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    swap_c(a_, a, b);
    if (!track_) return;
    swap_c(v_, a, b);
    swap_r(vi_, a, b);
  }
  // row_i *= unit c
  void scale_row(std::size_t i, const mpz_class& c) {
    mpz_class cinv = ring_.is_field() ? ring_.inverse(c) : c;  // over Z the units are self-inverse
    for (std::size_t j = 0; j < cols_; ++j) a_.raw(i, j) *= c;
    reduce_row(a_, i);
    if (!track_) return;
    for (std::size_t j = 0; j < rows_; ++j) u_.raw(i, j) *= c;
    reduce_row(u_, i);
    for (std::size_t r = 0; r < rows_; ++r) ui_.raw(r, i) *= cinv;
    reduce_col(ui_, i);
  }

  Ring ring_;
  std::size_t rows_, cols_;
  Matrix a_;
  bool track_;
  Matrix u_, ui_, v_, vi_;
  Vec diag_;
};

}  // namespace

Vec SnfResult::invariant_factors() const {
  Vec out = diagonal;
  out.resize(diagonal.size() + zero_count);
  return out;
}

SnfResult snf(const Matrix& m) {
  Reducer r(m, true);
  r.run();
  return std::move(r).result();
}

Vec snf_diagonal(const Matrix& m) {
  Reducer r(m, false);
  r.run();
  return std::move(r).diagonal();
}

std::size_t rank(const Matrix& m) { return snf_diagonal(m).size(); }

mpz_class determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeMismatch("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  Matrix a = m.reduced_in(Ring::integers());
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && a(s, k) == 0) ++s;
      if (s == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a.raw(k, j), a.raw(s, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class x = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a.raw(i, j).get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  mpz_class d = sign * a(n - 1, n - 1);
  return m.ring().reduced(d);
}

}  // namespace tmodel
