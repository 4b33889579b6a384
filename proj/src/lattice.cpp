#include "tmodel/lattice.hpp"

#include "tmodel/errors.hpp"

namespace tmodel {

Matrix column_basis(const Matrix& a) {
  SnfResult f = snf(a);
  Matrix b(a.ring(), a.rows(), f.rank());
  for (std::size_t i = 0; i < f.rank(); ++i)
    for (std::size_t r = 0; r < a.rows(); ++r) b.set(r, i, f.U_inv(r, i) * f.diagonal[i]);
  return b;
}

Matrix kernel_basis(const Matrix& a) {
  SnfResult f = snf(a);
  return f.V.block(0, f.rank(), a.cols(), a.cols() - f.rank());
}

LinearSystem::LinearSystem(const Matrix& a)
    : ring_(a.ring()), rows_(a.rows()), cols_(a.cols()), f_(snf(a)) {}

std::optional<Vec> LinearSystem::solve(const Vec& b) const {
  if (b.size() != rows_) throw ShapeMismatch("right-hand side length");
  Vec y = f_.U * b;
  std::size_t r = f_.rank();
  for (std::size_t i = r; i < rows_; ++i)
    if (y[i] != 0) return std::nullopt;
  Vec x(cols_);
  for (std::size_t i = 0; i < r; ++i) {
    const mpz_class& d = f_.diagonal[i];
    if (ring_.is_field()) {
      x[i] = ring_.reduced(y[i] * ring_.inverse(d));
    } else {
      if (!mpz_divisible_p(y[i].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
      mpz_divexact(x[i].get_mpz_t(), y[i].get_mpz_t(), d.get_mpz_t());
    }
  }
  return f_.V * x;
}

std::optional<Matrix> LinearSystem::solve(const Matrix& b) const {
  Matrix out(ring_, cols_, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto x = solve(b.column(j));
    if (!x) return std::nullopt;
    out.set_column(j, *x);
  }
  return out;
}

}  // namespace tmodel
