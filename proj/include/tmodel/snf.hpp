#pragma once

#include "tmodel/matrix.hpp"

namespace tmodel {

/// U * M * V = S with U, V invertible over the ring and S diagonal with d1 | d2 | ...
/// U_inv and V_inv are tracked alongside so callers never need to invert.
struct SnfResult {
  Matrix U, S, V, U_inv, V_inv;
  Vec diagonal;            // nonzero diagonal of S, in order (includes unit entries)
  std::size_t zero_count;  // min(rows, cols) - rank
  std::size_t rank() const { return diagonal.size(); }
  /// Invariant factors as the nonzero diagonal followed by zero_count zeros.
  Vec invariant_factors() const;
};

SnfResult snf(const Matrix& m);

/// Nonzero diagonal only, without transformation tracking.
Vec snf_diagonal(const Matrix& m);

std::size_t rank(const Matrix& m);

/// Fraction-free (Bareiss) determinant of a square matrix.
mpz_class determinant(const Matrix& m);

}  // namespace tmodel
