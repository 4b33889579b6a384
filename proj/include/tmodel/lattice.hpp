#pragma once

#include <optional>

#include "tmodel/snf.hpp"

namespace tmodel {

/// Basis of the column span of a (free over a PID, so always a basis).
Matrix column_basis(const Matrix& a);
/// Basis of {x : a x = 0}.
Matrix kernel_basis(const Matrix& a);

/// Integer (or F_p) solutions of a x = b, factoring a once.
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(const Matrix& a);

  std::optional<Vec> solve(const Vec& b) const;
  /// Solves column by column; nullopt if any column is unsolvable.
  std::optional<Matrix> solve(const Matrix& b) const;
  bool contains(const Vec& b) const { return solve(b).has_value(); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  Ring ring_;
  std::size_t rows_ = 0, cols_ = 0;
  SnfResult f_{};
};

}  // namespace tmodel
