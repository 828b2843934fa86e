#pragma once

#include <array>
#include <span>
#include <vector>

namespace mmax {

struct LeastSquares3 {
  std::array<double, 3> a{};
  std::array<double, 3> singular_values{};  // descending
  int rank = 0;
};

/// Minimizer of ||G a - q||_2 for an m x 3 design matrix, via one-sided Jacobi
/// orthogonalization (numerically stable SVD route). Columns whose singular
/// value falls below rank_rtol times the largest are treated as null
/// directions; rank reports how many survive.
LeastSquares3 solve_least_squares3(const std::vector<std::array<double, 3>>& rows,
                                   std::span<const double> rhs,
                                   double rank_rtol = 1e-10);

}  // namespace mmax
