#include "mmax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmax/error.hpp"

namespace mmax {

LeastSquares3 solve_least_squares3(const std::vector<std::array<double, 3>>& rows,
                                   std::span<const double> rhs, double rank_rtol) {
  const std::size_t m = rows.size();
  if (rhs.size() != m) throw DataError("solve_least_squares3: rhs size mismatch");
  if (m < 3) throw DesignDeficiencyError("solve_least_squares3: fewer than 3 rows");

  // Columns of A, orthogonalized in place; V accumulates the rotations.
  std::array<std::vector<double>, 3> col;
  for (int j = 0; j < 3; ++j) {
    col[j].resize(m);
    for (std::size_t i = 0; i < m; ++i) col[j][i] = rows[i][j];
  }
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (std::size_t i = 0; i < m; ++i) {
          app += col[p][i] * col[p][i];
          aqq += col[q][i] * col[q][i];
          apq += col[p][i] * col[q][i];
        }
        if (std::fabs(apq) <= 10.0 * eps * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double xp = col[p][i], xq = col[q][i];
          col[p][i] = c * xp - s * xq;
          col[q][i] = s * xp + c * xq;
        }
        for (int k = 0; k < 3; ++k) {
          const double vp = v[k][p], vq = v[k][q];
          v[k][p] = c * vp - s * vq;
          v[k][q] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  double sigma[3];
  for (int j = 0; j < 3; ++j) {
    double s2 = 0;
    for (std::size_t i = 0; i < m; ++i) s2 += col[j][i] * col[j][i];
    sigma[j] = std::sqrt(s2);
  }

  // Order descending.
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int a, int b) { return sigma[a] > sigma[b]; });

  LeastSquares3 out;
  const double smax = sigma[order[0]];
  for (int k = 0; k < 3; ++k) out.singular_values[k] = sigma[order[k]];

  std::array<double, 3> a{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    const int j = order[k];
    if (!(sigma[j] > rank_rtol * smax)) continue;
    ++out.rank;
    double ub = 0;  // u_j' * rhs, with u_j = col_j / sigma_j
    for (std::size_t i = 0; i < m; ++i) ub += col[j][i] * rhs[i];
    ub /= sigma[j] * sigma[j];
    for (int r = 0; r < 3; ++r) a[r] += v[r][j] * ub;
  }
  out.a = a;
  return out;
}

}  // namespace mmax
