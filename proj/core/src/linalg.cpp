#include "rtr/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace rtr {

namespace {
// Relative pivot collapse that is treated as singular. An exactly resonant
// lossless loop degrades the pivot spread by ten orders of magnitude or
// more, while merely stiff but solvable sweeps stay far above this.
constexpr double kSingularPivotRatio = 1e-13;
}  // namespace

// LU with partial pivoting on a dense complex matrix. The factorization is
// done in place; the right-hand side is permuted along the way so no explicit
// permutation vector is kept. Pivot magnitudes are recorded because their
// spread is the cheapest usable conditioning signal for the small systems
// this library builds.
LuSolution lu_solve(ComplexMatrix a, std::vector<Complex> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
  if (n == 0) throw std::invalid_argument("lu_solve: empty system");

  double pivot_min = 0.0;
  double pivot_max = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_mag = std::abs(a.at(col, col));
    for (std::size_t row = col + 1; row < n; ++row) {
      double mag = std::abs(a.at(row, col));
      if (mag > best_mag) {
        best = row;
        best_mag = mag;
      }
    }
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(col, j), a.at(best, j));
      std::swap(b[col], b[best]);
    }
    if (col == 0) {
      pivot_min = pivot_max = best_mag;
    } else {
      pivot_min = std::min(pivot_min, best_mag);
      pivot_max = std::max(pivot_max, best_mag);
    }
    if (best_mag == 0.0 || best_mag < kSingularPivotRatio * pivot_max)
      throw SingularMatrixError(best_mag,
                                "singular matrix: pivot " + std::to_string(best_mag) +
                                    " at column " + std::to_string(col));
    const Complex pivot = a.at(col, col);
    for (std::size_t row = col + 1; row < n; ++row) {
      const Complex factor = a.at(row, col) / pivot;
      if (factor == Complex{}) continue;
      a.at(row, col) = factor;
      for (std::size_t j = col + 1; j < n; ++j) a.at(row, j) -= factor * a.at(col, j);
      b[row] -= factor * b[col];
    }
  }
  // A small pivot may precede the large ones, so the spread needs one final
  // check against the finished extrema.
  if (pivot_min < kSingularPivotRatio * pivot_max)
    throw SingularMatrixError(pivot_min, "singular matrix: pivot spread " +
                                             std::to_string(pivot_max / pivot_min));

  LuSolution sol;
  sol.pivot_min = pivot_min;
  sol.pivot_max = pivot_max;
  sol.x.resize(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a.at(i, j) * sol.x[j];
    sol.x[i] = acc / a.at(i, i);
  }
  return sol;
}

}  // namespace rtr
