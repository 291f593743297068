#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rtr {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Systems here are tiny (a handful of
// nodes plus branch currents), so no sparse machinery.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), d_(n * n) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  Complex& at(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  [[nodiscard]] const Complex& at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> d_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(double pivot, const std::string& what_arg)
      : std::runtime_error(what_arg), pivot_(pivot) {}
  [[nodiscard]] double pivot() const { return pivot_; }

 private:
  double pivot_;
};

struct LuSolution {
  std::vector<Complex> x;
  double pivot_min = 0.0;
  double pivot_max = 0.0;
  // Cheap conditioning proxy, ratio of largest to smallest pivot magnitude.
  [[nodiscard]] double condition_estimate() const { return pivot_max / pivot_min; }
};

// LU factorization with partial pivoting, then forward/back substitution.
// Throws SingularMatrixError (naming the offending pivot) when the smallest
// pivot magnitude falls below 1e-13 of the largest.
[[nodiscard]] LuSolution lu_solve(ComplexMatrix a, std::vector<Complex> b);

}  // namespace rtr
