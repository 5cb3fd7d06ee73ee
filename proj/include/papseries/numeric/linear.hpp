#pragma once

#include "papseries/numeric/hpfloat.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace papseries {

/// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

/// Exact solve of A x = b. Rows are scaled to integers and reduced by
/// fraction-free (Bareiss) elimination with row pivoting, so intermediate
/// entries stay bounded by minors of A. Returns nullopt when A is singular.
std::optional<std::vector<BigRational>> solve_linear(const Matrix<BigRational>& a, const std::vector<BigRational>& b);

/// Partial-pivoting Gaussian elimination at the precision of the inputs.
/// A pivot below 10^-(digits-10) times the largest entry counts as singular.
std::optional<std::vector<HPFloat>> solve_linear(const Matrix<HPFloat>& a, const std::vector<HPFloat>& b);

/// Determinant by Bareiss elimination (exact).
BigInt determinant(Matrix<BigInt> a);

/// Determinants of the leading k x k submatrices, k = 1..n.
std::vector<BigInt> leading_principal_minors(const Matrix<BigInt>& a);

using BasisFunction = std::function<HPFloat(const HPFloat&)>;

struct LeastSquaresFit {
  std::vector<HPFloat> coefficients;
  HPFloat rms_residual;
};

/// Linear least squares of ys against the given basis evaluated at xs,
/// solved through the normal equations. nullopt when the basis is
/// collinear on the nodes.
std::optional<LeastSquaresFit> fit_least_squares(const std::vector<HPFloat>& xs, const std::vector<HPFloat>& ys,
                                                 const std::vector<BasisFunction>& basis);

}  // namespace papseries
