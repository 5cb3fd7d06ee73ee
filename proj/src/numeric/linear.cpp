#include "papseries/numeric/linear.hpp"

#include <stdexcept>
#include <utility>

namespace papseries {

namespace {

// Forward Bareiss sweep over an n x m integer matrix (m >= n), pivoting on the
// first non-zero entry in each column. Returns false when a column has no pivot.
bool bareiss_forward(Matrix<BigInt>& m, std::size_t n, int* swaps) {
  BigInt previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m(pivot, k) == 0) ++pivot;
    if (pivot == n) return false;
    if (pivot != k) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(k, j), m(pivot, j));
      if (swaps) ++*swaps;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < m.cols(); ++j) {
        BigInt v = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, k) = 0;
    }
    previous = m(k, k);
  }
  return true;
}

}  // namespace

std::optional<std::vector<BigRational>> solve_linear(const Matrix<BigRational>& a, const std::vector<BigRational>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: A must be square and match b");
  if (n == 0) return std::vector<BigRational>{};

  // Clear denominators row by row.
  Matrix<BigInt> m(n, n + 1, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    BigInt scale = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).get_den_mpz_t());
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b[i].get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j).get_num() * (scale / a(i, j).get_den());
    m(i, n) = b[i].get_num() * (scale / b[i].get_den());
  }
  if (!bareiss_forward(m, n, nullptr)) return std::nullopt;

  std::vector<BigRational> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    BigRational acc(m(ii, n));
    for (std::size_t j = ii + 1; j < n; ++j) acc -= BigRational(m(ii, j)) * x[j];
    acc /= BigRational(m(ii, ii));
    acc.canonicalize();
    x[ii] = std::move(acc);
  }
  return x;
}

std::optional<std::vector<HPFloat>> solve_linear(const Matrix<HPFloat>& a, const std::vector<HPFloat>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: A must be square and match b");
  if (n == 0) return std::vector<HPFloat>{};
  const Precision prec = a(0, 0).precision();

  Matrix<HPFloat> m(n, n + 1, HPFloat(prec));
  HPFloat largest(prec);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      largest = max(largest, abs(a(i, j)));
    }
    m(i, n) = b[i];
  }
  if (largest.is_zero()) return std::nullopt;
  const long guard = static_cast<long>(prec.digits) - 10;
  const HPFloat threshold = largest * pow(HPFloat(10L, prec), -(guard > 1 ? guard : 1));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (abs(m(i, k)) > abs(m(pivot, k))) pivot = i;
    }
    if (abs(m(pivot, k)) <= threshold) return std::nullopt;
    if (pivot != k) {
      for (std::size_t j = k; j <= n; ++j) std::swap(m(k, j), m(pivot, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      HPFloat factor = m(i, k) / m(k, k);
      if (factor.is_zero()) continue;
      for (std::size_t j = k + 1; j <= n; ++j) m(i, j) -= factor * m(k, j);
      m(i, k) = HPFloat(prec);
    }
  }
  std::vector<HPFloat> x(n, HPFloat(prec));
  for (std::size_t ii = n; ii-- > 0;) {
    HPFloat acc = m(ii, n);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= m(ii, j) * x[j];
    x[ii] = acc / m(ii, ii);
  }
  return x;
}

BigInt determinant(Matrix<BigInt> a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("determinant: matrix must be square");
  if (n == 0) return 1;
  int swaps = 0;
  if (!bareiss_forward(a, n, &swaps)) return 0;
  BigInt det = a(n - 1, n - 1);
  return swaps % 2 == 0 ? det : BigInt(-det);
}

std::vector<BigInt> leading_principal_minors(const Matrix<BigInt>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("leading_principal_minors: matrix must be square");
  std::vector<BigInt> minors;
  minors.reserve(n);

  // Without row exchanges the k-th Bareiss pivot is the k x k leading minor.
  Matrix<BigInt> m = a;
  BigInt previous = 1;
  std::size_t k = 0;
  for (; k < n; ++k) {
    minors.push_back(m(k, k));
    if (m(k, k) == 0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, k) = 0;
    }
    previous = m(k, k);
  }
  // A vanishing minor stops the pivot chain; finish the rest directly.
  for (std::size_t size = minors.size() + 1; size <= n; ++size) {
    Matrix<BigInt> sub(size, size, BigInt(0));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) sub(i, j) = a(i, j);
    minors.push_back(determinant(std::move(sub)));
  }
  return minors;
}

std::optional<LeastSquaresFit> fit_least_squares(const std::vector<HPFloat>& xs, const std::vector<HPFloat>& ys,
                                                 const std::vector<BasisFunction>& basis) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_least_squares: xs and ys differ in length");
  if (basis.empty() || xs.size() < basis.size()) {
    throw std::invalid_argument("fit_least_squares: need at least as many points as basis functions");
  }
  const Precision prec = ys.front().precision();
  const std::size_t m = xs.size();
  const std::size_t k = basis.size();

  Matrix<HPFloat> design(m, k, HPFloat(prec));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) design(i, j) = basis[j](xs[i]);

  Matrix<HPFloat> normal(k, k, HPFloat(prec));
  std::vector<HPFloat> rhs(k, HPFloat(prec));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r; c < k; ++c) {
      HPFloat s(prec);
      for (std::size_t i = 0; i < m; ++i) s += design(i, r) * design(i, c);
      normal(r, c) = s;
      normal(c, r) = s;
    }
    HPFloat s(prec);
    for (std::size_t i = 0; i < m; ++i) s += design(i, r) * ys[i];
    rhs[r] = s;
  }
  auto solution = solve_linear(normal, rhs);
  if (!solution) return std::nullopt;

  HPFloat sum_sq(prec);
  for (std::size_t i = 0; i < m; ++i) {
    HPFloat fitted(prec);
    for (std::size_t j = 0; j < k; ++j) fitted += (*solution)[j] * design(i, j);
    HPFloat r = ys[i] - fitted;
    sum_sq += r * r;
  }
  return LeastSquaresFit{std::move(*solution), sqrt(sum_sq / static_cast<long>(m))};
}

}  // namespace papseries
