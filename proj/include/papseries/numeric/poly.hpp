#pragma once

#include "papseries/numeric/complex.hpp"
#include "papseries/numeric/hpfloat.hpp"

#include <climits>
#include <string>
#include <vector>

namespace papseries {

inline bool is_zero(const BigRational& x) { return sgn(x) == 0; }
inline bool is_zero(const HPFloat& x) { return x.is_zero(); }

/// Dense univariate polynomial, coefficients in ascending degree.
/// Trailing zero coefficients are always trimmed; the zero polynomial has
/// no coefficients and degree kZeroDegree.
template <typename T>
class Poly {
 public:
  static constexpr int kZeroDegree = INT_MIN;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  bool is_zero_poly() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  /// Coefficient of z^i (zero beyond the degree); `zero` supplies the type's zero.
  T coeff(std::size_t i, const T& zero) const { return i < c_.size() ? c_[i] : zero; }

  template <typename X>
  X eval(const X& z, X acc) const {
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + lift(*it, z);
    return acc;
  }

  Poly derivative() const {
    std::vector<T> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(T(c_[i] * static_cast<long>(i)));
    return Poly(std::move(d));
  }

 private:
  static HPComplex lift(const HPFloat& a, const HPComplex& z) { return HPComplex(a.with_precision(z.precision())); }
  static HPFloat lift(const HPFloat& a, const HPFloat&) { return a; }
  static BigRational lift(const BigRational& a, const BigRational&) { return a; }
  static HPFloat lift(const BigRational& a, const HPFloat& z) { return HPFloat(a, z.precision()); }
  static HPComplex lift(const BigRational& a, const HPComplex& z) { return HPComplex(HPFloat(a, z.precision())); }

  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

using RationalPoly = Poly<BigRational>;
using HPPoly = Poly<HPFloat>;

HPPoly to_hp(const RationalPoly& p, Precision prec);

}  // namespace papseries
