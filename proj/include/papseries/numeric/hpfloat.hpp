#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace papseries {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Working precision expressed in significant decimal digits.
struct Precision {
  unsigned digits = 100;

  mpfr_prec_t bits() const;
  static Precision from_bits(mpfr_prec_t bits);
  friend bool operator==(Precision, Precision) = default;
};

inline constexpr unsigned kDefaultDigits = 100;

/// Arbitrary precision binary float backed by MPFR.
///
/// Every value carries its own precision; binary operations produce a result
/// at the larger of the two operand precisions. There is no process-wide
/// default, so results depend only on the inputs.
class HPFloat {
 public:
  explicit HPFloat(Precision p = Precision{});
  HPFloat(long v, Precision p);
  HPFloat(double v, Precision p);
  HPFloat(const BigInt& v, Precision p);
  HPFloat(const BigRational& v, Precision p);
  HPFloat(std::string_view decimal, Precision p);

  HPFloat(const HPFloat& other);
  HPFloat(HPFloat&& other) noexcept;
  HPFloat& operator=(const HPFloat& other);
  HPFloat& operator=(HPFloat&& other) noexcept;
  ~HPFloat();

  Precision precision() const { return Precision::from_bits(mpfr_get_prec(v_)); }
  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }

  /// Same value rounded to another precision.
  HPFloat with_precision(Precision p) const;

  double to_double() const;
  /// Scientific notation with `digits` significant digits (0 = full precision).
  std::string to_string(unsigned digits = 0) const;
  /// Plain fixed-point notation with `decimals` digits after the point.
  std::string to_fixed(unsigned decimals) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  HPFloat& operator+=(const HPFloat& o);
  HPFloat& operator-=(const HPFloat& o);
  HPFloat& operator*=(const HPFloat& o);
  HPFloat& operator/=(const HPFloat& o);
  HPFloat& operator+=(long o);
  HPFloat& operator-=(long o);
  HPFloat& operator*=(long o);
  HPFloat& operator/=(long o);

  HPFloat operator-() const;

  friend HPFloat operator+(HPFloat a, const HPFloat& b) { return widened(std::move(a), b) += b; }
  friend HPFloat operator-(HPFloat a, const HPFloat& b) { return widened(std::move(a), b) -= b; }
  friend HPFloat operator*(HPFloat a, const HPFloat& b) { return widened(std::move(a), b) *= b; }
  friend HPFloat operator/(HPFloat a, const HPFloat& b) { return widened(std::move(a), b) /= b; }
  friend HPFloat operator+(HPFloat a, long b) { return a += b; }
  friend HPFloat operator-(HPFloat a, long b) { return a -= b; }
  friend HPFloat operator*(HPFloat a, long b) { return a *= b; }
  friend HPFloat operator/(HPFloat a, long b) { return a /= b; }
  friend HPFloat operator+(long a, HPFloat b) { return b += a; }
  friend HPFloat operator-(long a, const HPFloat& b) { return -b + a; }
  friend HPFloat operator*(long a, HPFloat b) { return b *= a; }
  friend HPFloat operator/(long a, const HPFloat& b);

  friend bool operator==(const HPFloat& a, const HPFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const HPFloat& a, const HPFloat& b);
  friend bool operator==(const HPFloat& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const HPFloat& a, long b);

  friend std::ostream& operator<<(std::ostream& os, const HPFloat& x);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  static HPFloat widened(HPFloat a, const HPFloat& b);
  mpfr_t v_;
};

HPFloat abs(const HPFloat& x);
HPFloat sqrt(const HPFloat& x);
HPFloat log(const HPFloat& x);
HPFloat log10(const HPFloat& x);
HPFloat exp(const HPFloat& x);
HPFloat pow(const HPFloat& base, const HPFloat& exponent);
HPFloat pow(const HPFloat& base, long exponent);
HPFloat sin(const HPFloat& x);
HPFloat cos(const HPFloat& x);
HPFloat atan2(const HPFloat& y, const HPFloat& x);
HPFloat pi(Precision p);
HPFloat max(const HPFloat& a, const HPFloat& b);
HPFloat min(const HPFloat& a, const HPFloat& b);

/// n^e for integer n > 0 and real exponent e, at the precision of e.
HPFloat power_of_index(long n, const HPFloat& e);

/// True when |a - b| <= tol * max(1, |a|, |b|).
bool approx_equal(const HPFloat& a, const HPFloat& b, const HPFloat& tol);

}  // namespace papseries
