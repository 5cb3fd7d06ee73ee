#include "papseries/numeric/hpfloat.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace papseries {

namespace {

// log2(10) with a few guard bits so that `digits` decimal digits survive.
constexpr double kLog2Of10 = 3.3219280948873623;
constexpr mpfr_prec_t kGuardBits = 8;

std::string mpfr_to_string(mpfr_srcptr v, const char* format, unsigned digits) {
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, format, static_cast<int>(digits), v);
  std::unique_ptr<char, decltype(&mpfr_free_str)> guard(buffer, &mpfr_free_str);
  return std::string(buffer);
}

}  // namespace

mpfr_prec_t Precision::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + kGuardBits;
}

Precision Precision::from_bits(mpfr_prec_t bits) {
  const auto usable = bits > kGuardBits ? bits - kGuardBits : bits;
  return Precision{static_cast<unsigned>(std::floor(static_cast<double>(usable) / kLog2Of10))};
}

HPFloat::HPFloat(Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_zero(v_, 1);
}

HPFloat::HPFloat(long v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_si(v_, v, MPFR_RNDN);
}

HPFloat::HPFloat(double v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_d(v_, v, MPFR_RNDN);
}

HPFloat::HPFloat(const BigInt& v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

HPFloat::HPFloat(const BigRational& v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

HPFloat::HPFloat(std::string_view decimal, Precision p) {
  mpfr_init2(v_, p.bits());
  const std::string text(decimal);
  if (mpfr_set_str(v_, text.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("not a decimal number: '" + text + "'");
  }
}

HPFloat::HPFloat(const HPFloat& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

HPFloat::HPFloat(HPFloat&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

HPFloat& HPFloat::operator=(const HPFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

HPFloat& HPFloat::operator=(HPFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

HPFloat::~HPFloat() { mpfr_clear(v_); }

HPFloat HPFloat::with_precision(Precision p) const {
  HPFloat r(p);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

HPFloat HPFloat::widened(HPFloat a, const HPFloat& b) {
  if (mpfr_get_prec(b.v_) > mpfr_get_prec(a.v_)) {
    mpfr_prec_round(a.v_, mpfr_get_prec(b.v_), MPFR_RNDN);
  }
  return a;
}

double HPFloat::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string HPFloat::to_string(unsigned digits) const {
  if (digits == 0) digits = precision().digits;
  return mpfr_to_string(v_, "%.*Re", digits > 0 ? digits - 1 : 0);
}

std::string HPFloat::to_fixed(unsigned decimals) const {
  return mpfr_to_string(v_, "%.*Rf", decimals);
}

HPFloat& HPFloat::operator+=(const HPFloat& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator-=(const HPFloat& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator*=(const HPFloat& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator/=(const HPFloat& o) {
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator+=(long o) {
  mpfr_add_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPFloat& HPFloat::operator/=(long o) {
  mpfr_div_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

HPFloat HPFloat::operator-() const {
  HPFloat r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

HPFloat operator/(long a, const HPFloat& b) {
  HPFloat r(b.precision());
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const HPFloat& a, const HPFloat& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const HPFloat& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream& operator<<(std::ostream& os, const HPFloat& x) {
  const auto p = os.precision();
  return os << x.to_string(p > 0 ? static_cast<unsigned>(p) : 17);
}

#define PAPSERIES_UNARY(name, fn)          \
  HPFloat name(const HPFloat& x) {         \
    HPFloat r(x.precision());              \
    mpfr_set_prec(r.raw(), x.bits());      \
    fn(r.raw(), x.raw(), MPFR_RNDN);       \
    return r;                              \
  }

PAPSERIES_UNARY(abs, mpfr_abs)
PAPSERIES_UNARY(sqrt, mpfr_sqrt)
PAPSERIES_UNARY(log, mpfr_log)
PAPSERIES_UNARY(log10, mpfr_log10)
PAPSERIES_UNARY(exp, mpfr_exp)
PAPSERIES_UNARY(sin, mpfr_sin)
PAPSERIES_UNARY(cos, mpfr_cos)

#undef PAPSERIES_UNARY

HPFloat pow(const HPFloat& base, const HPFloat& exponent) {
  HPFloat r(base);
  if (exponent.bits() > r.bits()) mpfr_prec_round(r.raw(), exponent.bits(), MPFR_RNDN);
  mpfr_pow(r.raw(), base.raw(), exponent.raw(), MPFR_RNDN);
  return r;
}

HPFloat pow(const HPFloat& base, long exponent) {
  HPFloat r(base);
  mpfr_pow_si(r.raw(), base.raw(), exponent, MPFR_RNDN);
  return r;
}

HPFloat atan2(const HPFloat& y, const HPFloat& x) {
  HPFloat r(y);
  if (x.bits() > r.bits()) mpfr_prec_round(r.raw(), x.bits(), MPFR_RNDN);
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

HPFloat pi(Precision p) {
  HPFloat r(p);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

HPFloat max(const HPFloat& a, const HPFloat& b) { return a < b ? b : a; }
HPFloat min(const HPFloat& a, const HPFloat& b) { return b < a ? b : a; }

HPFloat power_of_index(long n, const HPFloat& e) {
  HPFloat base(n, e.precision());
  return pow(base, e);
}

bool approx_equal(const HPFloat& a, const HPFloat& b, const HPFloat& tol) {
  HPFloat scale = max(HPFloat(1L, a.precision()), max(abs(a), abs(b)));
  return abs(a - b) <= tol * scale;
}

}  // namespace papseries
