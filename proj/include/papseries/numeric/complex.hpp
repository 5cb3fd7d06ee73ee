#pragma once

#include "papseries/numeric/hpfloat.hpp"

namespace papseries {

/// Complex number over HPFloat; only the operations the root finder needs.
struct HPComplex {
  HPFloat re;
  HPFloat im;

  explicit HPComplex(Precision p = Precision{}) : re(p), im(p) {}
  HPComplex(HPFloat r, HPFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit HPComplex(HPFloat r) : re(r), im(r.precision()) {}

  Precision precision() const { return re.precision(); }

  HPComplex& operator+=(const HPComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  HPComplex& operator-=(const HPComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend HPComplex operator+(HPComplex a, const HPComplex& b) { return a += b; }
  friend HPComplex operator-(HPComplex a, const HPComplex& b) { return a -= b; }
  friend HPComplex operator*(const HPComplex& a, const HPComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend HPComplex operator*(const HPComplex& a, const HPFloat& s) { return {a.re * s, a.im * s}; }
  friend HPComplex operator/(const HPComplex& a, const HPComplex& b) {
    HPFloat d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  HPComplex operator-() const { return {-re, -im}; }
};

inline HPFloat norm(const HPComplex& z) { return z.re * z.re + z.im * z.im; }
inline HPFloat abs(const HPComplex& z) { return sqrt(norm(z)); }
inline HPFloat arg(const HPComplex& z) { return atan2(z.im, z.re); }

}  // namespace papseries
