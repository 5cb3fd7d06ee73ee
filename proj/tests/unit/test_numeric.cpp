#include <doctest.h>

#include "papseries/numeric/linear.hpp"
#include "papseries/numeric/roots.hpp"

#include <random>

using namespace papseries;

namespace {

const Precision kP{100};

HPFloat hp(long v) { return HPFloat(v, kP); }

BigRational frac(long n, long d) {
  BigRational q(n, d);
  q.canonicalize();
  return q;
}

bool close(const HPFloat& a, const HPFloat& b, long digits) {
  return approx_equal(a, b, pow(hp(10), -digits));
}

}  // namespace

TEST_CASE("rational solve: identity and 2x2") {
  Matrix<BigRational> id(2, 2, BigRational(0));
  id(0, 0) = 1;
  id(1, 1) = 1;
  auto x = solve_linear(id, {BigRational(3), BigRational(5)});
  REQUIRE(x);
  CHECK((*x)[0] == 3);
  CHECK((*x)[1] == 5);

  Matrix<BigRational> a(2, 2, BigRational(1));
  a(1, 1) = 2;
  x = solve_linear(a, {BigRational(2), BigRational(3)});
  REQUIRE(x);
  CHECK((*x)[0] == 1);
  CHECK((*x)[1] == 1);
}

TEST_CASE("rational solve: singular system is flagged") {
  Matrix<BigRational> a(2, 2, BigRational(1));
  CHECK_FALSE(solve_linear(a, {BigRational(1), BigRational(2)}));
}

TEST_CASE("rational solve: random systems re-substitute exactly") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    Matrix<BigRational> a(n, n, BigRational(0));
    std::vector<BigRational> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = frac(d(rng), 1 + std::abs(d(rng)));
      b[i] = frac(d(rng), 7);
    }
    auto x = solve_linear(a, b);
    if (!x) continue;
    for (std::size_t i = 0; i < n; ++i) {
      BigRational s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * (*x)[j];
      CHECK(s == b[i]);
    }
  }
}

TEST_CASE("Vandermonde-type system in {1, k, sqrt k, log k}") {
  const long nodes[] = {9, 16, 25, 36};
  const std::vector<HPFloat> coef = {HPFloat("1.5", kP), HPFloat("-0.25", kP), HPFloat("3", kP), HPFloat("0.75", kP)};
  Matrix<HPFloat> a(4, 4, hp(0));
  std::vector<HPFloat> b(4, hp(0));
  for (int i = 0; i < 4; ++i) {
    const HPFloat k = hp(nodes[i]);
    const HPFloat row[] = {hp(1), k, sqrt(k), log(k)};
    for (int j = 0; j < 4; ++j) {
      a(i, j) = row[j];
      b[i] += row[j] * coef[j];
    }
  }
  auto x = solve_linear(a, b);
  REQUIRE(x);
  for (int j = 0; j < 4; ++j) CHECK(close((*x)[j], coef[j], kP.digits - 10));

  // At rational nodes the log column is replaced by rationals and the solve is exact.
  Matrix<BigRational> q(4, 4, BigRational(0));
  std::vector<BigRational> qb(4);
  const BigRational qc[] = {BigRational(3, 2), BigRational(-1, 4), BigRational(3), BigRational(3, 4)};
  for (int i = 0; i < 4; ++i) {
    const long k = nodes[i];
    const long r = static_cast<long>(std::lround(std::sqrt(static_cast<double>(k))));
    const BigRational row[] = {1, k, r, BigRational(1, k)};
    for (int j = 0; j < 4; ++j) {
      q(i, j) = row[j];
      qb[i] += row[j] * qc[j];
    }
  }
  auto qx = solve_linear(q, qb);
  REQUIRE(qx);
  for (int j = 0; j < 4; ++j) CHECK((*qx)[j] == qc[j]);
}

TEST_CASE("determinant and leading minors") {
  Matrix<BigInt> a(3, 3, BigInt(0));
  const long v[3][3] = {{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
  CHECK(determinant(a) == 4);
  auto m = leading_principal_minors(a);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == 2);
  CHECK(m[1] == 3);
  CHECK(m[2] == 4);

  // Zero first minor forces the direct route.
  Matrix<BigInt> z(2, 2, BigInt(1));
  z(0, 0) = 0;
  m = leading_principal_minors(z);
  CHECK(m[0] == 0);
  CHECK(m[1] == -1);
}

TEST_CASE("roots of small factored polynomials") {
  auto r = poly_roots(RationalPoly({1, -4}), kP);
  REQUIRE(r.size() == 1);
  CHECK(close(r[0].re, HPFloat("0.25", kP), 90));

  r = poly_roots(RationalPoly({1, -7, 12}), kP);
  REQUIRE(r.size() == 2);
  CHECK(close(r[0].re, HPFloat("0.25", kP), 90));
  CHECK(close(r[1].re, HPFloat(BigRational(1, 3), kP), 90));
  CHECK(r[1].im.is_zero());
}

TEST_CASE("roots: planted rational roots of a degree-8 polynomial") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  std::vector<BigRational> planted;
  while (planted.size() < 8) {
    BigRational q = frac(num(rng), den(rng));
    if (sgn(q) != 0 && std::find(planted.begin(), planted.end(), q) == planted.end()) planted.push_back(q);
  }
  std::vector<BigRational> c{1};
  for (const auto& q : planted) {
    std::vector<BigRational> next(c.size() + 1, BigRational(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * q;
    }
    c = next;
  }
  auto r = poly_roots(RationalPoly(c), kP);
  REQUIRE(r.size() == 8);
  std::sort(planted.begin(), planted.end(), [](const BigRational& a, const BigRational& b) { return abs(a) < abs(b); });
  for (const auto& q : planted) {
    const HPFloat target(q, kP);
    bool found = false;
    for (const auto& z : r) found = found || (close(z.re, target, kP.digits - 10) && abs(z.im) < pow(hp(10), -80));
    CHECK(found);
  }
}

TEST_CASE("roots: re-expansion reproduces a complex-rooted polynomial") {
  // 1 + z + z^2 + ... + z^6 has roots on the unit circle.
  RationalPoly p(std::vector<BigRational>(7, BigRational(1)));
  auto r = poly_roots(p, kP);
  REQUIRE(r.size() == 6);
  auto c = expand_roots(r);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(close(c[i].re, hp(1), 90));
    CHECK(abs(c[i].im) < pow(hp(10), -90));
  }
  // Ordering: equal moduli, so ascending argument.
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(arg(r[i - 1]) < arg(r[i]));
}

TEST_CASE("roots: double root converges") {
  auto r = poly_roots(RationalPoly({1, -6, 9}), kP);
  REQUIRE(r.size() == 2);
  CHECK(close(r[0].re, HPFloat(BigRational(1, 3), kP), 40));
  CHECK(close(r[1].re, HPFloat(BigRational(1, 3), kP), 40));
}

TEST_CASE("least squares") {
  std::vector<HPFloat> xs, ys, ys5;
  for (long i = 0; i < 6; ++i) {
    xs.push_back(hp(i));
    ys.push_back(hp(2 + 3 * i));
    ys5.push_back(hp(5));
  }
  const std::vector<BasisFunction> line = {[](const HPFloat& x) { return HPFloat(1L, x.precision()); },
                                           [](const HPFloat& x) { return x; }};
  auto f = fit_least_squares(xs, ys, line);
  REQUIRE(f);
  CHECK(close(f->coefficients[0], hp(2), 90));
  CHECK(close(f->coefficients[1], hp(3), 90));
  CHECK(f->rms_residual < pow(hp(10), -90));

  f = fit_least_squares(xs, ys5, line);
  REQUIRE(f);
  CHECK(close(f->coefficients[0], hp(5), 90));
  CHECK(abs(f->coefficients[1]) < pow(hp(10), -90));

  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<HPFloat> xn, yn;
  for (long i = 0; i < 40; ++i) {
    xn.push_back(HPFloat(static_cast<double>(i) / 10, kP));
    yn.push_back(HPFloat(2.0 + 3.0 * static_cast<double>(i) / 10 + noise(rng), kP));
  }
  f = fit_least_squares(xn, yn, line);
  REQUIRE(f);
  CHECK(f->rms_residual > 0);
  CHECK(abs(f->coefficients[0] - hp(2)) < HPFloat(0.05, kP));
  CHECK(abs(f->coefficients[1] - hp(3)) < HPFloat(0.05, kP));

  // Collinear basis on the nodes.
  const std::vector<BasisFunction> twice = {line[1], [](const HPFloat& x) { return x * 2L; }};
  CHECK_FALSE(fit_least_squares(xs, ys, twice));
}
