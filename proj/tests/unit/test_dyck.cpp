#include <doctest.h>

#include "papseries/analysis/ratio.hpp"
#include "papseries/analysis/stieltjes.hpp"
#include "papseries/analysis/stretched.hpp"
#include "papseries/dyck/dyck.hpp"

#include <cmath>

using namespace papseries;

namespace {

const Precision kP{60};

// Height histogram by walking every up/down word of length 2n.
std::vector<long> brute_force_heights(int n) {
  std::vector<long> hist(static_cast<std::size_t>(n) + 1, 0);
  for (unsigned long word = 0; word < (1UL << (2 * n)); ++word) {
    int h = 0, top = 0;
    bool ok = true;
    for (int i = 0; i < 2 * n && ok; ++i) {
      h += (word >> i) & 1UL ? 1 : -1;
      ok = h >= 0;
      top = std::max(top, h);
    }
    if (ok && h == 0) ++hist[top];
  }
  return hist;
}

BigInt catalan(unsigned long n) {
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), 2 * n, n);
  return b / (n + 1);
}

}  // namespace

TEST_CASE("height-resolved Dyck counts") {
  const auto d = dyck_counts(9);
  CHECK(d[0][0] == 1);
  CHECK(d[3][1] == 1);
  CHECK(d[3][2] == 3);
  CHECK(d[3][3] == 1);
  for (int n = 1; n <= 9; ++n) {
    CHECK(d[n][n] == 1);
    CHECK(d[n][0] == 0);
    const auto hist = brute_force_heights(n);
    for (int h = 0; h <= n; ++h) CHECK(d[n][h] == hist[h]);
  }
  CHECK_THROWS_AS(dyck_counts(-1), std::invalid_argument);
}

TEST_CASE("row sums are Catalan numbers") {
  const auto d = dyck_counts(40);
  for (std::size_t n = 0; n < d.size(); ++n) {
    BigInt sum = 0;
    for (const auto& v : d[n]) sum += v;
    CHECK(sum == catalan(n));
  }
}

TEST_CASE("height-weighted series") {
  const auto s = dyck_series(BigRational(1, 2), 6);
  REQUIRE(s.coeffs.size() == 7);
  CHECK(s.coeffs[0] == 1);
  CHECK(s.coeffs[3] == BigRational(11, 8));
  for (const auto& y : {BigRational(1, 3), BigRational(7, 9), BigRational(1, 100)}) {
    CHECK(dyck_series(y, 2).coeffs[1] == y);
  }
  CHECK_THROWS_AS(dyck_series(BigRational(1), 5), std::invalid_argument);
  CHECK_THROWS_AS(dyck_series(BigRational(0), 5), std::invalid_argument);

  // Close to y = 1 the coefficients approach the Catalan numbers from below.
  const auto near = dyck_series(BigRational(999999, 1000000), 12);
  for (unsigned long n = 1; n <= 12; ++n) {
    const double ratio = BigRational(near.coeffs[n] / BigRational(catalan(n))).get_d();
    CHECK(ratio < 1.0);
    CHECK(ratio > 0.9999);
  }
}

TEST_CASE("asymptotic parameters of the weighted series") {
  const auto t = dyck_truth(BigRational(1, 2), kP);
  CHECK(t.mu.to_double() == 4.0);
  CHECK(t.g.to_double() == doctest::Approx(-5.0 / 6.0).epsilon(1e-15));
  REQUIRE(t.sigma);
  CHECK(*t.sigma == BigRational(1, 3));
  REQUIRE(t.mu1);
  REQUIRE(t.C);
  const double r = std::log(2.0);
  const double E = 3.0 * std::cbrt(std::pow(M_PI / 2.0, 2.0));
  const double A = std::pow(2.0, 5.0 / 3.0) * std::pow(M_PI, 5.0 / 6.0) / std::sqrt(3.0);
  CHECK(t.mu1->to_double() == doctest::Approx(std::exp(-E * std::cbrt(r * r))).epsilon(1e-13));
  CHECK(t.C->to_double() == doctest::Approx(2.0 * std::cbrt(r) * A).epsilon(1e-13));
  for (const auto& y : {BigRational(1, 10), BigRational(9, 10)}) {
    const auto m = dyck_truth(y, kP);
    CHECK(m.mu.to_double() == 4.0);
    CHECK(m.mu1->to_double() > 0.0);
    CHECK(m.mu1->to_double() < 1.0);
  }
  CHECK_THROWS_AS(dyck_truth(BigRational(3, 2), kP), std::invalid_argument);
}

TEST_CASE("weighted Dyck series passes through the S-fraction route") {
  const auto s = dyck_series(BigRational(1, 2), 20);
  const auto cf = sfraction(s);
  CHECK(cf.depth() == 20);
  CHECK(cf.expand(21) == s.coeffs);
}

TEST_CASE("stretched-exponential estimators recover the weighted Dyck asymptotics") {
  const auto s = dyck_series(BigRational(1, 2), 400);
  const auto truth = dyck_truth(BigRational(1, 2), kP);
  const HPFloat mu(4L, kP);
  const HPFloat third(BigRational(1, 3), kP);
  const auto d = stretch_diagnostics(s, mu, third, kP);

  const double sigma = extrapolate_tail(d.sigma_known_ratio, 2.0 / 3.0).intercept.to_double();
  CHECK(std::abs(sigma - 1.0 / 3.0) < 0.05);
  CHECK(std::abs(d.sigma_known_ratio.at(400).to_double() - 1.0 / 3.0) < 0.05);

  REQUIRE(d.mu1);
  const double want = (log(*truth.mu1) / 3L).to_double();
  CHECK(std::abs(d.mu1->sigma_log_mu1.to_double() / want - 1.0) < 0.05);

  const EstimatorSeq r = ratios(s, kP);
  CHECK(std::abs(extrapolate_tail(r, 2.0 / 3.0, 100).intercept.to_double() - 4.0) < 0.01);
}
