#include <doctest.h>

#include "papseries/analysis/stieltjes.hpp"
#include "papseries/series/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace papseries;

namespace {

const Precision kP{60};

ExactSeries series_of(std::vector<long> v, std::string name = "test") {
  ExactSeries s;
  s.name = std::move(name);
  for (long x : v) s.coeffs.emplace_back(x);
  return s;
}

ExactSeries catalan(std::size_t terms) {
  ExactSeries s;
  s.name = "catalan";
  BigInt c = 1;
  for (std::size_t n = 0; n < terms; ++n) {
    s.coeffs.push_back(c);
    c = c * (4 * n + 2) / (n + 2);
  }
  return s;
}

std::vector<BigRational> rationals(std::vector<long> v) {
  std::vector<BigRational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

bool reexpands(const ExactSeries& s, const ContinuedFraction& cf) {
  const auto e = cf.expand(cf.depth() + 1);
  for (std::size_t i = 0; i <= cf.depth(); ++i)
    if (e[i] != BigRational(s.coeffs[i])) return false;
  return true;
}

bool minors_positive(const HankelReport& h) { return h.all_positive(); }

}  // namespace

TEST_CASE("S-fraction of Catalan and factorial numbers") {
  auto cat = sfraction(catalan(7));
  CHECK(cat.alphas == rationals({1, 1, 1, 1, 1, 1, 1}));
  auto long_cat = sfraction(catalan(40));
  for (const auto& a : long_cat.alphas) CHECK(a == 1);

  auto fact = sfraction(series_of({1, 1, 2, 6, 24, 120, 720, 5040, 40320}));
  CHECK(fact.alphas == rationals({1, 1, 1, 2, 2, 3, 3, 4, 4}));

  auto shallow = sfraction(series_of({7, 3, 5}), 0);
  CHECK(shallow.alphas == rationals({7}));
  CHECK(shallow.depth() == 0);
  CHECK_THROWS_AS(sfraction(series_of({1, 2}), 2), std::invalid_argument);
  CHECK_THROWS_AS(sfraction(series_of({0, 1, 2})), std::domain_error);
}

TEST_CASE("quotient-difference breakdown names the index") {
  // A geometric series has alpha_2 = 0; the next quotient divides by it.
  try {
    sfraction(series_of({1, 2, 4, 8, 16}));
    FAIL("expected a breakdown");
  } catch (const SFractionBreakdown& e) {
    CHECK(e.index() == 3);
  }
  CHECK(sfraction(series_of({1, 2, 4}), 2).alphas == rationals({1, 2, 0}));
}

TEST_CASE("re-expansion and the Hankel route agree with the quotient-difference table") {
  for (const auto& s : dataset()) {
    const auto cf = sfraction(s);
    CHECK_MESSAGE(reexpands(s, cf), s.name);
    CHECK_MESSAGE(sfraction_hankel(s).alphas == cf.alphas, s.name);
  }
  const auto fact = series_of({1, 1, 2, 6, 24, 120, 720, 5040});
  CHECK(reexpands(fact, sfraction(fact)));
}

TEST_CASE("Hankel minors") {
  auto cat = hankel_check(catalan(12));
  CHECK(cat.h0.size() == 6);
  CHECK(cat.h1.size() == 6);
  for (const auto& m : cat.h0) CHECK(m == 1);
  for (const auto& m : cat.h1) CHECK(m == 1);
  CHECK(cat.all_positive());

  auto bad = hankel_check(series_of({1, 2, 3, 4}));
  CHECK(bad.h0[1] == -1);
  REQUIRE(bad.first_nonpositive);
  CHECK(bad.first_nonpositive->first == 0);
  CHECK(bad.first_nonpositive->second == 2);
  CHECK(sfraction(series_of({1, 2, 3, 4})).first_negative() == 2u);
  CHECK_THROWS_AS(hhr_bounds(sfraction(series_of({1, 2, 3, 4}))), std::domain_error);

  for (const auto& s : dataset()) {
    const auto h = hankel_check(s);
    CHECK_MESSAGE(h.all_positive(), s.name);
    CHECK_MESSAGE(!sfraction(s).first_negative(), s.name);
  }
}

TEST_CASE("positive alphas iff positive Hankel minors on random log-convex sequences") {
  std::mt19937_64 rng(20261018);
  int with_negative = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ExactSeries s;
    s.name = "random";
    const std::size_t len = 6 + rng() % 10;
    if (trial % 2 == 0) {
      // Nondecreasing integer ratios.
      BigInt c = 1 + static_cast<long>(rng() % 5);
      long k = 1;
      for (std::size_t n = 0; n < len; ++n) {
        s.coeffs.push_back(c);
        k += static_cast<long>(rng() % 3);
        c *= k;
      }
    } else {
      // Positive mixtures of distinct geometric sequences, enough of them
      // that the Hankel matrices keep full rank.
      std::vector<long> w, x(20);
      std::iota(x.begin(), x.end(), 1L);
      std::shuffle(x.begin(), x.end(), rng);
      for (int i = 0; i < 8; ++i) w.push_back(1 + static_cast<long>(rng() % 9));
      for (std::size_t n = 0; n < len; ++n) {
        BigInt c = 0;
        for (int i = 0; i < 8; ++i) {
          BigInt p;
          mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(x[i]), n);
          c += w[i] * p;
        }
        s.coeffs.push_back(c);
      }
    }
    const bool minors = minors_positive(hankel_check(s));
    bool alphas = false;
    try {
      const auto cf = sfraction(s);
      alphas = true;
      for (const auto& a : cf.alphas) alphas = alphas && sgn(a) > 0;
      CHECK(reexpands(s, cf));
    } catch (const SFractionBreakdown&) {
      alphas = false;
    }
    CHECK(alphas == minors);
    if (!minors) ++with_negative;
  }
  // Both outcomes occur, so the equivalence is exercised in each direction.
  CHECK(with_negative > 0);
  CHECK(with_negative < 20);
}

TEST_CASE("log-convex bound") {
  CHECK(logconvex_bound(series_of({1, 7, 49, 343, 2401}), kP) == 7L);
  // The quoted bound uses c_0..c_25.
  const HPFloat b = logconvex_bound(dataset_series("25314").prefix(26), kP);
  CHECK(abs(b / HPFloat("10.8809", kP) - 1L) < HPFloat("1e-3", kP));
}

TEST_CASE("HHR bounds") {
  auto cat = hhr_bounds(sfraction(catalan(20)), kP);
  for (const auto& [n, b] : cat.hhr_bounds) CHECK(abs(b - 4L) < HPFloat("1e-50", kP));
  CHECK(cat.bounds_monotone);
  CHECK(cat.parity_violations.empty());

  auto fact = hhr_bounds(sfraction(series_of({1, 1, 2, 6, 24, 120})), kP);
  CHECK(abs(fact.bound_at(4) - 8L) < HPFloat("1e-50", kP));
  CHECK(abs(fact.max_bound - fact.hhr_bounds.back().second) < HPFloat("1e-50", kP));

  for (const auto& s : dataset()) {
    const auto rep = stieltjes_bounds(s, kP);
    const auto r = ratios(s, kP);
    for (const auto& [n, b] : rep.hhr_bounds) CHECK_MESSAGE(b >= r.at(n), s.name << " n=" << n);
    CHECK(rep.max_bound >= rep.logconvex_bound);
    CHECK(rep.conjectural == (s.name != "Av(12345)"));
  }

  const auto rep = stieltjes_bounds(dataset_series("25314").prefix(26), kP);
  CHECK(abs(rep.max_bound / HPFloat("12.4622", kP) - 1L) < HPFloat("1e-3", kP));
}

TEST_CASE("bound extrapolation and JSON") {
  CHECK(bound_beta(1.0) == doctest::Approx(2.0));
  CHECK(bound_beta(0.75) == doctest::Approx(1.2));
  CHECK(bound_beta(0.5) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(bound_beta(0.0), std::invalid_argument);

  auto rep = stieltjes_bounds(dataset_series("12345"), kP);
  CHECK_FALSE(rep.conjectural);
  extrapolate_bounds(rep, bound_beta(1.0));
  REQUIRE(rep.extrapolated);
  CHECK(rep.extrapolated->first > rep.max_bound);
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["status"] == "proven");
  CHECK(j["bounds"].size() == rep.hhr_bounds.size());
  CHECK(nlohmann::json::parse(stieltjes_bounds(dataset_series("25314"), kP).to_json())["status"] == "conjectural");
  CHECK(sfraction(catalan(3)).alpha_strings() == std::vector<std::string>{"1", "1", "1"});
}
