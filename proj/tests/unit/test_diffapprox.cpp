#include <doctest.h>

#include "papseries/analysis/diffapprox.hpp"
#include "papseries/series/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

using namespace papseries;

namespace {

const Precision kP{100};

HPFloat hp(const char* s) { return HPFloat(s, kP); }
HPFloat hp(long v) { return HPFloat(v, kP); }

std::vector<BigRational> geometric(long base, std::size_t terms) {
  std::vector<BigRational> out;
  BigRational c(1);
  for (std::size_t n = 0; n < terms; ++n) {
    out.push_back(c);
    c *= base;
  }
  return out;
}

// Coefficients of (1 - 3z)^a for rational a, by the binomial recurrence
// c_n = c_{n-1} * 3 (n - 1 - a) / n.
std::vector<BigRational> binomial_series(BigRational a, std::size_t terms) {
  std::vector<BigRational> out;
  BigRational c(1);
  for (std::size_t n = 0; n < terms; ++n) {
    out.push_back(c);
    c *= BigRational(3) * (BigRational(static_cast<long>(n)) - a) / BigRational(static_cast<long>(n + 1));
    c.canonicalize();
  }
  return out;
}

ExactSeries integer_series(const std::vector<BigRational>& v, std::string name) {
  ExactSeries s;
  s.name = std::move(name);
  for (const auto& c : v) s.coeffs.push_back(c.get_num());
  return s;
}

EnsembleMember member_at(const char* zc, std::vector<const char*> extra = {}) {
  EnsembleMember m;
  m.config = {1, {1, 1}, -1, DAArithmetic::Float};
  SingularityEstimate s{HPComplex(hp(zc)), hp(1L), std::nullopt, false, false, {}};
  m.singularities.push_back(s);
  m.physical = s;
  for (const char* e : extra) m.singularities.push_back({HPComplex(hp(e)), hp(1L), std::nullopt, false, false, {}});
  return m;
}

}  // namespace

TEST_CASE("DA of a geometric series") {
  const DAConfig cfg{1, {1, 1}, -1, DAArithmetic::Exact};
  CHECK(cfg.unknowns() == 3);
  CHECK(cfg.key() == "M1:N1,1:L-1");
  const auto da = build_da(geometric(4, 10), cfg);
  REQUIRE(da.q_exact.size() == 2);
  // (1 - 4z) theta F - 4z F = 0
  CHECK(da.q_exact[1].coeffs() == std::vector<BigRational>{1, -4});
  CHECK(da.q_exact[0].coeffs() == std::vector<BigRational>{0, -4});
  CHECK(da.consumed() == 3);

  const auto sing = singularities(da);
  REQUIRE(sing.size() == 1);
  CHECK(abs(sing[0].location.re - hp("0.25")) < hp("1e-90"));
  REQUIRE(sing[0].exponent);
  CHECK(abs(*sing[0].exponent - 1L) < hp("1e-90"));
  CHECK(sing[0].real_positive());

  const auto next = predict_coefficients_exact(da, 30);
  BigRational c(64);
  for (const auto& v : next) {
    CHECK(v == c);
    c *= 4;
  }
  const auto hpnext = predict_coefficients(build_da(geometric(4, 10), {1, {1, 1}, -1, DAArithmetic::Float}, kP), 5);
  REQUIRE(hpnext.size() == 5);
  CHECK(abs(hpnext[4] / HPFloat(BigInt(BigInt(1) << 14), kP) - 1L) < hp("1e-90"));
}

TEST_CASE("DA exponent convention in both directions") {
  SUBCASE("(1-3z)^(-1/2) from 20 terms") {
    const auto data = binomial_series(BigRational(-1, 2), 20);
    for (auto mode : {DAArithmetic::Exact, DAArithmetic::Float}) {
      const auto da = build_da(data, {1, {1, 1}, -1, mode}, kP);
      const auto s = physical_singularity(singularities(da));
      REQUIRE(s);
      CHECK(abs(s->location.re - HPFloat(BigRational(1, 3), kP)) < hp("1e-8"));
      CHECK(abs(*s->exponent - hp("0.5")) < hp("1e-6"));
    }
  }
  SUBCASE("(1-3z)^(1/2)") {
    const auto da = build_da(binomial_series(BigRational(1, 2), 20), {1, {1, 1}, -1, DAArithmetic::Exact}, kP);
    const auto s = physical_singularity(singularities(da));
    REQUIRE(s);
    CHECK(abs(*s->exponent + hp("0.5")) < hp("1e-60"));
  }
}

TEST_CASE("DA recurrence reproduces the consumed prefix") {
  SUBCASE("exp") {
    std::vector<BigRational> e;
    BigRational c(1);
    for (long n = 0; n < 12; ++n) {
      e.push_back(c);
      c /= n + 1;
    }
    const auto da = build_da(e, {1, {1, 0}, -1, DAArithmetic::Exact});
    CHECK(regenerate_prefix(da) == da.data);
    const auto next = predict_coefficients_exact(da, 10);
    BigRational f = da.data.back();
    for (std::size_t j = 0; j < next.size(); ++j) {
      f /= static_cast<long>(da.consumed() + j);
      CHECK(next[j] == f);
    }
  }
  SUBCASE("polynomial via the inhomogeneous part") {
    const std::vector<BigRational> poly{1, 2, 3, 0, 0};
    const auto da = build_da(poly, {1, {-1, 0}, 2, DAArithmetic::Exact});
    CHECK(da.q_exact[0].is_zero_poly());
    CHECK(da.p_exact.coeffs() == std::vector<BigRational>{0, 2, 6});
    CHECK(regenerate_prefix(da) == std::vector<BigRational>{1, 2, 3});
    CHECK(predict_coefficients_exact(da, 4) == std::vector<BigRational>{0, 0, 0, 0});
  }
  SUBCASE("embedded series, several orders") {
    const auto s = dataset_series("35214");
    std::vector<BigRational> data;
    for (const auto& c : s.coeffs) data.emplace_back(c);
    for (const auto& cfg : {DAConfig{1, {4, 5}, 0, DAArithmetic::Exact}, DAConfig{2, {3, 3, 4}, -1, DAArithmetic::Exact},
                            DAConfig{3, {2, 3, 3, 3}, 1, DAArithmetic::Exact}}) {
      const auto da = build_da(data, cfg);
      CHECK_MESSAGE(regenerate_prefix(da) == da.data, cfg.key());
    }
  }
}

TEST_CASE("DA configuration errors") {
  CHECK_THROWS_AS(build_da(geometric(4, 2), {1, {1, 1}, -1, DAArithmetic::Exact}), std::invalid_argument);
  CHECK_THROWS_AS(DAConfig({2, {1, 1}, -1, DAArithmetic::Exact}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(DAConfig({1, {1, -1}, -1, DAArithmetic::Exact}).validate(), std::invalid_argument);
  // A geometric series satisfies the smaller equation, so a larger one is underdetermined.
  CHECK_THROWS_AS(build_da(geometric(4, 10), {1, {2, 2}, -1, DAArithmetic::Exact}), DefectiveConstruction);
  CHECK_THROWS_AS(build_da(geometric(4, 10), {1, {2, 2}, -1, DAArithmetic::Float}, kP), DefectiveConstruction);
  CHECK_THROWS_AS(predict_coefficients_exact(build_da(geometric(4, 10), {1, {1, 1}, -1, DAArithmetic::Float}, kP), 1),
                  std::logic_error);
}

TEST_CASE("defect rejection") {
  std::vector<EnsembleMember> same{member_at("0.25"), member_at("0.25"), member_at("0.25"), member_at("0.25")};
  reject_defective(same);
  for (const auto& m : same) CHECK_FALSE(m.rejected);

  std::vector<EnsembleMember> planted{member_at("0.25"), member_at("0.2500001"), member_at("0.2499999"),
                                      member_at("0.25", {"0.125"}), member_at("0.25000005")};
  std::vector<std::string> record;
  reject_defective(planted, 0.05, 3.0, &record);
  CHECK(planted[3].rejected);
  CHECK(record.size() == 1);
  for (std::size_t i : {0u, 1u, 2u, 4u}) CHECK_FALSE(planted[i].rejected);

  std::vector<EnsembleMember> spread{member_at("0.25"), member_at("0.2500001"), member_at("0.2499999"),
                                     member_at("0.25000005"), member_at("0.24999995"), member_at("0.26")};
  reject_defective(spread);
  CHECK(spread[5].rejected);
  CHECK(std::count_if(spread.begin(), spread.end(), [](const auto& m) { return m.rejected; }) == 1);

  std::vector<EnsembleMember> two{member_at("0.25"), member_at("0.25")};
  CHECK_THROWS_AS(reject_defective(two), std::invalid_argument);
}

TEST_CASE("default grid") {
  const auto grid = default_grid(26);
  CHECK_FALSE(grid.empty());
  for (const auto& c : grid) {
    CHECK(c.unknowns() == 26);
    CHECK((c.order == 2 || c.order == 3));
    CHECK(c.inhom >= -1);
    CHECK(c.inhom <= 2);
    const auto [lo, hi] = std::minmax_element(c.degrees.begin(), c.degrees.end());
    CHECK(*hi - *lo <= 2);
  }
  std::set<std::string> keys;
  for (const auto& c : grid) keys.insert(c.key());
  CHECK(keys.size() == grid.size());
}

TEST_CASE("series extension") {
  SUBCASE("geometric series has no spread") {
    const auto s = integer_series(geometric(5, 12), "5^n");
    std::vector<DAConfig> grid{{1, {1, 1}, -1, DAArithmetic::Float},
                               {1, {0, 1}, 0, DAArithmetic::Float},
                               {1, {1, 1}, -1, DAArithmetic::Exact}};
    const auto e = extend_series(s, 10, grid, {kP});
    REQUIRE(e.ratios.size() == 10);
    for (const auto& r : e.ratios) {
      CHECK(abs(r.value - 5L) < hp("1e-85"));
      CHECK(r.uncertainty < hp("1e-85"));
    }
    CHECK(e.first_index == 12);
    const auto j = nlohmann::json::parse(e.to_json());
    CHECK(j["ratios"].size() == 10);
    const auto ext = e.apply(s);
    CHECK(ext.tail_ratios.size() == 10);
    CHECK(ext.coeffs.size() == 12);
  }
  SUBCASE("ensemble spread bounds the error on a binomial series") {
    // (1 - 12z)^(-1/2) has integer coefficients binom(2n, n) 3^n.
    ExactSeries s;
    s.name = "central binomial times 3^n";
    BigInt c = 1;
    for (long n = 0; n < 40; ++n) {
      s.coeffs.push_back(c);
      c = c * 3 * (2 * n + 2) * (2 * n + 1) / ((n + 1) * (n + 1));
    }
    const ExactSeries head = s.prefix(20);
    // This function is D-finite, so grids that contain its first-order equation
    // are underdetermined. Keeping Q_0 constant rules that equation out.
    std::vector<DAConfig> grid;
    for (int L = -1; L <= 2; ++L)
      for (int a = 1; a <= 12; ++a)
        for (int b = 0; b <= 12; ++b) {
          DAConfig c{b == 0 ? 1 : 2, b == 0 ? std::vector<int>{0, a} : std::vector<int>{0, a, b}, L, DAArithmetic::Float};
          if (c.unknowns() >= 14 && c.unknowns() <= 20) grid.push_back(c);
        }
    const auto e = extend_series(head, 20, grid, {kP});
    CHECK(e.survivors() >= 10);
    REQUIRE(e.coefficients.size() == 20);
    for (std::size_t j = 0; j < 20; ++j) {
      const HPFloat truth(s.coeffs[20 + j], kP);
      CHECK(abs(e.coefficients[j].value - truth) <= e.coefficients[j].uncertainty * 10L);
      if (j) CHECK(e.coefficients[j].uncertainty >= e.coefficients[j - 1].uncertainty);
    }
  }
  SUBCASE("Av(12345) from 26 terms") {
    const ExactSeries full = ingest_bfile_path(std::string(PAPSERIES_DATA_DIR) + "/b047889.txt");
    const auto e = extend_series(full.prefix(26), 10, default_grid(26), {kP, 1});
    CHECK(abs(e.zc_mean - hp("0.0625")) < hp("1e-4"));
    CHECK(abs(e.exponent_mean + hp("6.5")) < hp("1e-3"));
    for (const auto& m : e.members) {
      if (m.rejected) continue;
      CHECK(abs(m.physical->location.re - hp("0.0625")) < hp("1e-6"));
    }
    const HPFloat r26(BigRational(full.coeffs[26], full.coeffs[25]), kP);
    CHECK(abs(e.ratios[0].value - r26) < hp("1e-15"));
  }
  SUBCASE("threads give the same answer") {
    const auto s = dataset_series("25314");
    const auto grid = default_grid(s.coeffs.size(), {2});
    const auto a = extend_series(s, 5, grid, {kP, 1});
    const auto b = extend_series(s, 5, grid, {kP, 3});
    REQUIRE(a.ratios.size() == b.ratios.size());
    for (std::size_t j = 0; j < a.ratios.size(); ++j) CHECK(a.ratios[j].value == b.ratios[j].value);
    CHECK(a.survivors() == b.survivors());
  }
}

TEST_CASE("diverging members are left out of the aggregate index by index") {
  const ExactSeries s = dataset_series("53421");
  const PredictionEnsemble ens = extend_series(s, 120, default_grid(s.coeffs.size(), {3}), {kP});
  REQUIRE(ens.ratios.size() == 120);
  const double last_exact = BigRational(s.coeffs.back(), s.coeffs[s.coeffs.size() - 2]).get_d();
  double prev = last_exact;
  for (const auto& r : ens.ratios) {
    const double v = r.value.to_double();
    CHECK(v > prev);
    CHECK(v < 19.5);
    prev = v;
  }
  CHECK(std::any_of(ens.exclusions.begin(), ens.exclusions.end(),
                    [](const std::string& e) { return e.find("prediction outlier") != std::string::npos; }));
}
