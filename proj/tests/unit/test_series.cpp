#include <doctest.h>

#include "papseries/series/dataset.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace papseries;

namespace {

const Precision kP{60};

ExactSeries from_ints(std::vector<long> v) {
  ExactSeries s;
  s.name = "test";
  for (long x : v) s.coeffs.emplace_back(x);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Independent count of permutations avoiding 12345: by RSK the number is the
// sum of squared standard Young tableaux counts over shapes with at most four
// rows, each given by the hook length formula.
BigInt sum_of_squared_hook_counts(int n) {
  if (n == 0) return 1;
  BigInt total = 0;
  BigInt nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  std::vector<int> shape;
  auto visit = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      BigInt hooks = 1;
      for (std::size_t i = 0; i < shape.size(); ++i) {
        for (int j = 0; j < shape[i]; ++j) {
          int below = 0;
          for (std::size_t k = i + 1; k < shape.size(); ++k) below += shape[k] > j;
          hooks *= shape[i] - j + below;
        }
      }
      BigInt f = nfact / hooks;
      total += f * f;
      return;
    }
    if (shape.size() == 4) return;
    for (int part = std::min(remaining, cap); part >= 1; --part) {
      shape.push_back(part);
      self(self, remaining - part, part);
      shape.pop_back();
    }
  };
  visit(visit, n, n);
  return total;
}

}  // namespace

TEST_CASE("embedded dataset spot values") {
  CHECK(dataset_entries().size() == 16);
  for (const auto& s : dataset()) {
    const long head[] = {1, 1, 2, 6, 24, 119, 694};
    for (int i = 0; i < 7; ++i) CHECK(s.coeffs[static_cast<std::size_t>(i)] == head[i]);
    // Log-convexity over the whole published range.
    for (std::size_t n = 1; n + 1 < s.coeffs.size(); ++n) CHECK(s.coeffs[n + 1] * s.coeffs[n - 1] >= s.coeffs[n] * s.coeffs[n]);
  }
  CHECK(dataset_series("25314").at(7) == 4578);
  CHECK(dataset_series("43251").at(26) == BigInt("41134198972534449502215"));
  CHECK(dataset_series("A047889").at(8) == 33324);
  CHECK(dataset_series("52341").coeffs.size() == 24);
  CHECK(dataset_series("53421").at(9) == 261853);
  CHECK(dataset_series("52341").at(9) == 261863);
  CHECK_THROWS(dataset_series("99999"));
}

TEST_CASE("ratios") {
  auto r = ratios(from_ints({1, 1, 2, 6, 24}), kP);
  REQUIRE(r.size() == 4);
  for (long n = 1; n <= 4; ++n) CHECK(r.at(n) == n);

  auto a = dataset_series("25314");
  CHECK(abs(ratios(a, kP).at(7) - HPFloat(BigRational(4578, 694), kP)) < HPFloat(1e-50, kP));
  CHECK(abs(ratios(a, kP).at(7).to_double() - 6.5965) < 1e-4);
  CHECK(abs(ratios(dataset_series("12345"), kP).at(25).to_double() - 12.0795) < 1e-4);

  CHECK_THROWS(ratios(from_ints({1, 0, 2}), kP));
}

TEST_CASE("ratios of geometric sequences are constant") {
  std::mt19937 rng(9);
  for (int t = 0; t < 20; ++t) {
    BigRational mu(static_cast<long>(1 + rng() % 50), static_cast<long>(1 + rng() % 7));
    mu.canonicalize();
    // Scale by the denominator power so the sequence is integral.
    const int len = 12;
    BigInt den = mu.get_den(), num = mu.get_num();
    ExactSeries s;
    for (int n = 0; n < len; ++n) {
      BigInt v;
      mpz_pow_ui(v.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n));
      BigInt d;
      mpz_pow_ui(d.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(len - n));
      s.coeffs.push_back(v * d);
    }
    auto r = ratios(s, kP);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.values[i] == HPFloat(mu, kP));
  }
}

TEST_CASE("predicted tails are flagged") {
  auto s = from_ints({1, 2, 4});
  s.tail.push_back({HPFloat(8L, kP), HPFloat(0.5, kP)});
  auto r = ratios(s, kP);
  REQUIRE(r.first_predicted);
  CHECK(*r.first_predicted == 3);
  CHECK(r.at(3) == 2);
  CHECK(r.errors.size() == r.size());
  CHECK(r.errors[0] == 0);
  CHECK(r.errors[2] > 0);
}

TEST_CASE("b-file ingestion") {
  auto s = ingest_bfile("0 1\n1 1\n2 2");
  CHECK(s.offset == 0);
  CHECK(s.coeffs == std::vector<BigInt>{1, 1, 2});
  CHECK(ingest_bfile("# comment\n\n5 7\n6 9\n").offset == 5);

  auto line_of = [](const char* text) {
    try {
      ingest_bfile(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("0 1\n1 x\n") == 2);
  CHECK(line_of("0 1\n2 1\n") == 2);
  CHECK(line_of("0 1\n1 1\n1 2\n") == 3);
  CHECK(line_of("0 1\nfoo\n") == 2);
}

TEST_CASE("shipped A047889 b-file agrees with the hook-length oracle and the table") {
  auto s = ingest_bfile_path(PAPSERIES_DATA_DIR "/b047889.txt");
  REQUIRE(s.coeffs.size() >= 102);
  for (int n = 0; n < static_cast<int>(s.coeffs.size()); ++n) CHECK(s.at(n) == sum_of_squared_hook_counts(n));
  auto table = dataset_series("12345");
  for (int n = 0; n <= table.last_exact_index(); ++n) CHECK(s.at(n) == table.at(n));
}

TEST_CASE("export round trips") {
  for (const auto& s : dataset()) {
    auto b = ingest_bfile(export_series(s, SeriesFormat::BFile));
    CHECK(b.coeffs == s.coeffs);
    auto j = ingest_json(export_series(s, SeriesFormat::Json));
    CHECK(j.coeffs == s.coeffs);
    CHECK(j.name == s.name);
  }
  const auto text = export_series(dataset_series("43251"), SeriesFormat::BFile);
  std::istringstream in(text);
  std::string line;
  for (int i = 0; i <= 26; ++i) std::getline(in, line);
  CHECK(line == "26 41134198972534449502215");
  CHECK(text.back() == '\n');
  CHECK(text.substr(text.size() - 2) != "\n\n");

  auto s = from_ints({1, 2});
  s.tail.push_back({HPFloat(4L, kP), HPFloat(0.25, kP)});
  const auto csv = export_series(s, SeriesFormat::Csv);
  CHECK(csv.rfind("n,coefficient,is_predicted,uncertainty\n", 0) == 0);
  CHECK(csv.find("\n2,4") != std::string::npos);
  CHECK(ingest_bfile(export_series(s, SeriesFormat::BFile)).coeffs.size() == 2);
  auto j = ingest_json(export_series(s, SeriesFormat::Json));
  REQUIRE(j.tail.size() == 1);
  CHECK(j.tail[0].value == 4);
}
