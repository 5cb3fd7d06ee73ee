#include <doctest.h>

#include "papseries/cli/cli.hpp"
#include "papseries/cli/pipeline.hpp"
#include "papseries/series/dataset.hpp"

#include <json.hpp>

#include <sstream>

using namespace papseries;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "papseries");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
  auto t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.find_last_of('\n') + 1);
}

}  // namespace

TEST_CASE("enumerate prints n and count") {
  CHECK(last_line(run({"enumerate", "--pattern", "25314", "--max-n", "7"}).out) == "7 4578");
  CHECK(last_line(run({"enumerate", "--pattern", "123", "--max-n", "5"}).out) == "5 42");
  CHECK(last_line(run({"enumerate", "--pattern", "54321", "--max-n", "4"}).out) == "4 24");
  // Av(123, 132) has 2^(n-1) elements.
  CHECK(last_line(run({"enumerate", "--pattern", "123,132", "--max-n", "6"}).out) == "6 32");
}

TEST_CASE("enumeration cap exits with the resource code") {
  const Run r = run({"enumerate", "--pattern", "12345", "--max-n", "12", "--max-nodes", "1000"});
  CHECK(r.code == kExitResource);
  CHECK(!r.err.empty());
}

TEST_CASE("usage errors") {
  CHECK(run({"enumerate", "--pattern", "123", "--max-n", "5", "--bogus"}).code == kExitUsage);
  CHECK(run({"--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"analyze", "no-such-series"}).code == kExitUsage);
  CHECK(run({"analyze", "dyck:1/2:50", "--mode", "powerlaw"}).code == kExitUsage);
  CHECK(run({"analyze", "catalan", "--mode", "stretched"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("series references") {
  const auto cat = std::get<ExactSeries>(resolve_series("catalan:10", 1));
  CHECK(cat.coeffs.size() == 10);
  CHECK(cat.coeffs[9] == 4862);
  const auto geo = std::get<ExactSeries>(resolve_series("geometric:3:5", 1));
  CHECK(geo.coeffs.back() == 81);
  const auto a = std::get<ExactSeries>(resolve_series("random:12", 7));
  const auto b = std::get<ExactSeries>(resolve_series("random:12", 7));
  CHECK(a.coeffs == b.coeffs);
  CHECK(std::holds_alternative<RationalSeries>(resolve_series("dyck:1/2:20", 1)));
  CHECK(std::get<RationalSeries>(resolve_series("dyck:1/2:20", 1)).coeffs.size() == 20);
}

TEST_CASE("bounds on Catalan numbers approach 4") {
  const Run r = run({"--format", "json", "bounds", "catalan:30"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  const double b = std::stod(j.at("stieltjes_bound").get<std::string>());
  CHECK(b <= 4.0 + 1e-12);
  CHECK(b > 3.9);
}

TEST_CASE("random moment sequences pass the Stieltjes test") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = std::get<ExactSeries>(resolve_series("random:8", seed));
    const ContinuedFraction cf = sfraction(s);
    CHECK(!cf.first_negative());
    // alpha_n + alpha_{n+1} is a diagonal entry of the Jacobi matrix, so it
    // cannot exceed the largest node (at most 12).
    for (std::size_t n = 1; n + 1 < cf.alphas.size(); ++n) CHECK(cf.alphas[n] + cf.alphas[n + 1] <= 12);
  }
}

TEST_CASE("analysis output is deterministic and parseable") {
  const Run a = run({"--format", "json", "analyze", "25314"});
  const Run b = run({"--format", "json", "analyze", "25314"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j.contains("estimates"));
  CHECK(run({"--format", "csv", "analyze", "25314"}).code == kExitOk);
}

TEST_CASE("powerlaw pipeline on a pure power law") {
  // c_n = (n+1)(n+2) 5^n: mu = 5, g = 2 exactly.
  ExactSeries s;
  s.name = "pure";
  BigInt p(1);
  for (long n = 0; n < 40; ++n, p *= 5) s.coeffs.push_back(p * (n + 1) * (n + 2));
  AnalysisOptions o;
  o.bounds = false;
  const AnalysisReport rep = analyze_powerlaw(s, o);
  CHECK(rep.estimate("mu").value.to_double() == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(rep.estimate("g").value.to_double() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(rep.model.mu.to_double() == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("reliable_limit") {
  EstimatorSeq r;
  const Precision P{30};
  r.push(1, HPFloat(2L, P));
  r.push(2, HPFloat(2L, P), HPFloat(1e-9, P));
  r.push(3, HPFloat(2L, P), HPFloat(1e-3, P));
  CHECK(reliable_limit(r, 1e-6) == 2);
  CHECK(reliable_limit(r, 1e-2) == 3);
}
