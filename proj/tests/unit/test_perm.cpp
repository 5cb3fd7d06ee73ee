#include <doctest.h>

#include "papseries/perm/enumerate.hpp"

#include <random>
#include <set>

using namespace papseries;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }

}  // namespace

TEST_CASE("containment") {
  CHECK(contains(P("123"), P("123")));
  CHECK_FALSE(contains(P("21"), P("12")));
  CHECK(contains(P("25314"), P("132")));
  CHECK_FALSE(contains(P("54321"), P("12")));
  CHECK(contains(P("3142"), P("2413")) == false);
  CHECK(contains(P("2413"), P("2413")));
}

TEST_CASE("symmetries") {
  CHECK(symmetry(P("25314"), Symmetry::Reverse) == P("41352"));
  CHECK(symmetry(P("12345"), Symmetry::Complement) == P("54321"));
  CHECK(symmetry(P("25314"), Symmetry::Inverse) == P("41352"));
  CHECK(symmetry_orbit(P("25314")).size() == 2);
  CHECK(symmetry_orbit(P("12345")).size() == 2);
}

TEST_CASE("containment commutes with symmetries") {
  std::mt19937 rng(5);
  auto perms7 = all_permutations(7);
  auto pats = all_permutations(4);
  for (int t = 0; t < 300; ++t) {
    const auto& pi = perms7[rng() % perms7.size()];
    const auto& tau = pats[rng() % pats.size()];
    const bool c = contains(pi, tau);
    for (auto op : {Symmetry::Reverse, Symmetry::Complement, Symmetry::Inverse})
      CHECK(contains(symmetry(pi, op), symmetry(tau, op)) == c);
  }
}

TEST_CASE("count_avoiders small cases") {
  CHECK(count_avoiders(PatternSet({P("123")}), 5).counts[5] == 42);
  CHECK(count_avoiders(PatternSet({P("25314")}), 7).counts[7] == 4578);
  CHECK(count_avoiders(PatternSet({P("12345")}), 8).counts[8] == 33324);
  auto one = count_avoiders(PatternSet({P("1")}), 3).counts;
  CHECK(one[0] == 1);
  CHECK(one[1] == 0);
}

TEST_CASE("DFS counter agrees with filtering all of S_n") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<Permutation> chosen;
    const int size = 1 + static_cast<int>(rng() % 3);
    while (static_cast<int>(chosen.size()) < size) {
      const int k = 3 + static_cast<int>(rng() % 3);
      auto all = all_permutations(k);
      chosen.insert(all[rng() % all.size()]);
    }
    PatternSet ps({chosen.begin(), chosen.end()});
    CHECK(count_avoiders(ps, 7).counts == count_avoiders_naive(ps, 7));
  }
}

TEST_CASE("single-pattern counts are invariant under symmetries (all length 5, n <= 7)") {
  for (const auto& tau : all_permutations(5)) {
    const auto base = count_avoiders(PatternSet({tau}), 7).counts;
    for (auto op : {Symmetry::Reverse, Symmetry::Complement, Symmetry::Inverse})
      CHECK(count_avoiders(PatternSet({symmetry(tau, op)}), 7).counts == base);
    for (int n = 0; n < 5; ++n) {
      BigInt f = 1;
      for (int i = 2; i <= n; ++i) f *= i;
      CHECK(base[static_cast<std::size_t>(n)] == f);
    }
    for (int n = 1; n < 7; ++n) CHECK(base[n + 1] * base[n - 1] >= base[n] * base[n]);
  }
}

TEST_CASE("threads do not change counts") {
  EnumerationLimits lim;
  lim.threads = 3;
  auto ps = PatternSet({P("31245")});
  CHECK(count_avoiders(ps, 9, lim).counts == count_avoiders(ps, 9).counts);
}

TEST_CASE("resource cap gives a partial result") {
  EnumerationLimits lim;
  lim.max_nodes = 1000;
  auto r = count_avoiders(PatternSet({P("12345")}), 10, lim);
  CHECK_FALSE(r.complete());
  CHECK(r.last_complete_n >= 5);
  CHECK(r.counts.size() == static_cast<std::size_t>(r.last_complete_n) + 1);
  CHECK(r.counts[5] == 119);
}

TEST_CASE("Wilf classes of lengths 3 and 4") {
  auto c3 = classify_wilf(3, 8);
  REQUIRE(c3.size() == 1);
  CHECK(c3[0].patterns.size() == 6);

  auto c4 = classify_wilf(4, 10);
  REQUIRE(c4.size() == 3);
  std::set<std::string> reps;
  for (const auto& c : c4) reps.insert(c.patterns.front().to_string());
  CHECK(reps == std::set<std::string>{"1234", "1342", "1324"});
}

TEST_CASE("parsing") {
  CHECK(P("1,3,2") == P("132"));
  CHECK(PatternSet::parse("1342,2413").patterns().size() == 2);
  CHECK_THROWS(P("1223"));
  CHECK_THROWS(PatternSet({P("12"), P("12")}));
}
