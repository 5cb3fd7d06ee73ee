#pragma once

#include "papseries/numeric/hpfloat.hpp"
#include "papseries/perm/permutation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace papseries {

/// Non-empty set of distinct forbidden patterns.
class PatternSet {
 public:
  explicit PatternSet(std::vector<Permutation> patterns);
  /// Comma separated patterns, e.g. "12345" or "1342,2413".
  static PatternSet parse(std::string_view text);

  const std::vector<Permutation>& patterns() const { return p_; }
  std::string id() const;

 private:
  std::vector<Permutation> p_;
};

struct CountVector {
  std::string id;
  std::vector<BigInt> counts;  // counts[n] for n = 0..last_complete_n
  int requested_n = 0;
  int last_complete_n = 0;

  bool complete() const { return last_complete_n >= requested_n; }
};

struct EnumerationLimits {
  std::optional<std::uint64_t> max_nodes;  // permutations visited
  std::optional<double> max_seconds;
  unsigned threads = 1;
};

/// Number of permutations of length n avoiding every pattern, n = 0..max_n.
/// Depth-first generation by inserting the new maximum, extending only
/// avoiders. When a limit is hit the counts stop at the last length that was
/// fully enumerated.
CountVector count_avoiders(const PatternSet& tau, int max_n, const EnumerationLimits& limits = {});

/// Reference counter: filter all of S_n. Only sensible for n <= 9.
std::vector<BigInt> count_avoiders_naive(const PatternSet& tau, int max_n);

struct WilfClass {
  std::vector<Permutation> patterns;  // sorted; front() is the representative
  std::vector<BigInt> counts;
};

/// Groups all patterns of the given length by their counting sequences up to
/// max_n. Patterns related by reverse/complement/inverse are counted once.
/// Classes are ordered by their count vectors.
std::vector<WilfClass> classify_wilf(int length, int max_n, unsigned threads = 1);

}  // namespace papseries
