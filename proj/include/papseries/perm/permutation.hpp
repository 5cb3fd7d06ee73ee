#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace papseries {

/// A permutation of [n] in one-line notation, entries 1..n.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `word` is a bijection on [n].
  explicit Permutation(std::vector<int> word);

  /// "25314" (one digit per entry, n <= 9) or a comma/space separated list.
  static Permutation parse(std::string_view text);

  int size() const { return static_cast<int>(w_.size()); }
  int operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& word() const { return w_; }
  std::string to_string() const;

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> w_;
};

enum class Symmetry { Reverse, Complement, Inverse };

Permutation symmetry(const Permutation& p, Symmetry op);

/// The orbit of p under the group generated by reverse, complement and
/// inverse (at most 8 elements), sorted and deduplicated.
std::vector<Permutation> symmetry_orbit(const Permutation& p);

/// True iff some subsequence of pi is order-isomorphic to tau.
bool contains(const Permutation& pi, const Permutation& tau);

/// All permutations of [n] in lexicographic order.
std::vector<Permutation> all_permutations(int n);

}  // namespace papseries
