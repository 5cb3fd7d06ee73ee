#include "papseries/perm/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <map>
#include <stdexcept>
#include <thread>

namespace papseries {

PatternSet::PatternSet(std::vector<Permutation> patterns) : p_(std::move(patterns)) {
  if (p_.empty()) throw std::invalid_argument("pattern set must not be empty");
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (p_[i].size() == 0) throw std::invalid_argument("patterns must be non-empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (p_[i] == p_[j]) throw std::invalid_argument("duplicate pattern " + p_[i].to_string());
    }
  }
}

PatternSet PatternSet::parse(std::string_view text) {
  std::vector<Permutation> ps;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    std::string_view piece = text.substr(start, end - start);
    // Single-digit words may also be comma separated: "123,132".
    if (piece.find(',') != std::string_view::npos && piece.find(' ') == std::string_view::npos) {
      std::size_t s = 0;
      while (s <= piece.size()) {
        const std::size_t e = std::min(piece.find(',', s), piece.size());
        if (e > s) ps.push_back(Permutation::parse(piece.substr(s, e - s)));
        s = e + 1;
      }
    } else if (!piece.empty()) {
      ps.push_back(Permutation::parse(piece));
    }
    start = end + 1;
  }
  return PatternSet(std::move(ps));
}

std::string PatternSet::id() const {
  std::string s;
  for (const auto& p : p_) {
    if (!s.empty()) s += p.size() > 9 ? ";" : ",";
    s += p.to_string();
  }
  return s;
}

namespace {

constexpr int kMaxLength = 62;  // gaps fit in a 64-bit mask

using Clock = std::chrono::steady_clock;

// A pattern prepared for occurrence search through its maximum entry.
// Entries are matched left to right, skipping the maximum; each step only
// has to compare against the nearest already-matched values above and below.
struct CompiledPattern {
  int length = 0;
  int max_pos = 0;
  std::vector<int> order;  // pattern indices in matching order (max excluded)
  std::vector<int> lower;  // index into `order` of the closest smaller matched value, or -1
  std::vector<int> upper;  // same for the closest larger value, or -1 (the max)

  explicit CompiledPattern(const Permutation& tau) : length(tau.size()) {
    for (int i = 0; i < length; ++i)
      if (tau[i] == length) max_pos = i;
    for (int i = 0; i < length; ++i)
      if (i != max_pos) order.push_back(i);
    for (std::size_t s = 0; s < order.size(); ++s) {
      const int v = tau[order[s]];
      int lo = -1, hi = -1;
      for (std::size_t t = 0; t < s; ++t) {
        const int u = tau[order[t]];
        if (u < v && (lo < 0 || u > tau[order[static_cast<std::size_t>(lo)]])) lo = static_cast<int>(t);
        if (u > v && (hi < 0 || u < tau[order[static_cast<std::size_t>(hi)]])) hi = static_cast<int>(t);
      }
      lower.push_back(lo);
      upper.push_back(hi);
    }
  }
};

class Enumerator {
 public:
  Enumerator(const PatternSet& tau, const EnumerationLimits& limits) : limits_(limits) {
    for (const auto& p : tau.patterns()) {
      if (p.size() > kMaxLength) throw std::invalid_argument("pattern too long");
      patterns_.emplace_back(p);
    }
  }

  // Counts to depth `target`; returns false if a limit stopped the run.
  bool run(int target, std::vector<std::uint64_t>& counts) {
    counts.assign(static_cast<std::size_t>(target) + 1, 0);
    counts[0] = 1;
    if (target == 0) return true;
    stop_ = false;
    nodes_ = 0;
    start_ = Clock::now();

    const unsigned threads = std::max(1u, limits_.threads);
    Node root{{}, 1};
    if (threads == 1 || target < 4) {
      expand(root, target, counts);
      return !stop_;
    }
    // Split the tree at a shallow depth and hand subtrees to workers.
    const int split = std::min(target - 1, 5);
    std::vector<Node> frontier;
    collect(root, split, counts, frontier);
    std::atomic<std::size_t> next{0};
    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(counts.size(), 0));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = next++; i < frontier.size() && !stop_; i = next++) expand(frontier[i], target, partial[t]);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& part : partial)
      for (std::size_t n = 0; n < counts.size(); ++n) counts[n] += part[n];
    return !stop_;
  }

 private:
  struct Node {
    std::vector<int> perm;
    std::uint64_t candidates;  // gaps worth testing for the next maximum
  };

  // Would the new maximum, placed at gap g, complete an occurrence?
  bool creates_occurrence(const std::vector<int>& perm, int g) const {
    const int n = static_cast<int>(perm.size());
    for (const auto& cp : patterns_) {
      if (cp.length > n + 1) continue;
      if (cp.length == 1) return true;
      int chosen[kMaxLength];
      if (search(cp, perm, g, 0, 0, chosen)) return true;
    }
    return false;
  }

  // Positions in `perm` (length n) are interpreted against the gap g where the
  // new maximum sits: pattern entries before max_pos use positions < g.
  static bool search(const CompiledPattern& cp, const std::vector<int>& perm, int g, std::size_t step, int from,
                     int* chosen) {
    if (step == cp.order.size()) return true;
    const int n = static_cast<int>(perm.size());
    const bool left = cp.order[step] < cp.max_pos;
    const int remaining_left = left ? cp.max_pos - cp.order[step] - 1 : 0;
    const int remaining_right = cp.length - 1 - (left ? cp.max_pos : cp.order[step]);
    int begin = from;
    if (!left && begin < g) begin = g;
    const int end = left ? g - remaining_left : n - remaining_right;
    const int lo = cp.lower[step] >= 0 ? perm[static_cast<std::size_t>(chosen[cp.lower[step]])] : 0;
    const int hi = cp.upper[step] >= 0 ? perm[static_cast<std::size_t>(chosen[cp.upper[step]])] : n + 1;
    for (int pos = begin; pos < end; ++pos) {
      const int v = perm[static_cast<std::size_t>(pos)];
      if (v <= lo || v >= hi) continue;
      chosen[step] = pos;
      if (search(cp, perm, g, step + 1, pos + 1, chosen)) return true;
    }
    return false;
  }

  std::uint64_t active_gaps(const Node& node) const {
    std::uint64_t active = 0;
    for (std::uint64_t m = node.candidates; m; m &= m - 1) {
      const int g = std::countr_zero(m);
      if (!creates_occurrence(node.perm, g)) active |= std::uint64_t{1} << g;
    }
    return active;
  }

  static Node child(const Node& node, std::uint64_t active, int g) {
    const int n = static_cast<int>(node.perm.size());
    Node c;
    c.perm.reserve(static_cast<std::size_t>(n) + 1);
    c.perm.insert(c.perm.end(), node.perm.begin(), node.perm.begin() + g);
    c.perm.push_back(n + 1);
    c.perm.insert(c.perm.end(), node.perm.begin() + g, node.perm.end());
    // A gap that is blocked stays blocked in every extension; the gap that
    // received the new entry splits into the two gaps beside it.
    const std::uint64_t low = active & ((std::uint64_t{1} << g) - 1);
    const std::uint64_t high = (active >> (g + 1)) << (g + 2);
    c.candidates = low | (std::uint64_t{3} << g) | high;
    return c;
  }

  bool over_limit() {
    const std::uint64_t visited = ++nodes_;
    if (limits_.max_nodes && visited > *limits_.max_nodes) return true;
    if (limits_.max_seconds && (visited & 0xfff) == 0) {
      const std::chrono::duration<double> elapsed = Clock::now() - start_;
      if (elapsed.count() > *limits_.max_seconds) return true;
    }
    return false;
  }

  void expand(const Node& node, int target, std::vector<std::uint64_t>& counts) {
    if (stop_) return;
    if (over_limit()) {
      stop_ = true;
      return;
    }
    const int n = static_cast<int>(node.perm.size());
    const std::uint64_t active = active_gaps(node);
    counts[static_cast<std::size_t>(n) + 1] += static_cast<std::uint64_t>(std::popcount(active));
    if (n + 1 >= target) return;
    for (std::uint64_t m = active; m; m &= m - 1) expand(child(node, active, std::countr_zero(m)), target, counts);
  }

  void collect(const Node& node, int depth, std::vector<std::uint64_t>& counts, std::vector<Node>& out) {
    const int n = static_cast<int>(node.perm.size());
    if (n == depth) {
      out.push_back(node);
      return;
    }
    const std::uint64_t active = active_gaps(node);
    counts[static_cast<std::size_t>(n) + 1] += static_cast<std::uint64_t>(std::popcount(active));
    for (std::uint64_t m = active; m; m &= m - 1) collect(child(node, active, std::countr_zero(m)), depth, counts, out);
  }

  EnumerationLimits limits_;
  std::vector<CompiledPattern> patterns_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> nodes_{0};
  Clock::time_point start_;
};

std::vector<BigInt> to_big(const std::vector<std::uint64_t>& v) {
  std::vector<BigInt> out;
  for (auto x : v) out.emplace_back(static_cast<unsigned long>(x));
  return out;
}

}  // namespace

CountVector count_avoiders(const PatternSet& tau, int max_n, const EnumerationLimits& limits) {
  if (max_n < 0) throw std::invalid_argument("max_n must be non-negative");
  if (max_n > kMaxLength) throw std::invalid_argument("max_n too large for the enumerator");
  Enumerator e(tau, limits);
  CountVector result;
  result.id = tau.id();
  result.requested_n = max_n;

  std::vector<std::uint64_t> counts;
  if (!limits.max_nodes && !limits.max_seconds) {
    e.run(max_n, counts);
    result.counts = to_big(counts);
    result.last_complete_n = max_n;
    return result;
  }
  // Under a budget, deepen one level at a time so that a stopped run still
  // leaves every shorter length fully counted. Each pass shares the budget.
  result.counts = {BigInt(1)};
  result.last_complete_n = 0;
  const auto started = Clock::now();
  std::uint64_t used = 0;
  for (int target = 1; target <= max_n; ++target) {
    EnumerationLimits pass = limits;
    if (pass.max_nodes) {
      if (used >= *pass.max_nodes) break;
      pass.max_nodes = *pass.max_nodes - used;
    }
    if (pass.max_seconds) {
      const std::chrono::duration<double> elapsed = Clock::now() - started;
      pass.max_seconds = *pass.max_seconds - elapsed.count();
      if (*pass.max_seconds <= 0) break;
    }
    Enumerator step(tau, pass);
    if (!step.run(target, counts)) break;
    // Nodes visited by a complete pass to depth t equal the avoiders of length < t.
    for (std::size_t n = 0; n + 1 < counts.size(); ++n) used += counts[n];
    result.counts = to_big(counts);
    result.last_complete_n = target;
  }
  return result;
}

std::vector<BigInt> count_avoiders_naive(const PatternSet& tau, int max_n) {
  std::vector<BigInt> out;
  for (int n = 0; n <= max_n; ++n) {
    unsigned long c = 0;
    for (const auto& pi : all_permutations(n)) {
      bool avoids = true;
      for (const auto& t : tau.patterns()) avoids = avoids && !contains(pi, t);
      if (avoids) ++c;
    }
    out.emplace_back(c);
  }
  return out;
}

std::vector<WilfClass> classify_wilf(int length, int max_n, unsigned threads) {
  if (length < 1) throw std::invalid_argument("pattern length must be at least 1");
  std::map<std::vector<BigInt>, std::vector<Permutation>> by_counts;
  std::vector<Permutation> seen;
  for (const auto& p : all_permutations(length)) {
    if (std::binary_search(seen.begin(), seen.end(), p)) continue;
    auto orbit = symmetry_orbit(p);
    seen.insert(seen.end(), orbit.begin(), orbit.end());
    std::sort(seen.begin(), seen.end());
    EnumerationLimits limits;
    limits.threads = threads;
    auto counts = count_avoiders(PatternSet({orbit.front()}), max_n, limits).counts;
    auto& members = by_counts[counts];
    members.insert(members.end(), orbit.begin(), orbit.end());
  }
  std::vector<WilfClass> classes;
  for (auto& [counts, members] : by_counts) {
    std::sort(members.begin(), members.end());
    classes.push_back({std::move(members), counts});
  }
  return classes;
}

}  // namespace papseries
