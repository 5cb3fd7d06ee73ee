#include "papseries/perm/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace papseries {

Permutation::Permutation(std::vector<int> word) : w_(std::move(word)) {
  std::vector<bool> seen(w_.size() + 1, false);
  for (int v : w_) {
    if (v < 1 || v > size() || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("not a permutation of [" + std::to_string(size()) + "]");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> w;
  const bool separated = text.find_first_of(", ") != std::string_view::npos;
  if (separated) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && (text[i] == ',' || text[i] == ' ')) ++i;
      if (i == text.size()) break;
      int v = 0;
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = 10 * v + (text[i++] - '0');
      if (i == start) throw std::invalid_argument("bad permutation '" + std::string(text) + "'");
      w.push_back(v);
    }
  } else {
    for (char ch : text) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        throw std::invalid_argument("bad permutation '" + std::string(text) + "'");
      }
      w.push_back(ch - '0');
    }
  }
  return Permutation(std::move(w));
}

std::string Permutation::to_string() const {
  std::string s;
  const bool wide = size() > 9;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (wide && i) s += ',';
    s += std::to_string(w_[i]);
  }
  return s;
}

Permutation symmetry(const Permutation& p, Symmetry op) {
  const int n = p.size();
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    switch (op) {
      case Symmetry::Reverse:
        w[static_cast<std::size_t>(i)] = p[n - 1 - i];
        break;
      case Symmetry::Complement:
        w[static_cast<std::size_t>(i)] = n + 1 - p[i];
        break;
      case Symmetry::Inverse:
        w[static_cast<std::size_t>(p[i] - 1)] = i + 1;
        break;
    }
  }
  return Permutation(std::move(w));
}

std::vector<Permutation> symmetry_orbit(const Permutation& p) {
  std::vector<Permutation> orbit{p};
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (auto op : {Symmetry::Reverse, Symmetry::Complement, Symmetry::Inverse}) {
      Permutation q = symmetry(orbit[i], op);
      if (std::find(orbit.begin(), orbit.end(), q) == orbit.end()) orbit.push_back(std::move(q));
    }
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

namespace {

// Extends a partial occurrence: tau[0..j) is matched at chosen[0..j).
bool match_from(const Permutation& pi, const Permutation& tau, int j, int next_pos, std::vector<int>& chosen) {
  const int k = tau.size();
  if (j == k) return true;
  for (int pos = next_pos; pos <= pi.size() - (k - j); ++pos) {
    bool ok = true;
    for (int i = 0; i < j && ok; ++i) ok = (pi[chosen[static_cast<std::size_t>(i)]] < pi[pos]) == (tau[i] < tau[j]);
    if (!ok) continue;
    chosen[static_cast<std::size_t>(j)] = pos;
    if (match_from(pi, tau, j + 1, pos + 1, chosen)) return true;
  }
  return false;
}

}  // namespace

bool contains(const Permutation& pi, const Permutation& tau) {
  if (tau.size() > pi.size()) return false;
  std::vector<int> chosen(static_cast<std::size_t>(tau.size()));
  return match_from(pi, tau, 0, 0, chosen);
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

}  // namespace papseries
