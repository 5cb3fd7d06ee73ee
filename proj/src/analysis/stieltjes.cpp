#include "papseries/analysis/stieltjes.hpp"

#include "papseries/numeric/linear.hpp"

#include <json.hpp>

#include <algorithm>

namespace papseries {

namespace {

BigRational quotient(const BigRational& a, const BigRational& b) {
  BigRational q = a / b;
  q.canonicalize();
  return q;
}

std::size_t resolve_depth(std::size_t size, bool zero_start, const std::string& name, std::optional<std::size_t> depth) {
  if (size == 0) throw std::invalid_argument(name + ": empty series");
  if (zero_start) throw std::domain_error(name + ": S-fraction needs a nonzero constant term");
  const std::size_t max_depth = size - 1;
  const std::size_t d = depth.value_or(max_depth);
  if (d > max_depth) {
    throw std::invalid_argument(name + ": depth " + std::to_string(d) + " needs " + std::to_string(d + 1) +
                                " coefficients");
  }
  return d;
}

std::size_t resolve_depth(const ExactSeries& s, std::optional<std::size_t> depth) {
  return resolve_depth(s.coeffs.size(), !s.coeffs.empty() && s.coeffs.front() == 0, s.name, depth);
}

// Power series 1 / (1 - x g) truncated to `terms` coefficients.
std::vector<BigRational> inverse_one_minus_x(const std::vector<BigRational>& g, std::size_t terms) {
  std::vector<BigRational> out(terms, BigRational(0));
  if (terms == 0) return out;
  out[0] = 1;
  // out = 1 + x g out
  for (std::size_t n = 1; n < terms; ++n) {
    BigRational acc = 0;
    for (std::size_t i = 0; i < n && i < g.size(); ++i) acc += g[i] * out[n - 1 - i];
    out[n] = acc;
  }
  return out;
}

bool proven_stieltjes(const std::string& source) {
  return source.find("12345") != std::string::npos || source.find("A047889") != std::string::npos;
}

}  // namespace

std::optional<std::size_t> ContinuedFraction::first_negative() const {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (sgn(alphas[i]) < 0) return i;
  }
  return std::nullopt;
}

std::vector<BigRational> ContinuedFraction::expand(std::size_t terms) const {
  if (alphas.empty()) return std::vector<BigRational>(terms, BigRational(0));
  std::vector<BigRational> f(terms, BigRational(0));
  if (terms > 0) f[0] = 1;
  for (std::size_t i = alphas.size() - 1; i >= 1; --i) {
    std::vector<BigRational> g(f);
    for (auto& c : g) c *= alphas[i];
    f = inverse_one_minus_x(g, terms);
  }
  for (auto& c : f) {
    c *= alphas[0];
    c.canonicalize();
  }
  return f;
}

std::vector<std::string> ContinuedFraction::alpha_strings() const {
  std::vector<std::string> out;
  for (const auto& a : alphas) out.push_back(a.get_str());
  return out;
}

namespace {

ContinuedFraction quotient_difference(const std::vector<BigRational>& a, const std::string& name, std::size_t d) {
  ContinuedFraction cf;
  cf.source = name;
  cf.alphas.push_back(a[0]);
  if (d == 0) return cf;

  auto fail = [&](std::size_t index) {
    throw SFractionBreakdown(index, name + ": quotient-difference breakdown at alpha_" + std::to_string(index) +
                                        "; no S-fraction at this depth");
  };

  // Column q_1, rows n = 0..d-1.
  std::vector<BigRational> q;
  for (std::size_t n = 0; n + 1 <= d; ++n) {
    if (sgn(a[n]) == 0) fail(1);
    q.push_back(quotient(a[n + 1], a[n]));
  }
  cf.alphas.push_back(q[0]);
  std::vector<BigRational> e_prev(q.size() + 1, BigRational(0));
  for (std::size_t k = 1;; ++k) {
    if (2 * k > d) break;
    std::vector<BigRational> e;
    for (std::size_t n = 0; n + 1 < q.size(); ++n) {
      BigRational v = q[n + 1] - q[n] + e_prev[n + 1];
      v.canonicalize();
      e.push_back(std::move(v));
    }
    cf.alphas.push_back(e[0]);
    if (2 * k + 1 > d) break;
    std::vector<BigRational> next;
    for (std::size_t n = 0; n + 1 < e.size(); ++n) {
      if (sgn(e[n]) == 0) fail(2 * k + 1);
      next.push_back(quotient(q[n + 1] * e[n + 1], e[n]));
    }
    cf.alphas.push_back(next[0]);
    q = std::move(next);
    e_prev = std::move(e);
  }
  return cf;
}

}  // namespace

ContinuedFraction sfraction(const ExactSeries& s, std::optional<std::size_t> depth) {
  const std::size_t d = resolve_depth(s, depth);
  std::vector<BigRational> a;
  for (std::size_t i = 0; i <= d; ++i) a.emplace_back(s.coeffs[i]);
  return quotient_difference(a, s.name, d);
}

ContinuedFraction sfraction(const RationalSeries& s, std::optional<std::size_t> depth) {
  const std::size_t d =
      resolve_depth(s.coeffs.size(), !s.coeffs.empty() && sgn(s.coeffs.front()) == 0, s.name, depth);
  return quotient_difference(s.coeffs, s.name, d);
}

ContinuedFraction sfraction_hankel(const ExactSeries& s, std::optional<std::size_t> depth) {
  const std::size_t d = resolve_depth(s, depth);
  ExactSeries head = s.prefix(d + 1);
  const HankelReport h = hankel_check(head);
  auto H0 = [&](std::size_t k) { return k == 0 ? BigInt(1) : h.h0.at(k - 1); };
  auto H1 = [&](std::size_t k) { return k == 0 ? BigInt(1) : h.h1.at(k - 1); };
  ContinuedFraction cf;
  cf.source = s.name;
  cf.alphas.emplace_back(s.coeffs[0]);
  for (std::size_t i = 1; i <= d; ++i) {
    const std::size_t k = i / 2;
    BigInt num, den;
    if (i % 2 == 1) {
      num = H0(k) * H1(k + 1);
      den = H0(k + 1) * H1(k);
    } else {
      num = H0(k + 1) * H1(k - 1);
      den = H0(k) * H1(k);
    }
    if (den == 0) throw SFractionBreakdown(i, s.name + ": vanishing Hankel minor before alpha_" + std::to_string(i));
    BigRational a(num, den);
    a.canonicalize();
    cf.alphas.push_back(std::move(a));
  }
  return cf;
}

HankelReport hankel_check(const ExactSeries& s) {
  HankelReport r;
  const std::size_t n = s.coeffs.size();
  auto minors = [&](std::size_t shift, std::size_t size) {
    if (size == 0) return std::vector<BigInt>{};
    Matrix<BigInt> m(size, size, BigInt(0));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) m(i, j) = s.coeffs[i + j + shift];
    return leading_principal_minors(m);
  };
  r.h0 = minors(0, (n + 1) / 2);
  r.h1 = minors(1, n / 2);
  for (std::size_t k = 0; k < std::max(r.h0.size(), r.h1.size()) && !r.first_nonpositive; ++k) {
    if (k < r.h0.size() && r.h0[k] <= 0) {
      r.first_nonpositive = std::pair{0, k + 1};
    } else if (k < r.h1.size() && r.h1[k] <= 0) {
      r.first_nonpositive = std::pair{1, k + 1};
    }
  }
  return r;
}

HPFloat logconvex_bound(const ExactSeries& s, Precision prec) {
  if (s.coeffs.size() < 2) throw std::invalid_argument(s.name + ": need two coefficients for a ratio");
  BigRational best(0);
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) {
    if (s.coeffs[i - 1] <= 0 || s.coeffs[i] <= 0) throw std::domain_error(s.name + ": coefficients must be positive");
    BigRational r(s.coeffs[i], s.coeffs[i - 1]);
    r.canonicalize();
    if (r > best) best = r;
  }
  return HPFloat(best, prec);
}

const HPFloat& BoundReport::bound_at(long n) const {
  for (const auto& [m, b] : hhr_bounds)
    if (m == n) return b;
  throw std::out_of_range(source + ": no bound at n=" + std::to_string(n));
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["source"] = source;
  j["logconvex_bound"] = logconvex_bound.to_string(12);
  j["stieltjes_bound"] = max_bound.to_string(12);
  j["status"] = conjectural ? "conjectural" : "proven";
  j["bounds_monotone"] = bounds_monotone;
  j["parity_violations"] = parity_violations;
  auto& b = j["bounds"] = nlohmann::json::array();
  for (const auto& [n, v] : hhr_bounds) b.push_back({{"n", n}, {"b", v.to_string(12)}});
  if (extrapolated) j["extrapolated"] = {{"value", extrapolated->first.to_string(12)}, {"beta", extrapolated->second}};
  return j.dump(2);
}

BoundReport hhr_bounds(const ContinuedFraction& cf, Precision prec) {
  if (auto neg = cf.first_negative()) {
    throw std::domain_error(cf.source + ": alpha_" + std::to_string(*neg) + " is negative; not a Stieltjes sequence at this depth");
  }
  BoundReport r;
  r.source = cf.source;
  r.conjectural = !proven_stieltjes(cf.source);
  r.logconvex_bound = HPFloat(prec);
  r.max_bound = HPFloat(prec);
  std::vector<HPFloat> roots;
  for (const auto& a : cf.alphas) roots.push_back(sqrt(HPFloat(a, prec)));
  for (std::size_t n = 2; n < cf.alphas.size(); ++n) {
    if (cf.alphas[n] < cf.alphas[n - 2]) r.parity_violations.push_back(n);
    HPFloat b = roots[n] + roots[n - 1];
    b = b * b;
    if (!r.hhr_bounds.empty() && b < r.hhr_bounds.back().second) r.bounds_monotone = false;
    r.max_bound = max(r.max_bound, b);
    r.hhr_bounds.emplace_back(static_cast<long>(n), std::move(b));
  }
  return r;
}

BoundReport stieltjes_bounds(const ExactSeries& s, Precision prec) {
  BoundReport r = hhr_bounds(sfraction(s), prec);
  r.logconvex_bound = logconvex_bound(s, prec);
  return r;
}

double bound_beta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  return 2.0 * theta / (2.0 - theta);
}

void extrapolate_bounds(BoundReport& report, double beta, std::size_t window) {
  EstimatorSeq seq;
  seq.label = report.source + " b_n";
  for (const auto& [n, b] : report.hhr_bounds) seq.push(n, b);
  const TailFit fit = extrapolate_tail(seq, beta, window, 1);
  report.extrapolated = std::pair{fit.intercept, beta};
}

}  // namespace papseries
