#include "papseries/analysis/fitting.hpp"

#include "papseries/analysis/stretched.hpp"
#include "papseries/numeric/linear.hpp"

#include <functional>
#include <sstream>

namespace papseries {

HPFloat AsymptoticModel::z_c() const { return HPFloat(1L, mu.precision()) / mu; }

HPFloat AsymptoticModel::ratio_at(long n) const {
  const Precision p = mu.precision();
  if (!power_law()) {
    const HPFloat s = sigma ? HPFloat(*sigma, p) : HPFloat("0.5", p);
    return ratio_expansion(mu, *mu1, s, g, n);
  }
  HPFloat x = HPFloat(1L, p) + g / n;
  if (h) x += *h / (n * n);
  if (j) x += *j / (n * n * n);
  return mu * x;
}

EstimatorSeq FitTrace::param(const std::string& which) const {
  std::size_t k = 0;
  while (k < params.size() && params[k] != which) ++k;
  if (k == params.size()) throw std::out_of_range(name + ": no parameter '" + which + "'");
  EstimatorSeq out;
  out.label = which;
  for (std::size_t w = 0; w < window_end.size(); ++w) out.push(window_end[w], estimates[w][k]);
  return out;
}

std::string FitTrace::to_csv() const {
  std::ostringstream os;
  os << "window_end_n";
  for (const auto& p : params) os << ',' << p;
  os << '\n';
  for (std::size_t w = 0; w < window_end.size(); ++w) {
    os << window_end[w];
    for (const auto& v : estimates[w]) os << ',' << v.to_string(20);
    os << '\n';
  }
  return os.str();
}

namespace {

using Basis = std::function<HPFloat(long, Precision)>;
using Mapping = std::function<std::vector<HPFloat>(const std::vector<HPFloat>&)>;

// Solves y_n = sum_j coef_j basis_j(n) on every run of consecutive indices
// of length basis.size(), and maps the coefficients to named parameters.
FitTrace sliding_fit(std::string name, std::vector<std::string> params, const EstimatorSeq& y,
                     const std::vector<Basis>& basis, const Mapping& map) {
  FitTrace t;
  t.name = std::move(name);
  t.params = std::move(params);
  const std::size_t m = basis.size();
  for (std::size_t end = m - 1; end < y.size(); ++end) {
    const std::size_t start = end + 1 - m;
    if (y.n[end] - y.n[start] != static_cast<long>(m) - 1) continue;
    const Precision p = y.values[end].precision();
    Matrix<HPFloat> a(m, m, HPFloat(p));
    std::vector<HPFloat> b;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t jj = 0; jj < m; ++jj) a(i, jj) = basis[jj](y.n[start + i], p);
      b.push_back(y.values[start + i]);
    }
    auto sol = solve_linear(a, b);
    if (!sol) {
      t.skipped.push_back(y.n[end]);
      continue;
    }
    t.window_end.push_back(y.n[end]);
    t.estimates.push_back(map(*sol));
  }
  return t;
}

Basis constant() {
  return [](long, Precision p) { return HPFloat(1L, p); };
}
Basis power(const HPFloat& e) {
  return [e](long n, Precision p) { return power_of_index(n, e.with_precision(p)); };
}
Basis inverse_power(long k) {
  return [k](long n, Precision p) { return pow(HPFloat(n, p), -k); };
}
Basis log_n() {
  return [](long n, Precision p) { return log(HPFloat(n, p)); };
}
Basis linear() {
  return [](long n, Precision p) { return HPFloat(n, p); };
}

bool is_half(const HPFloat& sigma) { return abs(sigma - HPFloat("0.5", sigma.precision())) < HPFloat(1e-20, sigma.precision()); }

EstimatorSeq positive_indices(const EstimatorSeq& s) {
  // log k and k^sigma need k >= 1.
  return s.window(1, s.n.empty() ? 0 : s.n.back());
}

}  // namespace

FitTrace fit_log_coeffs_4pt(const EstimatorSeq& log_c, const HPFloat& sigma) {
  return sliding_fit("log_coeffs_4pt", {"log_mu", "log_mu1", "g", "log_C"}, positive_indices(log_c),
                     {linear(), power(sigma), log_n(), constant()}, [](const std::vector<HPFloat>& c) { return c; });
}

FitTrace fit_log_coeffs_3pt(const EstimatorSeq& log_c, const HPFloat& mu, const HPFloat& sigma) {
  EstimatorSeq y = positive_indices(log_c);
  const HPFloat logmu = log(mu);
  for (std::size_t i = 0; i < y.size(); ++i) y.values[i] -= logmu * y.n[i];
  return sliding_fit("log_coeffs_3pt", {"log_mu1", "g", "log_C"}, y, {power(sigma), log_n(), constant()},
                     [](const std::vector<HPFloat>& c) { return c; });
}

FitTrace fit_ratios_4pt(const EstimatorSeq& r, const HPFloat& sigma) {
  const Precision p = sigma.precision();
  const HPFloat one(1L, p);
  if (is_half(sigma)) {
    // r_n = mu (1 + L/(2 sqrt n) + (g + L^2/8)/n + ...), L = log mu1.
    FitTrace t = sliding_fit(
        "ratios_4pt", {"mu", "sigma_log_mu1", "g", "c4"}, r,
        {constant(), power(HPFloat("-0.5", p)), inverse_power(1), power(HPFloat("-1.5", p))},
        [](const std::vector<HPFloat>& c) {
          const HPFloat sl = c[1] / c[0];
          const HPFloat L = sl * 2L;
          return std::vector<HPFloat>{c[0], sl, c[2] / c[0] - L * L / 8L, c[3]};
        });
    t.note = "sigma = 1/2: basis {1, n^-1/2, n^-1, n^-3/2}; the 1/n coefficient is mu (g + log^2(mu1)/8)";
    return t;
  }
  return sliding_fit("ratios_4pt", {"mu", "sigma_log_mu1", "g", "c4"}, r,
                     {constant(), power(sigma - one), inverse_power(1), power(sigma * 2L - 2L)},
                     [](const std::vector<HPFloat>& c) {
                       return std::vector<HPFloat>{c[0], c[1] / c[0], c[2] / c[0], c[3]};
                     });
}

FitTrace fit_ratios_powerlaw(const EstimatorSeq& r) {
  return sliding_fit("ratios_powerlaw", {"mu", "mu_g", "mu_h", "mu_j"}, r,
                     {constant(), inverse_power(1), inverse_power(2), inverse_power(3)},
                     [](const std::vector<HPFloat>& c) { return c; });
}

FitTrace fit_ratios_powerlaw(const ExactSeries& s, Precision prec) {
  FitTrace t;
  t.name = "ratios_powerlaw";
  t.params = {"mu", "mu_g", "mu_h", "mu_j"};
  std::vector<long> ns;
  std::vector<BigRational> rs;
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) {
    if (s.coeffs[i - 1] == 0) throw std::domain_error(s.name + ": zero coefficient");
    BigRational q(s.coeffs[i], s.coeffs[i - 1]);
    q.canonicalize();
    ns.push_back(s.offset + static_cast<long>(i));
    rs.push_back(q);
  }
  for (std::size_t end = 3; end < rs.size(); ++end) {
    Matrix<BigRational> a(4, 4, BigRational(0));
    std::vector<BigRational> b;
    for (std::size_t i = 0; i < 4; ++i) {
      const long n = ns[end - 3 + i];
      BigRational x(1);
      for (std::size_t k = 0; k < 4; ++k) {
        a(i, k) = x;
        x /= n;
      }
      b.push_back(rs[end - 3 + i]);
    }
    auto sol = solve_linear(a, b);
    if (!sol) {
      t.skipped.push_back(ns[end]);
      continue;
    }
    t.window_end.push_back(ns[end]);
    std::vector<HPFloat> est;
    for (const auto& c : *sol) est.emplace_back(c, prec);
    t.estimates.push_back(std::move(est));
  }
  return t;
}

FitTrace fit_ratios_3param(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& sigma) {
  const Precision p = sigma.precision();
  EstimatorSeq y = r;
  for (auto& v : y.values) v -= mu;
  std::vector<Basis> basis;
  FitTrace t;
  if (is_half(sigma)) {
    basis = {power(HPFloat("-0.5", p)), inverse_power(1), power(HPFloat("-1.5", p))};
  } else {
    basis = {power(sigma - 1L), inverse_power(1), power(sigma * 2L - 2L)};
  }
  t = sliding_fit("ratios_3param", {"c1", "c2", "c3"}, y, basis, [](const std::vector<HPFloat>& c) { return c; });
  if (is_half(sigma)) t.note = "sigma = 1/2: basis {n^-1/2, n^-1, n^-3/2}; c2 estimates mu (g + log^2(mu1)/8)";
  return t;
}

FitTrace fit_amplitude(const EstimatorSeq& log_c, const HPFloat& g) {
  EstimatorSeq y = positive_indices(log_c);
  for (std::size_t i = 0; i < y.size(); ++i) y.values[i] -= g * log(HPFloat(y.n[i], y.values[i].precision()));
  return sliding_fit("amplitude", {"log_mu", "log_C", "c3"}, y, {linear(), constant(), inverse_power(1)},
                     [](const std::vector<HPFloat>& c) { return c; });
}

EstimatorSeq amplitude_estimates(const EstimatorSeq& log_c, const HPFloat& mu, const HPFloat& g) {
  EstimatorSeq out;
  out.label = "C";
  out.first_predicted = log_c.first_predicted;
  const HPFloat logmu = log(mu);
  for (std::size_t i = 0; i < log_c.size(); ++i) {
    const long n = log_c.n[i];
    if (n < 1) continue;
    const Precision p = log_c.values[i].precision();
    out.push(n, exp(log_c.values[i] - g * log(HPFloat(n, p)) - logmu * n));
  }
  return out;
}

}  // namespace papseries
