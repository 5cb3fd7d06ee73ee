#include "papseries/analysis/stretched.hpp"

#include <algorithm>
#include <cmath>

namespace papseries {

HPFloat ratio_expansion(const HPFloat& mu, const HPFloat& mu1, const HPFloat& sigma, const HPFloat& g, long n) {
  const Precision p = mu.precision();
  const HPFloat L = log(mu1);
  const HPFloat s = sigma;
  auto inv_pow = [&](const HPFloat& e) { return power_of_index(n, -e); };
  const HPFloat one(1L, p);

  HPFloat x = one;
  x += s * L * inv_pow(one - s);
  x += g / n;
  x += s * s * L * L / 2L * inv_pow(HPFloat(2L, p) - s * 2L);
  x += ((s - s * s) * L + g * s * L * 2L) / 2L * inv_pow(HPFloat(2L, p) - s);
  // The cubic term is of order n^(3 sigma - 3); for sigma <= 1/3 it falls
  // below the O(n^-2) remainder and the specialised forms omit it.
  const HPFloat cubic_order = HPFloat(3L, p) - s * 3L;
  const bool specialised = abs(s - HPFloat(BigRational(1, 3), p)) < HPFloat(1e-20, p) ||
                           abs(s - HPFloat(BigRational(1, 4), p)) < HPFloat(1e-20, p);
  if (!(specialised && cubic_order >= 2L)) x += s * s * s * L * L * L / 6L * inv_pow(cubic_order);
  return mu * x;
}

EstimatorSeq stretched_intercepts(const EstimatorSeq& r, int level) {
  if (level != 1 && level != 2) throw std::invalid_argument("stretched intercepts are defined for levels 1 and 2");
  return intercepts(r, level);
}

EstimatorSeq log_coefficients(const ExactSeries& s, Precision prec) {
  EstimatorSeq out;
  out.label = "log c";
  long n = s.offset;
  for (const auto& c : s.coeffs) {
    if (c <= 0) throw std::domain_error(s.name + ": non-positive coefficient at n=" + std::to_string(n));
    out.push(n++, log(HPFloat(c, prec)));
  }
  if (s.tail_ratios.empty() && s.tail.empty()) return out;
  out.first_predicted = n;
  const EstimatorSeq r = ratios(s, prec);
  HPFloat acc = out.values.back();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.n[i] < n) continue;
    acc += log(r.values[i]);
    out.push(r.n[i], acc);
  }
  return out;
}

EstimatorSeq log_coefficients(const RationalSeries& s, Precision prec) {
  EstimatorSeq out;
  out.label = "log c";
  long n = s.offset;
  for (const auto& c : s.coeffs) {
    if (sgn(c) <= 0) throw std::domain_error(s.name + ": non-positive coefficient at n=" + std::to_string(n));
    out.push(n++, log(HPFloat(c, prec)));
  }
  return out;
}

EstimatorSeq synthetic_log_coefficients(const HPFloat& C, const HPFloat& mu, const HPFloat& log_mu1,
                                        const HPFloat& sigma, const HPFloat& g, long max_n) {
  const Precision p = mu.precision();
  EstimatorSeq out;
  out.label = "log c";
  const HPFloat logC = log(C), logmu = log(mu);
  for (long n = 1; n <= max_n; ++n) {
    const HPFloat logn = log(HPFloat(n, p));
    out.push(n, logC + logmu * n + log_mu1 * exp(sigma * logn) + g * logn);
  }
  return out;
}

EstimatorSeq ratios_from_logs(const EstimatorSeq& log_c) {
  EstimatorSeq out;
  out.label = "r";
  out.first_predicted = log_c.first_predicted;
  for (std::size_t i = 1; i < log_c.size(); ++i) {
    if (log_c.n[i - 1] != log_c.n[i] - 1) continue;
    out.push(log_c.n[i], exp(log_c.values[i] - log_c.values[i - 1]));
  }
  return out;
}

namespace {

EstimatorSeq shifted(const EstimatorSeq& s, long shift, std::string label) {
  EstimatorSeq out;
  out.label = std::move(label);
  out.first_predicted = s.first_predicted;
  for (std::size_t i = 0; i < s.size(); ++i) out.push(s.n[i], s.values[i] + shift);
  return out;
}

}  // namespace

EstimatorSeq sigma_known_mu(const EstimatorSeq& r, const HPFloat& mu, KnownMuMethod method, RatioInput input) {
  if (mu <= 0L) throw std::invalid_argument("mu must be positive");
  EstimatorSeq y;
  y.first_predicted = r.first_predicted;
  if (method == KnownMuMethod::GradientLogRatio) {
    const EstimatorSeq x = input == RatioInput::Intercepts ? intercepts(r, 1) : r;
    y.label = x.label + "/mu-1";
    for (std::size_t i = 0; i < x.size(); ++i) y.push(x.n[i], x.values[i] / mu - 1L);
  } else {
    // log(c_n/mu^n) - log(c_{n-1}/mu^(n-1)) = log(r_n/mu).
    y.label = "d";
    for (std::size_t i = 0; i < r.size(); ++i) y.push(r.n[i], log(r.values[i] / mu));
  }
  return shifted(local_log_gradient(y), 1, method == KnownMuMethod::GradientLogRatio ? "sigma(ratio)" : "sigma(diff)");
}

EstimatorSeq sigma_unknown_mu(const EstimatorSeq& log_c, UnknownMuMethod method) {
  EstimatorSeq y;
  y.first_predicted = log_c.first_predicted;
  for (std::size_t i = 2; i < log_c.size(); ++i) {
    const long n = log_c.n[i];
    if (log_c.n[i - 1] != n - 1) continue;
    if (method == UnknownMuMethod::RatioOfRatios) {
      if (log_c.n[i - 2] != n - 2) continue;
      y.push(n, exp(log_c.values[i] - log_c.values[i - 1] * 2L + log_c.values[i - 2]) - 1L);
    } else {
      if (n - 1 < 1) continue;
      y.push(n, exp(log_c.values[i] / n - log_c.values[i - 1] / (n - 1)) - 1L);
    }
  }
  return shifted(local_log_gradient(y), 2,
                 method == UnknownMuMethod::RatioOfRatios ? "sigma(ratio of ratios)" : "sigma(root ratio)");
}

std::vector<double> mu1_correction_exponents(double sigma, std::size_t count) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
  std::vector<double> out;
  // e >= (j-1)(1-sigma), so j is bounded for any ceiling on e.
  const double ceiling = static_cast<double>(count) + 2.0;
  for (int j = 0; (j - 1) * (1.0 - sigma) <= ceiling; ++j) {
    for (int m = std::max(1, j);; ++m) {
      const double e = m - 1 - (j - 1) * sigma;
      if (e > ceiling) break;
      if (e > 1e-12) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), out.end());
  if (out.size() > count) out.resize(count);
  return out;
}

Mu1Estimate mu1_estimate(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& sigma, std::size_t window,
                         int corrections, std::optional<double> p) {
  if (corrections < 0) throw std::invalid_argument("mu1_estimate: negative correction count");
  EstimatorSeq seq;
  seq.label = "sigma log mu1";
  seq.first_predicted = r.first_predicted;
  const HPFloat e = HPFloat(1L, sigma.precision()) - sigma;
  for (std::size_t i = 0; i < r.size(); ++i) seq.push(r.n[i], (r.values[i] / mu - 1L) * power_of_index(r.n[i], e));
  seq.abscissa_exponent = p.value_or(sigma.to_double());
  TailFit limit =
      p ? extrapolate_tail(seq, *p, window, corrections)
        : extrapolate_exponents(seq, mu1_correction_exponents(sigma.to_double(), static_cast<std::size_t>(corrections)),
                                window);
  HPFloat sl = limit.intercept;
  HPFloat l = sl / sigma;
  HPFloat m1 = exp(l);
  return {std::move(seq), std::move(limit), std::move(sl), std::move(l), std::move(m1)};
}

TailFit extrapolate_sigma(const EstimatorSeq& sigma_seq, double p, std::size_t window, int degree) {
  return extrapolate_tail(sigma_seq, p, window, degree);
}

namespace {

StretchDiagnostics diagnostics_from(const EstimatorSeq& r, const EstimatorSeq& logc, const std::optional<HPFloat>& mu,
                                    const HPFloat& sigma) {
  StretchDiagnostics d;
  d.sigma = sigma;
  d.sigma_ratio_of_ratios = sigma_unknown_mu(logc, UnknownMuMethod::RatioOfRatios);
  d.sigma_root_ratio = sigma_unknown_mu(logc, UnknownMuMethod::RootRatio);
  if (mu) {
    d.sigma_known_ratio = sigma_known_mu(r, *mu, KnownMuMethod::GradientLogRatio);
    d.sigma_known_diff = sigma_known_mu(r, *mu, KnownMuMethod::GradientLogDiff);
    if (r.size() >= 4) d.mu1 = mu1_estimate(r, *mu, sigma);
  }
  return d;
}

}  // namespace

StretchDiagnostics stretch_diagnostics(const ExactSeries& s, const std::optional<HPFloat>& mu, const HPFloat& sigma,
                                       Precision prec) {
  return diagnostics_from(ratios(s, prec), log_coefficients(s, prec), mu, sigma);
}

StretchDiagnostics stretch_diagnostics(const RationalSeries& s, const std::optional<HPFloat>& mu,
                                       const HPFloat& sigma, Precision prec) {
  return diagnostics_from(ratios(s, prec), log_coefficients(s, prec), mu, sigma);
}

}  // namespace papseries
