#include "papseries/analysis/ratio.hpp"

#include "papseries/numeric/linear.hpp"

#include <algorithm>
#include <cmath>

namespace papseries {

namespace {

EstimatorSeq labelled(const EstimatorSeq& in, std::string label) {
  EstimatorSeq out;
  out.label = std::move(label);
  out.first_predicted = in.first_predicted;
  return out;
}

bool has_errors(const EstimatorSeq& s) { return !s.errors.empty(); }

HPFloat error_at(const EstimatorSeq& s, std::size_t i) { return has_errors(s) ? s.errors[i] : HPFloat(s.values[i].precision()); }

// out_n = (a_n x_n - b_n x_{n-1}) / d_n wherever both inputs are present.
// Errors are propagated as |a| e_n + |b| e_{n-1}, divided by |d|.
template <typename Coef>
EstimatorSeq adjacent_combination(const EstimatorSeq& x, std::string label, Coef coef) {
  EstimatorSeq out = labelled(x, std::move(label));
  for (std::size_t i = 1; i < x.size(); ++i) {
    const long n = x.n[i];
    if (x.n[i - 1] != n - 1) continue;
    const Precision p = x.values[i].precision();
    auto [a, b, d] = coef(n, p);
    HPFloat v = (a * x.values[i] - b * x.values[i - 1]) / d;
    if (has_errors(x)) {
      HPFloat e = (abs(a) * error_at(x, i) + abs(b) * error_at(x, i - 1)) / abs(d);
      out.push(n, std::move(v), std::move(e));
    } else {
      out.push(n, std::move(v));
    }
  }
  return out;
}

}  // namespace

EstimatorSeq modified_ratios(const EstimatorSeq& r) {
  auto out = adjacent_combination(r, "r2", [](long n, Precision p) {
    return std::tuple{HPFloat(n * n, p), HPFloat((n - 1) * (n - 1), p), HPFloat(2 * n, p)};
  });
  out.abscissa_exponent = 1.0;
  return out;
}

EstimatorSeq intercepts(const EstimatorSeq& r, int level) {
  if (level < 1 || level > 3) throw std::invalid_argument("intercept level must be 1, 2 or 3");
  EstimatorSeq l = adjacent_combination(r, "l", [](long n, Precision p) {
    return std::tuple{HPFloat(n, p), HPFloat(n - 1, p), HPFloat(1L, p)};
  });
  if (level == 1) return l;
  EstimatorSeq l2 = adjacent_combination(l, "l2", [](long n, Precision p) {
    return std::tuple{HPFloat(n * n, p), HPFloat((n - 1) * (n - 1), p), HPFloat(2 * n - 1, p)};
  });
  if (level == 2) return l2;
  return adjacent_combination(l2, "l3", [](long n, Precision p) {
    return std::tuple{HPFloat(n * n * n, p), HPFloat((n - 1) * (n - 1) * (n - 1), p), HPFloat(3 * n * n - 3 * n + 1, p)};
  });
}

EstimatorSeq exponent_gamma(const EstimatorSeq& r, const HPFloat& z_c) {
  if (z_c <= 0L) throw std::invalid_argument("z_c must be positive");
  EstimatorSeq out = labelled(r, "gamma");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const long n = r.n[i];
    out.push(n, (z_c * r.values[i] - 1L) * n + 1L);
  }
  return out;
}

EstimatorSeq exponent_delta(const EstimatorSeq& r) {
  EstimatorSeq out = labelled(r, "delta");
  for (std::size_t i = 1; i < r.size(); ++i) {
    const long n = r.n[i];
    if (r.n[i - 1] != n - 1) continue;
    if (r.values[i - 1].is_zero()) throw std::domain_error("delta estimator: zero ratio at n=" + std::to_string(n - 1));
    out.push(n, (1L - r.values[i] / r.values[i - 1]) * (n * n) + 1L);
  }
  return out;
}

EstimatorSeq growth_given_exponent(const EstimatorSeq& r, const HPFloat& gamma) {
  EstimatorSeq out = labelled(r, "mu");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const long n = r.n[i];
    HPFloat d = gamma + (n - 1);
    if (d.is_zero()) continue;
    out.push(n, r.values[i] * n / d);
  }
  return out;
}

EstimatorSeq divergence_test(const EstimatorSeq& r) {
  EstimatorSeq out = labelled(r, "divergence");
  for (std::size_t i = 1; i < r.size(); ++i) {
    const long n = r.n[i];
    if (r.n[i - 1] != n - 1 || r.values[i - 1].is_zero()) continue;
    out.push(n, (r.values[i] / r.values[i - 1] - 1L) * (n * n));
  }
  return out;
}

EstimatorSeq local_log_gradient(const EstimatorSeq& y) {
  EstimatorSeq out = labelled(y, "gradient(" + y.label + ")");
  for (std::size_t i = 1; i < y.size(); ++i) {
    const long n = y.n[i];
    const long m = y.n[i - 1];
    const HPFloat& a = y.values[i];
    const HPFloat& b = y.values[i - 1];
    if (a.is_zero() || b.is_zero() || a.sign() != b.sign()) continue;
    const Precision p = a.precision();
    out.push(n, (log(abs(a)) - log(abs(b))) / (log(HPFloat(n, p)) - log(HPFloat(m, p))));
  }
  return out;
}

EstimatorSeq delta_exponent(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& g) {
  EstimatorSeq y = labelled(r, "residual");
  for (std::size_t i = 0; i < r.size(); ++i) y.push(r.n[i], (r.values[i] / mu - 1L) * r.n[i] - g);
  EstimatorSeq grad = local_log_gradient(y);
  EstimatorSeq out = labelled(r, "Delta");
  for (std::size_t i = 0; i < grad.size(); ++i) out.push(grad.n[i], -grad.values[i]);
  return out;
}

std::size_t default_window(const EstimatorSeq& seq) { return std::max<std::size_t>(2, std::min<std::size_t>(10, seq.size() / 2)); }

TailFit extrapolate_tail(const EstimatorSeq& seq, double p, std::size_t window, int degree) {
  if (window == 0) window = default_window(seq);
  if (degree < 0) throw std::invalid_argument("extrapolate_tail: negative degree");
  if (window < static_cast<std::size_t>(degree) + 1 || window < 2) {
    throw std::invalid_argument("extrapolate_tail: window too small for degree");
  }
  if (seq.size() < window) throw std::invalid_argument(seq.label + ": fewer points than the window");
  const Precision prec = seq.values.back().precision();
  const HPFloat exponent(-p, prec);
  std::vector<HPFloat> xs, ys;
  for (std::size_t i = seq.size() - window; i < seq.size(); ++i) {
    xs.push_back(power_of_index(seq.n[i], exponent));
    ys.push_back(seq.values[i]);
  }
  std::vector<BasisFunction> basis;
  for (int k = 0; k <= degree; ++k) basis.push_back([k](const HPFloat& x) { return pow(x, static_cast<long>(k)); });
  auto fit = fit_least_squares(xs, ys, basis);
  if (!fit) throw std::domain_error(seq.label + ": degenerate abscissae in tail extrapolation");
  TailFit t{fit->coefficients[0], degree >= 1 ? fit->coefficients[1] : HPFloat(prec), fit->coefficients,
            fit->rms_residual, window};
  return t;
}

TailFit extrapolate_exponents(const EstimatorSeq& seq, const std::vector<double>& exponents, std::size_t window) {
  if (window == 0) window = default_window(seq);
  if (window < exponents.size() + 1) throw std::invalid_argument("extrapolate_exponents: window too small");
  if (seq.size() < window) throw std::invalid_argument(seq.label + ": fewer points than the window");
  const Precision prec = seq.values.back().precision();
  std::vector<HPFloat> xs, ys;
  for (std::size_t i = seq.size() - window; i < seq.size(); ++i) {
    xs.emplace_back(seq.n[i], prec);
    ys.push_back(seq.values[i]);
  }
  std::vector<BasisFunction> basis{[prec](const HPFloat&) { return HPFloat(1L, prec); }};
  for (double e : exponents) {
    if (!(e > 0.0)) throw std::invalid_argument("extrapolate_exponents: exponents must be positive");
    const HPFloat minus_e(-e, prec);
    basis.push_back([minus_e](const HPFloat& n) { return pow(n, minus_e); });
  }
  auto fit = fit_least_squares(xs, ys, basis);
  if (!fit) throw std::domain_error(seq.label + ": degenerate basis in tail extrapolation");
  return TailFit{fit->coefficients[0], exponents.empty() ? HPFloat(prec) : fit->coefficients[1], fit->coefficients,
                 fit->rms_residual, window};
}

HPFloat g_from_divergence_limit(const HPFloat& limit, const HPFloat& log_mu1, const HPFloat& sigma) {
  HPFloat g = -limit;
  const HPFloat half("0.5", sigma.precision());
  if (abs(sigma - half) < HPFloat(1e-12, sigma.precision())) g -= log_mu1 * log_mu1 / 8L;
  return g;
}

}  // namespace papseries
