#pragma once

#include "papseries/series/series.hpp"

namespace papseries {

// Estimators built from a ratio sequence r_n = c_n / c_{n-1}. Every output
// keeps the index n of the ratio it ends at; indices whose inputs are missing
// are skipped rather than shifted.

/// r2_n = (n^2 r_n - (n-1)^2 r_{n-1}) / (2n).
EstimatorSeq modified_ratios(const EstimatorSeq& r);

/// level 1: l_n = n r_n - (n-1) r_{n-1}
/// level 2: l2_n = (n^2 l_n - (n-1)^2 l_{n-1}) / (2n-1)
/// level 3: l3_n = (n^3 l2_n - (n-1)^3 l2_{n-1}) / (3n^2-3n+1)
EstimatorSeq intercepts(const EstimatorSeq& r, int level);

/// gamma_n = n (z_c r_n - 1) + 1.
EstimatorSeq exponent_gamma(const EstimatorSeq& r, const HPFloat& z_c);

/// delta_n = 1 + n^2 (1 - r_n / r_{n-1}).
EstimatorSeq exponent_delta(const EstimatorSeq& r);

/// mu_n = n r_n / (n + gamma - 1); indices where the denominator vanishes are skipped.
EstimatorSeq growth_given_exponent(const EstimatorSeq& r, const HPFloat& gamma);

/// n^2 (r_n / r_{n-1} - 1): tends to -g for a power law, diverges like n^sigma
/// for a stretched exponential.
EstimatorSeq divergence_test(const EstimatorSeq& r);

/// Minus the local log-log gradient of |(r_n/mu - 1) n - g|; tends to Delta
/// when r_n = mu (1 + g/n + h/n^(1+Delta) + ...).
EstimatorSeq delta_exponent(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& g);

/// Local gradient d log|y| / d log n from adjacent points; indices where y
/// vanishes or changes sign are skipped.
EstimatorSeq local_log_gradient(const EstimatorSeq& y);

struct TailFit {
  HPFloat intercept;
  HPFloat slope;  // coefficient of n^-p (of the first power for higher degrees)
  std::vector<HPFloat> coefficients;  // intercept, then ascending powers of n^-p
  HPFloat residual;  // RMS misfit
  std::size_t points = 0;
};

/// Default window: the last 10 points or half the sequence, whichever is smaller.
std::size_t default_window(const EstimatorSeq& seq);

/// Least-squares polynomial of the given degree in x = n^-p over the last
/// `window` points (0 = default window). The intercept estimates the n -> oo limit.
TailFit extrapolate_tail(const EstimatorSeq& seq, double p, std::size_t window = 0, int degree = 1);

/// Least-squares fit of intercept + sum_k a_k n^-e_k over the last `window`
/// points (0 = default window), for known correction exponents e_k > 0.
TailFit extrapolate_exponents(const EstimatorSeq& seq, const std::vector<double>& exponents, std::size_t window = 0);

/// Converts the constant that the divergence test approaches into g. For
/// sigma = 1/2 the 1/n coefficient of the ratios is g + log^2(mu1)/8.
HPFloat g_from_divergence_limit(const HPFloat& limit, const HPFloat& log_mu1, const HPFloat& sigma);

}  // namespace papseries
