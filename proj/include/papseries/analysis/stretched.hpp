#pragma once

#include "papseries/analysis/ratio.hpp"

#include <optional>

namespace papseries {

// Diagnostics for c_n ~ C mu^n mu1^(n^sigma) n^g.

/// Truncated large-n expansion of r_n for the form above. For sigma = 1/2,
/// 1/3 and 1/4 terms of order n^-2 and beyond are dropped, as in the usual
/// specialised forms; any other sigma uses the general truncation.
HPFloat ratio_expansion(const HPFloat& mu, const HPFloat& mu1, const HPFloat& sigma, const HPFloat& g, long n);

/// Same formulas as intercepts(); with a stretched term the leading
/// correction is sigma(sigma-1) log mu1 / n^(1-sigma) for level 1 and half
/// sigma times that for level 2.
EstimatorSeq stretched_intercepts(const EstimatorSeq& r, int level);

/// log c_n for the exact coefficients, continued through any predicted ratios.
EstimatorSeq log_coefficients(const ExactSeries& s, Precision prec);
EstimatorSeq log_coefficients(const RationalSeries& s, Precision prec);

/// log c_n for the exact form C mu^n mu1^(n^sigma) n^g, n = 1..max_n.
EstimatorSeq synthetic_log_coefficients(const HPFloat& C, const HPFloat& mu, const HPFloat& log_mu1,
                                        const HPFloat& sigma, const HPFloat& g, long max_n);

/// r_n = exp(log c_n - log c_{n-1}).
EstimatorSeq ratios_from_logs(const EstimatorSeq& log_c);

enum class KnownMuMethod {
  GradientLogRatio,  // 1 + d log|x_n/mu - 1| / d log n, x = l_n (default) or r_n
  GradientLogDiff,   // 1 + d log|d_n| / d log n, d_n = log(c_n/mu^n) - log(c_{n-1}/mu^(n-1))
};

enum class RatioInput { Intercepts, Ratios };

/// Local sigma estimates given mu, from the ratio sequence.
EstimatorSeq sigma_known_mu(const EstimatorSeq& r, const HPFloat& mu, KnownMuMethod method,
                            RatioInput input = RatioInput::Intercepts);

enum class UnknownMuMethod {
  RatioOfRatios,  // y_n = r_n / r_{n-1} - 1
  RootRatio,      // y_n = c_n^(1/n) / c_{n-1}^(1/(n-1)) - 1
};

/// Local sigma estimates without mu: the log-log gradient of y_n tends to
/// sigma - 2; the returned values are gradient + 2.
EstimatorSeq sigma_unknown_mu(const EstimatorSeq& log_c, UnknownMuMethod method);

struct Mu1Estimate {
  EstimatorSeq sequence;  // (r_n/mu - 1) n^(1-sigma), tends to sigma log mu1
  TailFit limit;          // extrapolation of the sequence
  HPFloat sigma_log_mu1;
  HPFloat log_mu1;
  HPFloat mu1;
};

/// Decay exponents of the corrections to (r_n/mu - 1) n^(1-sigma), smallest
/// first: m - 1 - (j-1) sigma for j >= 0, m >= max(1, j), duplicates merged.
/// The first few are sigma, 1-sigma, 1, 1+sigma.
std::vector<double> mu1_correction_exponents(double sigma, std::size_t count);

/// Extrapolates (r_n/mu - 1) n^(1-sigma) to sigma log mu1. By default the
/// first `corrections` exponents from mu1_correction_exponents are fitted;
/// with p set, a polynomial of degree `corrections` in n^-p is used instead.
Mu1Estimate mu1_estimate(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& sigma, std::size_t window = 0,
                         int corrections = 4, std::optional<double> p = std::nullopt);

/// Extrapolated limit of a local-sigma sequence against n^-p.
TailFit extrapolate_sigma(const EstimatorSeq& sigma_seq, double p, std::size_t window = 0, int degree = 1);

struct StretchDiagnostics {
  EstimatorSeq sigma_known_ratio;  // empty when mu is unknown
  EstimatorSeq sigma_known_diff;   // empty when mu is unknown
  EstimatorSeq sigma_ratio_of_ratios;
  EstimatorSeq sigma_root_ratio;
  std::optional<Mu1Estimate> mu1;  // needs mu and sigma
  HPFloat sigma;                   // the sigma used for extrapolations
};

StretchDiagnostics stretch_diagnostics(const ExactSeries& s, const std::optional<HPFloat>& mu, const HPFloat& sigma,
                                       Precision prec);
StretchDiagnostics stretch_diagnostics(const RationalSeries& s, const std::optional<HPFloat>& mu,
                                       const HPFloat& sigma, Precision prec);

}  // namespace papseries
