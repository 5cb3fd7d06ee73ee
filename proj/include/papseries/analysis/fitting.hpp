#pragma once

#include "papseries/analysis/ratio.hpp"

#include <optional>
#include <string>
#include <vector>

namespace papseries {

/// c_n ~ C mu^n mu1^(n^sigma) n^g; a pure power law when mu1 is absent.
struct AsymptoticModel {
  HPFloat mu;
  HPFloat g;
  std::optional<HPFloat> mu1;
  std::optional<BigRational> sigma;
  std::optional<HPFloat> C;
  // Power-law ratio corrections: r_n = mu (1 + g/n + h/n^2 + j/n^3).
  std::optional<HPFloat> h;
  std::optional<HPFloat> j;

  HPFloat mu_err, g_err;
  std::optional<HPFloat> mu1_err, C_err;

  bool power_law() const { return !mu1.has_value(); }
  HPFloat z_c() const;
  /// Ratio implied by the model at index n.
  HPFloat ratio_at(long n) const;
};

/// Parameter estimates from a sliding window of consecutive points.
struct FitTrace {
  std::string name;
  std::vector<std::string> params;
  std::vector<long> window_end;                 // largest index in each window
  std::vector<std::vector<HPFloat>> estimates;  // estimates[w][param]
  std::vector<long> skipped;                    // windows with a singular system
  std::string note;

  std::size_t size() const { return window_end.size(); }
  /// Trace of one parameter as an estimator sequence indexed by window end.
  EstimatorSeq param(const std::string& name) const;
  std::string to_csv() const;
};

/// log c_k = c1 k + c2 k^sigma + c3 log k + c4 over 4 consecutive k.
/// Parameters: log_mu, log_mu1, g, log_C.
FitTrace fit_log_coeffs_4pt(const EstimatorSeq& log_c, const HPFloat& sigma);

/// log c_k - k log mu = c1 k^sigma + c2 log k + c3 over 3 consecutive k.
/// Parameters: log_mu1, g, log_C.
FitTrace fit_log_coeffs_3pt(const EstimatorSeq& log_c, const HPFloat& mu, const HPFloat& sigma);

/// r_n = c1 + c2 n^(sigma-1) + c3/n + c4 n^(2sigma-2) over 4 consecutive n.
/// When sigma = 1/2 the last two basis functions coincide and the basis
/// becomes {1, n^-1/2, n^-1, n^-3/2}.
/// Parameters: mu, sigma_log_mu1, g, c4 (raw c4 coefficient).
FitTrace fit_ratios_4pt(const EstimatorSeq& r, const HPFloat& sigma);

/// r_n = mu (1 + g/n + h/n^2 + j/n^3) over 4 consecutive n.
/// Parameters: mu, mu_g, mu_h, mu_j.
FitTrace fit_ratios_powerlaw(const EstimatorSeq& r);
/// Same fit on exact ratios, solved in rational arithmetic.
FitTrace fit_ratios_powerlaw(const ExactSeries& s, Precision prec);

/// r_n - mu = c1 n^(sigma-1) + c2/n + c3 n^(2sigma-2) over 3 consecutive n
/// (sigma = 1/2 uses {n^-1/2, n^-1, n^-3/2}). Parameters: c1, c2, c3.
FitTrace fit_ratios_3param(const EstimatorSeq& r, const HPFloat& mu, const HPFloat& sigma);

/// log c_k - g log k = c1 k + c2 + c3/k over 3 consecutive k.
/// Parameters: log_mu, log_C, c3.
FitTrace fit_amplitude(const EstimatorSeq& log_c, const HPFloat& g);

/// Simple amplitude estimates C_n = c_n n^-g / mu^n.
EstimatorSeq amplitude_estimates(const EstimatorSeq& log_c, const HPFloat& mu, const HPFloat& g);

}  // namespace papseries
