#pragma once

#include "papseries/analysis/diffapprox.hpp"
#include "papseries/analysis/fitting.hpp"
#include "papseries/analysis/stieltjes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace papseries {

/// One reported number with the estimator and settings that produced it.
struct ReportedValue {
  std::string name;
  HPFloat value;
  std::optional<HPFloat> error;
  std::string method;
};

/// An estimator sequence destined for a two-column plot file (x = n^-p).
struct PlotSeries {
  std::string name;
  EstimatorSeq seq;
  double abscissa = 1.0;
};

struct ExtensionSummary {
  std::size_t exact_terms = 0;
  std::size_t predicted = 0;
  std::size_t members = 0;
  std::size_t survivors = 0;
  std::size_t failed = 0;
  std::vector<int> orders;
  long reliable_until = 0;  // last n whose predicted ratio meets the tolerance
  HPFloat zc_mean, zc_std, exponent_mean, exponent_std;
};

struct AnalysisReport {
  std::string series;
  std::string mode;  // "powerlaw" or "stretched"
  std::vector<std::string> diagnostics;
  AsymptoticModel model;
  std::vector<ReportedValue> estimates;
  std::optional<BoundReport> bounds;
  std::optional<ExtensionSummary> extension;
  std::vector<std::string> notes;
  std::vector<PlotSeries> plots;

  /// Throws std::out_of_range for an unknown name.
  const ReportedValue& estimate(const std::string& name) const;
  bool has(const std::string& name) const;
  std::string to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

struct AnalysisOptions {
  Precision precision{};
  unsigned threads = 1;
  std::size_t extend = 0;       // coefficients to predict before the analysis
  std::vector<int> orders{3};   // DA orders for the extension
  double reliable_tolerance = 1e-6;  // relative ratio uncertainty kept in fits
  std::optional<HPFloat> mu;    // growth constant taken as known
  std::optional<HPFloat> g;     // exponent for the amplitude fit
  bool bounds = true;
};

/// Extends s (if requested) and returns the ratio and log-coefficient
/// sequences cut at the reliable range.
struct PreparedSeries {
  ExactSeries series;
  EstimatorSeq ratios;
  EstimatorSeq log_coefficients;
  std::optional<ExtensionSummary> extension;
};
PreparedSeries prepare_series(const ExactSeries& s, const AnalysisOptions& options);

/// c_n ~ C mu^n n^g: intercepts, exponent estimators, the four-parameter
/// ratio fit and the amplitude fit.
AnalysisReport analyze_powerlaw(const ExactSeries& s, const AnalysisOptions& options);

/// c_n ~ C mu^n mu1^(n^sigma) n^g with sigma given.
AnalysisReport analyze_stretched(const ExactSeries& s, const BigRational& sigma, const AnalysisOptions& options);
/// Weighted (rational) series; no extension or bounds.
AnalysisReport analyze_stretched(const RationalSeries& s, const BigRational& sigma, const AnalysisOptions& options);

/// Last index n whose ratio has relative uncertainty <= tol, counting exact
/// ratios (no uncertainty) as reliable.
long reliable_limit(const EstimatorSeq& r, double tol);

/// Two-column text: n^-p and value, one line per point.
std::string plot_columns(const PlotSeries& plot);

}  // namespace papseries
