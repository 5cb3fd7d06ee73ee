#pragma once

#include "papseries/numeric/hpfloat.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace papseries {

/// A predicted quantity and its estimated absolute error.
struct Predicted {
  HPFloat value;
  HPFloat uncertainty;
};

/// Integer coefficient sequence c_offset, c_offset+1, ... with an optional
/// predicted continuation. Predictions are kept apart from the exact data.
struct ExactSeries {
  std::string name;
  std::string oeis;
  int offset = 0;
  std::vector<BigInt> coeffs;
  std::vector<Predicted> tail;         // c_n for n past the exact range
  std::vector<Predicted> tail_ratios;  // r_n = c_n / c_{n-1} past the exact range

  int last_exact_index() const { return offset + static_cast<int>(coeffs.size()) - 1; }
  const BigInt& at(int n) const { return coeffs.at(static_cast<std::size_t>(n - offset)); }
  /// First `count` exact coefficients, without any predictions.
  ExactSeries prefix(std::size_t count) const;
};

/// A sequence of estimates indexed by n, as plotted in a ratio analysis.
struct EstimatorSeq {
  std::string label;
  std::vector<long> n;
  std::vector<HPFloat> values;
  std::vector<HPFloat> errors;  // empty, or one absolute error per value
  double abscissa_exponent = 1.0;  // plot against n^-p
  std::optional<long> first_predicted;  // values from this n on derive from predictions

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  /// Value at index n; throws std::out_of_range if absent.
  const HPFloat& at(long index) const;
  bool has(long index) const;
  /// Copy restricted to lo <= n <= hi.
  EstimatorSeq window(long lo, long hi) const;
  void push(long index, HPFloat value);
  void push(long index, HPFloat value, HPFloat error);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Exact series with rational coefficients (weighted counts).
struct RationalSeries {
  std::string name;
  int offset = 0;
  std::vector<BigRational> coeffs;
};

/// r_n = c_n / c_{n-1} for every n where both are known. Predicted ratios
/// are appended (with their uncertainties) and marked via first_predicted.
EstimatorSeq ratios(const ExactSeries& s, Precision prec);
EstimatorSeq ratios(const RationalSeries& s, Precision prec);

/// Parses OEIS b-file text: `index value` per line, '#' comments and blank
/// lines ignored, indices consecutive.
ExactSeries ingest_bfile(std::string_view text, std::string name = "");
ExactSeries ingest_bfile_path(const std::string& path);

enum class SeriesFormat { Json, BFile, Csv };

std::string export_series(const ExactSeries& s, SeriesFormat format);
/// Coefficients are written as exact "p/q" strings.
std::string export_series(const RationalSeries& s, SeriesFormat format);
/// Inverse of the JSON export.
ExactSeries ingest_json(std::string_view text);

}  // namespace papseries
