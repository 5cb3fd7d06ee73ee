#pragma once

#include "papseries/analysis/ratio.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace papseries {

/// A(x) = alpha_0 / (1 - alpha_1 x / (1 - alpha_2 x / ...)), truncated.
struct ContinuedFraction {
  std::vector<BigRational> alphas;
  std::string source;

  std::size_t depth() const { return alphas.empty() ? 0 : alphas.size() - 1; }
  /// Index of the first negative alpha, if any.
  std::optional<std::size_t> first_negative() const;
  /// Power series of the truncated fraction through x^terms-1.
  std::vector<BigRational> expand(std::size_t terms) const;
  /// Alphas as exact "p/q" strings.
  std::vector<std::string> alpha_strings() const;
};

/// The quotient-difference table hit a zero divisor while computing alpha_index.
class SFractionBreakdown : public std::domain_error {
 public:
  SFractionBreakdown(std::size_t index, const std::string& what) : std::domain_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Exact S-fraction coefficients alpha_0..alpha_depth by the quotient-difference
/// algorithm. depth defaults to (number of coefficients - 1).
ContinuedFraction sfraction(const ExactSeries& s, std::optional<std::size_t> depth = std::nullopt);
ContinuedFraction sfraction(const RationalSeries& s, std::optional<std::size_t> depth = std::nullopt);

/// Same coefficients from Hankel determinant ratios. Slower; used as a cross-check.
ContinuedFraction sfraction_hankel(const ExactSeries& s, std::optional<std::size_t> depth = std::nullopt);

struct HankelReport {
  std::vector<BigInt> h0;  // det [a_{i+j}], sizes 1..
  std::vector<BigInt> h1;  // det [a_{i+j+1}], sizes 1..
  // First non-positive minor: (matrix 0 or 1, size k).
  std::optional<std::pair<int, std::size_t>> first_nonpositive;

  bool all_positive() const { return !first_nonpositive; }
};

/// Leading principal minors of both Hankel matrices as far as the series allows.
/// Total positivity (all minors) is not checked.
HankelReport hankel_check(const ExactSeries& s);

/// Largest ratio c_n / c_{n-1} over the exact coefficients.
HPFloat logconvex_bound(const ExactSeries& s, Precision prec = Precision{});

struct BoundReport {
  std::string source;
  HPFloat logconvex_bound;
  std::vector<std::pair<long, HPFloat>> hhr_bounds;  // (n, b_n), b_n = (sqrt alpha_n + sqrt alpha_{n-1})^2
  HPFloat max_bound;
  std::vector<std::size_t> parity_violations;  // n with alpha_n < alpha_{n-2}
  bool bounds_monotone = true;
  bool conjectural = true;  // Stieltjes property observed rather than proved
  std::optional<std::pair<HPFloat, double>> extrapolated;  // (limit, abscissa exponent beta)

  const HPFloat& bound_at(long n) const;
  std::string to_json() const;
};

/// b_n for n = 2..depth. Throws std::domain_error on a negative alpha.
BoundReport hhr_bounds(const ContinuedFraction& cf, Precision prec = Precision{});
/// Full report for a series: log-convex bound plus HHR bounds at full depth.
BoundReport stieltjes_bounds(const ExactSeries& s, Precision prec = Precision{});

/// beta = 2 theta / (2 - theta), for 0 < theta <= 1.
double bound_beta(double theta);

/// Linear extrapolation of b_n against n^-beta over the last `window` bounds.
void extrapolate_bounds(BoundReport& report, double beta, std::size_t window = 0);

}  // namespace papseries
