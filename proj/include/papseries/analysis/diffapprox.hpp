#pragma once

#include "papseries/numeric/complex.hpp"
#include "papseries/numeric/poly.hpp"
#include "papseries/series/series.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace papseries {

enum class DAArithmetic { Exact, Float };

/// sum_k Q_k(z) (z d/dz)^k F(z) = P(z) with deg Q_k = N_k and deg P = L.
/// N_k = -1 drops Q_k (k < M); L = -1 makes the equation homogeneous.
struct DAConfig {
  int order = 1;                // M
  std::vector<int> degrees;     // N_0 .. N_M
  int inhom = -1;               // L
  DAArithmetic mode = DAArithmetic::Float;

  /// Number of unknowns, which equals the number of coefficients consumed.
  std::size_t unknowns() const;
  void validate() const;
  /// Stable ordering key, e.g. "M3:N4,4,5,5:L-1".
  std::string key() const;
};

class DefectiveConstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiffApproximant {
  DAConfig config;
  std::vector<HPPoly> q;  // Q_0..Q_M
  HPPoly p;
  // Exact mode keeps the rational solution as well.
  std::vector<RationalPoly> q_exact;
  RationalPoly p_exact;
  std::vector<BigRational> data;  // the consumed coefficients f_0..f_{N-1}
  Precision precision;

  std::size_t consumed() const { return data.size(); }
  bool exact() const { return config.mode == DAArithmetic::Exact; }
};

/// Fits the DA to the first config.unknowns() coefficients. Throws
/// DefectiveConstruction when the matching system is singular.
DiffApproximant build_da(const std::vector<BigRational>& coeffs, const DAConfig& config, Precision prec = Precision{});
DiffApproximant build_da(const ExactSeries& s, const DAConfig& config, Precision prec = Precision{});

/// F ~ (1 - z/z_i)^(-gamma) near z_i.
struct SingularityEstimate {
  HPComplex location;
  std::optional<HPFloat> exponent;     // real part; absent at multiple roots
  std::optional<HPFloat> exponent_im;  // imaginary part at complex roots
  bool multiple = false;
  bool defective = false;
  std::string reason;

  bool real_positive() const;
};

/// Zeros of Q_M with their indicial exponents, sorted by modulus.
std::vector<SingularityEstimate> singularities(const DiffApproximant& da);

/// Smallest-modulus positive real singularity, if any.
std::optional<SingularityEstimate> physical_singularity(const std::vector<SingularityEstimate>& s);

/// Coefficients f_N, f_N+1, ... from the recurrence. Stops early (partial
/// output) where sum_k q_k0 n^k vanishes.
std::vector<HPFloat> predict_coefficients(const DiffApproximant& da, std::size_t count);
/// Exact-mode version; throws std::logic_error on a Float-mode DA.
std::vector<BigRational> predict_coefficients_exact(const DiffApproximant& da, std::size_t count);
/// Recurrence applied over the consumed range (exact mode). Where the
/// indicial factor vanishes the input coefficient is kept.
std::vector<BigRational> regenerate_prefix(const DiffApproximant& da);

struct EnsembleMember {
  DAConfig config;
  std::vector<SingularityEstimate> singularities;
  std::optional<SingularityEstimate> physical;
  std::vector<HPFloat> coefficients;  // predictions from first_index on
  std::vector<HPFloat> ratios;
  bool rejected = false;
  std::string reason;
};

struct PredictionEnsemble {
  std::string source;
  long first_index = 0;  // index of the first predicted coefficient
  std::size_t failed = 0;  // configurations with a singular system
  std::vector<EnsembleMember> members;
  std::vector<Predicted> coefficients;
  std::vector<Predicted> ratios;
  std::vector<int> coefficient_digits;  // leading digits on which all survivors agree
  std::vector<int> ratio_digits;
  std::vector<std::string> exclusions;  // outlier-exclusion record
  HPFloat zc_mean, zc_std;
  HPFloat exponent_mean, exponent_std;

  std::size_t survivors() const;
  /// Copy of s with the predicted ratios and coefficients appended as its tail.
  ExactSeries apply(const ExactSeries& s) const;
  std::string to_json() const;
};

struct EnsembleOptions {
  Precision precision{};
  unsigned threads = 1;
  unsigned max_exact_concurrency = 2;
  double delta = 0.05;          // defect cut: roots inside (1 - delta) of the median radius
  double outlier_sigmas = 3.0;  // leave-one-out cut on the physical singularity
  // Per-index cut on predicted values, in robust deviations (1.4826 MAD) from the median.
  double prediction_sigmas = 10.0;
};

/// Defect and outlier rejection over the non-rejected members. Needs at least
/// three of them; throws std::runtime_error if none survive.
void reject_defective(std::vector<EnsembleMember>& members, double delta = 0.05, double sigmas = 3.0,
                      std::vector<std::string>* record = nullptr);

/// M in orders, all degree tuples with spread <= 2 using all `terms`
/// coefficients, L in [l_min, l_max].
std::vector<DAConfig> default_grid(std::size_t terms, std::vector<int> orders = {2, 3}, int l_min = -1, int l_max = 2,
                                   DAArithmetic mode = DAArithmetic::Float);

/// Builds every configuration on the exact coefficients of s, rejects defective
/// members and aggregates `count` predicted coefficients and ratios.
PredictionEnsemble extend_series(const ExactSeries& s, std::size_t count, const std::vector<DAConfig>& grid,
                                 const EnsembleOptions& options = {});

}  // namespace papseries
