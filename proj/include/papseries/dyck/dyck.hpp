#pragma once

#include "papseries/analysis/fitting.hpp"
#include "papseries/series/series.hpp"

#include <vector>

namespace papseries {

/// d[n][h] = number of Dyck paths of length 2n whose maximum height is exactly
/// h, for 0 <= n, h <= max_n. Row 0 holds the empty path (height 0).
std::vector<std::vector<BigInt>> dyck_counts(int max_n);

/// Coefficients sum_h d_{n,h} y^h for n = 0..max_n, exact.
RationalSeries dyck_series(const BigRational& y, int max_n);

/// Parameters of c_n ~ C 4^n mu1^(n^(1/3)) n^(-5/6) at height weight y, with
/// r = -log y, mu1 = exp(-E r^(2/3)), C = (1-y)/y^2 r^(1/3) A,
/// A = 2^(5/3) pi^(5/6) / sqrt 3 and E = 3 (pi/2)^(2/3).
AsymptoticModel dyck_truth(const BigRational& y, Precision prec = Precision{});

}  // namespace papseries
