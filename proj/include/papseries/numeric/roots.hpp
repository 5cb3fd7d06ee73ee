#pragma once

#include "papseries/numeric/complex.hpp"
#include "papseries/numeric/poly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace papseries {

class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All complex roots of p (with multiplicity), sorted by modulus and then by
/// argument in (-pi, pi]. Aberth iteration runs with 20 guard digits beyond
/// `prec`; if it stalls it is restarted from companion-matrix eigenvalues.
/// Throws RootFindingError naming the polynomial when both attempts fail.
std::vector<HPComplex> poly_roots(const HPPoly& p, Precision prec);
std::vector<HPComplex> poly_roots(const RationalPoly& p, Precision prec);

/// Monic expansion of prod (z - r_i), ascending degree.
std::vector<HPComplex> expand_roots(const std::vector<HPComplex>& roots);

std::string describe(const HPPoly& p, unsigned digits = 12);

}  // namespace papseries
