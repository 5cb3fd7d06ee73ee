#include "papseries/numeric/poly.hpp"

namespace papseries {

HPPoly to_hp(const RationalPoly& p, Precision prec) {
  std::vector<HPFloat> c;
  c.reserve(p.coeffs().size());
  for (const auto& a : p.coeffs()) c.emplace_back(a, prec);
  return HPPoly(std::move(c));
}

}  // namespace papseries
