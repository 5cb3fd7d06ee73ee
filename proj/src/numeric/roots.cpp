#include "papseries/numeric/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace papseries {

namespace {

constexpr unsigned kGuardDigits = 20;
constexpr int kMaxIterations = 2000;

HPFloat ten_to_minus(long digits, Precision p) { return pow(HPFloat(10L, p), -digits); }

// Value and derivative of p at z in one Horner pass.
void horner(const std::vector<HPFloat>& c, const HPComplex& z, HPComplex& value, HPComplex& deriv) {
  const Precision p = z.precision();
  value = HPComplex(p);
  deriv = HPComplex(p);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    deriv = deriv * z + value;
    value = value * z;
    value.re += *it;
  }
}

// sum |c_k| |z|^k, the scale against which |p(z)| is judged.
HPFloat magnitude_bound(const std::vector<HPFloat>& c, const HPFloat& modulus) {
  HPFloat acc(modulus.precision());
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * modulus + abs(*it);
  return acc;
}

std::vector<HPComplex> circle_seeds(const std::vector<HPFloat>& c, Precision p) {
  const int n = static_cast<int>(c.size()) - 1;
  // Geometric mean of the root moduli.
  HPFloat radius = pow(abs(c.front() / c.back()), HPFloat(1L, p) / HPFloat(static_cast<long>(n), p));
  std::vector<HPComplex> z;
  const HPFloat two_pi = pi(p) * 2L;
  for (int k = 0; k < n; ++k) {
    HPFloat angle = two_pi * static_cast<long>(k) / static_cast<long>(n) + HPFloat(0.4, p);
    z.emplace_back(radius * cos(angle), radius * sin(angle));
  }
  return z;
}

std::optional<std::vector<HPComplex>> companion_seeds(const std::vector<HPFloat>& c, Precision p) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double lead = c.back().to_double();
  for (int i = 0; i < n; ++i) {
    const double v = -c[i].to_double() / lead;
    if (!std::isfinite(v)) return std::nullopt;
    m(0, n - 1 - i) = v;
  }
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) return std::nullopt;
  std::vector<HPComplex> z;
  for (int i = 0; i < n; ++i) {
    const auto e = solver.eigenvalues()[i];
    // Perturb slightly so exactly repeated seeds do not collide.
    z.emplace_back(HPFloat(e.real() * (1.0 + 1e-9 * (i + 1)), p), HPFloat(e.imag() + 1e-9 * (i + 1), p));
  }
  return z;
}

std::optional<std::vector<HPComplex>> aberth(const std::vector<HPFloat>& c, std::vector<HPComplex> z, Precision work) {
  const std::size_t n = z.size();
  const HPFloat tol = ten_to_minus(static_cast<long>(work.digits) - 10, work);
  std::vector<bool> done(n, false);
  HPComplex value(work), deriv(work);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      horner(c, z[i], value, deriv);
      const HPFloat backward = magnitude_bound(c, abs(z[i])) * tol;
      if (abs(value) <= backward) {
        // One more step after the residual hits rounding level, then freeze.
        if (done[i]) continue;
        done[i] = true;
      } else {
        done[i] = false;
        all_done = false;
      }
      if (norm(deriv).is_zero()) {
        z[i] = z[i] + HPComplex(tol, tol);
        continue;
      }
      HPComplex w = value / deriv;
      HPComplex s(work);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        HPComplex d = z[i] - z[j];
        if (norm(d).is_zero()) continue;
        s += HPComplex(HPFloat(1L, work)) / d;
      }
      HPComplex denom = HPComplex(HPFloat(1L, work)) - w * s;
      if (norm(denom).is_zero()) continue;
      z[i] -= w / denom;
    }
    if (all_done) return z;
  }
  return std::nullopt;
}

void sort_roots(std::vector<HPComplex>& roots, Precision prec) {
  std::sort(roots.begin(), roots.end(), [](const HPComplex& a, const HPComplex& b) { return norm(a) < norm(b); });
  // Moduli equal to working accuracy (conjugate pairs) are ordered by argument.
  const HPFloat tol = ten_to_minus(static_cast<long>(prec.digits) - 10, prec);
  std::size_t start = 0;
  while (start < roots.size()) {
    std::size_t end = start + 1;
    while (end < roots.size() && approx_equal(abs(roots[end]), abs(roots[start]), tol)) ++end;
    std::sort(roots.begin() + static_cast<long>(start), roots.begin() + static_cast<long>(end),
              [](const HPComplex& a, const HPComplex& b) { return arg(a) < arg(b); });
    start = end;
  }
}

}  // namespace

std::string describe(const HPPoly& p, unsigned digits) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) os << ", ";
    os << p.coeffs()[i].to_string(digits);
  }
  os << "]";
  return os.str();
}

std::vector<HPComplex> poly_roots(const HPPoly& p, Precision prec) {
  if (p.degree() < 1) throw std::invalid_argument("poly_roots: degree must be at least 1, got " + describe(p));
  const Precision work{prec.digits + kGuardDigits};

  std::vector<HPFloat> c;
  for (const auto& a : p.coeffs()) c.push_back(a.with_precision(work));
  std::vector<HPComplex> roots;
  // Exact zero roots.
  std::size_t zeros = 0;
  while (c[zeros].is_zero()) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) roots.emplace_back(prec);
  c.erase(c.begin(), c.begin() + static_cast<long>(zeros));

  if (c.size() == 2) {
    roots.emplace_back((-c[0] / c[1]).with_precision(prec), HPFloat(prec));
  } else if (c.size() > 2) {
    auto found = aberth(c, circle_seeds(c, work), work);
    if (!found) {
      if (auto seeds = companion_seeds(c, work)) found = aberth(c, std::move(*seeds), work);
    }
    if (!found) throw RootFindingError("poly_roots: no convergence for polynomial " + describe(p));
    const HPFloat real_tol = ten_to_minus(static_cast<long>(prec.digits) - 10, work);
    for (auto& z : *found) {
      // Snap numerically real roots onto the axis.
      if (abs(z.im) <= real_tol * abs(z)) z.im = HPFloat(work);
      roots.emplace_back(z.re.with_precision(prec), z.im.with_precision(prec));
    }
  }
  sort_roots(roots, prec);
  return roots;
}

std::vector<HPComplex> poly_roots(const RationalPoly& p, Precision prec) {
  return poly_roots(to_hp(p, Precision{prec.digits + kGuardDigits}), prec);
}

std::vector<HPComplex> expand_roots(const std::vector<HPComplex>& roots) {
  const Precision p = roots.empty() ? Precision{} : roots.front().precision();
  std::vector<HPComplex> c{HPComplex(HPFloat(1L, p))};
  for (const auto& r : roots) {
    std::vector<HPComplex> next(c.size() + 1, HPComplex(p));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * r;
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace papseries
