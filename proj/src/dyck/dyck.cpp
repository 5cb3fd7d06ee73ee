#include "papseries/dyck/dyck.hpp"

#include <stdexcept>

namespace papseries {

namespace {

// Paths of length 2n staying within height h, for n = 0..max_n.
std::vector<BigInt> bounded_counts(int h, int max_n) {
  std::vector<BigInt> out{BigInt(1)};
  std::vector<BigInt> cur(static_cast<std::size_t>(h) + 1, BigInt(0)), next(cur.size());
  cur[0] = 1;
  for (int step = 1; step <= 2 * max_n; ++step) {
    // Heights above the remaining steps cannot return to 0 in time.
    const int top = std::min({h, step, 2 * max_n - step});
    for (int k = 0; k <= h; ++k) next[k] = 0;
    for (int k = 0; k <= top; ++k) {
      if (k > 0) next[k] += cur[k - 1];
      if (k < h) next[k] += cur[k + 1];
    }
    std::swap(cur, next);
    if (step % 2 == 0) out.push_back(cur[0]);
  }
  return out;
}

}  // namespace

std::vector<std::vector<BigInt>> dyck_counts(int max_n) {
  if (max_n < 0) throw std::invalid_argument("dyck_counts: max_n must be non-negative");
  const auto size = static_cast<std::size_t>(max_n) + 1;
  std::vector<std::vector<BigInt>> d(size, std::vector<BigInt>(size, BigInt(0)));
  d[0][0] = 1;
  std::vector<BigInt> below(size, BigInt(0));  // height <= h-1
  below[0] = 1;
  for (int h = 1; h <= max_n; ++h) {
    // Paths of length 2n have height at most n, so only n >= h matter here.
    const std::vector<BigInt> upto = bounded_counts(h, max_n);
    for (int n = h; n <= max_n; ++n) d[n][h] = upto[n] - below[n];
    below = upto;
  }
  return d;
}

RationalSeries dyck_series(const BigRational& y, int max_n) {
  if (sgn(y) <= 0 || y >= 1) throw std::invalid_argument("dyck_series: y must lie in (0, 1)");
  const auto d = dyck_counts(max_n);
  RationalSeries s;
  s.name = "dyck(y=" + y.get_str() + ")";
  std::vector<BigRational> powers{BigRational(1)};
  for (int h = 1; h <= max_n; ++h) {
    BigRational p = powers.back() * y;
    p.canonicalize();
    powers.push_back(p);
  }
  for (int n = 0; n <= max_n; ++n) {
    BigRational c(0);
    for (int h = 0; h <= n; ++h)
      if (d[n][h] != 0) c += BigRational(d[n][h]) * powers[h];
    c.canonicalize();
    s.coeffs.push_back(std::move(c));
  }
  return s;
}

AsymptoticModel dyck_truth(const BigRational& y, Precision prec) {
  if (sgn(y) <= 0 || y >= 1) throw std::invalid_argument("dyck_truth: y must lie in (0, 1)");
  const HPFloat yy(y, prec);
  const HPFloat r = -log(yy);
  const HPFloat pi_ = pi(prec);
  const HPFloat third(BigRational(1, 3), prec);
  const HPFloat A = pow(HPFloat(2L, prec), HPFloat(BigRational(5, 3), prec)) *
                    pow(pi_, HPFloat(BigRational(5, 6), prec)) / sqrt(HPFloat(3L, prec));
  const HPFloat E = pow(pi_ / 2L, HPFloat(BigRational(2, 3), prec)) * 3L;
  AsymptoticModel m;
  m.mu = HPFloat(4L, prec);
  m.g = HPFloat(BigRational(-5, 6), prec);
  m.mu1 = exp(-E * pow(r, HPFloat(BigRational(2, 3), prec)));
  m.sigma = BigRational(1, 3);
  m.C = (1L - yy) / (yy * yy) * pow(r, third) * A;
  m.mu_err = HPFloat(prec);
  m.g_err = HPFloat(prec);
  return m;
}

}  // namespace papseries
