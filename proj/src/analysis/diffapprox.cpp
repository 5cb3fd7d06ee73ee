#include "papseries/analysis/diffapprox.hpp"

#include "papseries/numeric/linear.hpp"
#include "papseries/numeric/roots.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace papseries {

std::size_t DAConfig::unknowns() const {
  long n = inhom;
  for (int d : degrees) n += d + 1;
  return n < 0 ? 0 : static_cast<std::size_t>(n);
}

void DAConfig::validate() const {
  if (order < 1) throw std::invalid_argument("DA order must be at least 1");
  if (degrees.size() != static_cast<std::size_t>(order) + 1) {
    throw std::invalid_argument("DA needs " + std::to_string(order + 1) + " degrees, got " + std::to_string(degrees.size()));
  }
  for (int k = 0; k < order; ++k)
    if (degrees[k] < -1) throw std::invalid_argument("DA degree N_" + std::to_string(k) + " below -1");
  if (degrees.back() < 0) throw std::invalid_argument("Q_M must be present (N_M >= 0)");
  if (inhom < -1) throw std::invalid_argument("inhomogeneous degree L below -1");
  if (unknowns() == 0) throw std::invalid_argument("DA with no unknowns");
}

std::string DAConfig::key() const {
  std::ostringstream os;
  os << 'M' << order << ":N";
  for (std::size_t k = 0; k < degrees.size(); ++k) os << (k ? "," : "") << degrees[k];
  os << ":L" << inhom;
  return os.str();
}

namespace {

// Unknown layout: q_{k,i} for k = 0..M, i = 0..N_k, skipping q_{M,0}; then p_0..p_L.
struct Layout {
  struct Slot {
    int k;
    int i;  // i < 0 marks p_{-i-1}
  };
  std::vector<Slot> slots;

  explicit Layout(const DAConfig& c) {
    for (int k = 0; k <= c.order; ++k)
      for (int i = 0; i <= c.degrees[k]; ++i)
        if (!(k == c.order && i == 0)) slots.push_back({k, i});
    for (int i = 0; i <= c.inhom; ++i) slots.push_back({-1, -i - 1});
  }
};

template <typename T>
T int_pow(long base, int e, const T& one) {
  T r = one;
  for (int j = 0; j < e; ++j) r *= base;
  return r;
}

// Entry of the matching equation for z^n against one unknown.
template <typename T>
T entry(const Layout::Slot& s, long n, const std::vector<T>& f, const T& zero) {
  if (s.k < 0) return (n == -s.i - 1) ? T(zero - 1L) : zero;
  const long m = n - s.i;
  if (m < 0) return zero;
  T one = zero;
  one += 1L;
  return int_pow<T>(m, s.k, one) * f[static_cast<std::size_t>(m)];
}

template <typename T>
void unpack(const DAConfig& c, const Layout& layout, const std::vector<T>& x, const T& zero, std::vector<Poly<T>>& q,
            Poly<T>& p) {
  std::vector<std::vector<T>> qc(static_cast<std::size_t>(c.order) + 1);
  for (int k = 0; k <= c.order; ++k) qc[k].assign(static_cast<std::size_t>(std::max(c.degrees[k] + 1, 0)), zero);
  T one = zero;
  one += 1L;
  qc[c.order][0] = one;
  std::vector<T> pc(static_cast<std::size_t>(c.inhom + 1), zero);
  for (std::size_t j = 0; j < layout.slots.size(); ++j) {
    const auto& s = layout.slots[j];
    if (s.k < 0) {
      pc[static_cast<std::size_t>(-s.i - 1)] = x[j];
    } else {
      qc[s.k][s.i] = x[j];
    }
  }
  q.clear();
  for (auto& v : qc) q.emplace_back(std::move(v));
  p = Poly<T>(std::move(pc));
}

std::optional<std::vector<HPFloat>> solve_equilibrated(Matrix<HPFloat> a, std::vector<HPFloat> b) {
  const std::size_t n = a.rows();
  const Precision prec = b.empty() ? Precision{} : b[0].precision();
  std::vector<HPFloat> col(n, HPFloat(1L, prec));
  for (std::size_t j = 0; j < n; ++j) {
    HPFloat m(prec);
    for (std::size_t i = 0; i < n; ++i) m = max(m, abs(a(i, j)));
    if (m.is_zero()) return std::nullopt;
    col[j] = m;
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= m;
  }
  for (std::size_t i = 0; i < n; ++i) {
    HPFloat m(prec);
    for (std::size_t j = 0; j < n; ++j) m = max(m, abs(a(i, j)));
    if (m.is_zero()) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= m;
    b[i] /= m;
  }
  auto x = solve_linear(a, b);
  if (!x) return std::nullopt;
  for (std::size_t j = 0; j < n; ++j) (*x)[j] /= col[j];
  return x;
}

// sum_k q_{k,0} n^k, the factor multiplying f_n in the z^n equation.
template <typename T>
T indicial_factor(const std::vector<Poly<T>>& q, long n, const T& zero) {
  T acc = zero;
  T one = zero;
  one += 1L;
  for (std::size_t k = 0; k < q.size(); ++k) acc += q[k].coeff(0, zero) * int_pow<T>(n, static_cast<int>(k), one);
  return acc;
}

// p_n - sum_{i>=1} sum_k q_{k,i} (n-i)^k f_{n-i}
template <typename T>
T recurrence_numerator(const std::vector<Poly<T>>& q, const Poly<T>& p, long n, const std::vector<T>& f, const T& zero) {
  T acc = p.coeff(static_cast<std::size_t>(n), zero);
  T one = zero;
  one += 1L;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const auto& c = q[k].coeffs();
    for (std::size_t i = 1; i < c.size() && static_cast<long>(i) <= n; ++i) {
      const long m = n - static_cast<long>(i);
      acc -= c[i] * int_pow<T>(m, static_cast<int>(k), one) * f[static_cast<std::size_t>(m)];
    }
  }
  return acc;
}

HPFloat mean_of(const std::vector<HPFloat>& v, Precision p) {
  HPFloat s(p);
  for (const auto& x : v) s += x;
  return s / static_cast<long>(v.size());
}

HPFloat std_of(const std::vector<HPFloat>& v, const HPFloat& mean, Precision p) {
  if (v.size() < 2) return HPFloat(p);
  HPFloat s(p);
  for (const auto& x : v) s += (x - mean) * (x - mean);
  return sqrt(s / static_cast<long>(v.size() - 1));
}

HPFloat median_of(std::vector<HPFloat> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2L;
}

// Flags values more than `sigmas` robust deviations (1.4826 MAD) from the
// median. The deviation never drops below |median| * eps.
std::vector<bool> robust_outliers(const std::vector<HPFloat>& v, double sigmas, const HPFloat& eps) {
  std::vector<bool> out(v.size(), false);
  if (v.size() < 3) return out;
  const HPFloat med = median_of(v);
  std::vector<HPFloat> dev;
  for (const auto& x : v) dev.push_back(abs(x - med));
  const Precision p = med.precision();
  const HPFloat scale = max(median_of(dev) * HPFloat(1.4826, p), abs(med) * eps);
  const HPFloat cut = scale * HPFloat(sigmas, p);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = abs(v[i] - med) > cut;
  return out;
}

int agreed_digits(const std::vector<HPFloat>& v, Precision p) {
  if (v.empty()) return 0;
  HPFloat lo = v.front(), hi = v.front();
  for (const auto& x : v) {
    lo = min(lo, x);
    hi = max(hi, x);
  }
  const HPFloat scale = max(abs(lo), abs(hi));
  if (scale.is_zero() || hi == lo) return static_cast<int>(p.digits);
  const double d = -std::log10((hi - lo).to_double() / scale.to_double());
  return std::clamp(static_cast<int>(std::floor(d)), 0, static_cast<int>(p.digits));
}

}  // namespace

DiffApproximant build_da(const std::vector<BigRational>& coeffs, const DAConfig& config, Precision prec) {
  config.validate();
  const std::size_t n = config.unknowns();
  if (coeffs.size() < n) {
    throw std::invalid_argument(config.key() + " needs " + std::to_string(n) + " coefficients, have " +
                                std::to_string(coeffs.size()));
  }
  const Layout layout(config);
  DiffApproximant da;
  da.config = config;
  da.precision = prec;
  da.data.assign(coeffs.begin(), coeffs.begin() + static_cast<long>(n));
  const int M = config.order;

  if (config.mode == DAArithmetic::Exact) {
    const BigRational zero(0);
    Matrix<BigRational> a(n, n, zero);
    std::vector<BigRational> b(n, zero);
    for (std::size_t row = 0; row < n; ++row) {
      const long m = static_cast<long>(row);
      for (std::size_t j = 0; j < n; ++j) a(row, j) = entry(layout.slots[j], m, da.data, zero);
      b[row] = -int_pow<BigRational>(m, M, BigRational(1)) * da.data[row];
    }
    auto x = solve_linear(a, b);
    if (!x) throw DefectiveConstruction(config.key() + ": singular matching system");
    unpack(config, layout, *x, zero, da.q_exact, da.p_exact);
    for (const auto& q : da.q_exact) da.q.push_back(to_hp(q, prec));
    da.p = to_hp(da.p_exact, prec);
    return da;
  }

  const HPFloat zero(prec);
  std::vector<HPFloat> f;
  for (const auto& c : da.data) f.emplace_back(c, prec);
  Matrix<HPFloat> a(n, n, zero);
  std::vector<HPFloat> b(n, zero);
  for (std::size_t row = 0; row < n; ++row) {
    const long m = static_cast<long>(row);
    for (std::size_t j = 0; j < n; ++j) a(row, j) = entry(layout.slots[j], m, f, zero);
    b[row] = -(int_pow<HPFloat>(m, M, HPFloat(1L, prec)) * f[row]);
  }
  auto x = solve_equilibrated(std::move(a), std::move(b));
  if (!x) throw DefectiveConstruction(config.key() + ": singular matching system");
  unpack(config, layout, *x, zero, da.q, da.p);
  return da;
}

DiffApproximant build_da(const ExactSeries& s, const DAConfig& config, Precision prec) {
  std::vector<BigRational> c;
  for (const auto& v : s.coeffs) c.emplace_back(v);
  return build_da(c, config, prec);
}

bool SingularityEstimate::real_positive() const {
  return location.re.sign() > 0 && abs(location.im) <= abs(location.re) * HPFloat(1e-8, location.precision());
}

std::vector<SingularityEstimate> singularities(const DiffApproximant& da) {
  const int M = da.config.order;
  const HPPoly& qm = da.q[static_cast<std::size_t>(M)];
  if (qm.degree() < 1) return {};
  const Precision prec = da.precision;
  const std::vector<HPComplex> roots = da.exact() ? poly_roots(da.q_exact[static_cast<std::size_t>(M)], prec)
                                                  : poly_roots(qm, prec);
  const HPPoly dqm = qm.derivative();
  const HPPoly& qm1 = da.q[static_cast<std::size_t>(M - 1)];
  const HPFloat sep = pow(HPFloat(10L, prec), -static_cast<long>(prec.digits / 4));

  std::vector<SingularityEstimate> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    SingularityEstimate s{roots[i], std::nullopt, std::nullopt, false, false, {}};
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i && abs(roots[i] - roots[j]) <= sep * abs(roots[i])) s.multiple = true;
    }
    if (s.multiple) {
      s.reason = "multiple root; indicial exponent not evaluated";
    } else {
      const HPComplex z = roots[i];
      const HPComplex zero{HPFloat(prec), HPFloat(prec)};
      const HPComplex ratio = qm1.eval(z, zero) / (z * dqm.eval(z, zero));
      // F ~ (1 - z/z_i)^(-gamma): the indicial root M-1-ratio is -gamma.
      s.exponent = -(HPFloat(static_cast<long>(M - 1), prec) - ratio.re);
      if (!ratio.im.is_zero()) s.exponent_im = ratio.im;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<SingularityEstimate> physical_singularity(const std::vector<SingularityEstimate>& s) {
  for (const auto& e : s)
    if (e.real_positive()) return e;
  return std::nullopt;
}

std::vector<HPFloat> predict_coefficients(const DiffApproximant& da, std::size_t count) {
  if (da.exact()) {
    std::vector<HPFloat> out;
    for (const auto& c : predict_coefficients_exact(da, count)) out.emplace_back(c, da.precision);
    return out;
  }
  const HPFloat zero(da.precision);
  std::vector<HPFloat> f;
  for (const auto& c : da.data) f.emplace_back(c, da.precision);
  std::vector<HPFloat> out;
  for (std::size_t j = 0; j < count; ++j) {
    const long n = static_cast<long>(f.size());
    const HPFloat d = indicial_factor(da.q, n, zero);
    if (d.is_zero()) break;
    f.push_back(recurrence_numerator(da.q, da.p, n, f, zero) / d);
    out.push_back(f.back());
  }
  return out;
}

std::vector<BigRational> predict_coefficients_exact(const DiffApproximant& da, std::size_t count) {
  if (!da.exact()) throw std::logic_error(da.config.key() + ": exact prediction needs an exact-mode DA");
  const BigRational zero(0);
  std::vector<BigRational> f = da.data;
  std::vector<BigRational> out;
  for (std::size_t j = 0; j < count; ++j) {
    const long n = static_cast<long>(f.size());
    const BigRational d = indicial_factor(da.q_exact, n, zero);
    if (sgn(d) == 0) break;
    BigRational v = recurrence_numerator(da.q_exact, da.p_exact, n, f, zero) / d;
    v.canonicalize();
    f.push_back(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<BigRational> regenerate_prefix(const DiffApproximant& da) {
  if (!da.exact()) throw std::logic_error(da.config.key() + ": regeneration needs an exact-mode DA");
  const BigRational zero(0);
  std::vector<BigRational> f;
  for (std::size_t i = 0; i < da.data.size(); ++i) {
    const long n = static_cast<long>(i);
    const BigRational d = indicial_factor(da.q_exact, n, zero);
    if (sgn(d) == 0) {
      f.push_back(da.data[i]);
      continue;
    }
    BigRational v = recurrence_numerator(da.q_exact, da.p_exact, n, f, zero) / d;
    v.canonicalize();
    f.push_back(std::move(v));
  }
  return f;
}

void reject_defective(std::vector<EnsembleMember>& members, double delta, double sigmas, std::vector<std::string>* record) {
  auto note = [&](EnsembleMember& m, std::string why) {
    m.rejected = true;
    m.reason = why;
    if (record) record->push_back(m.config.key() + ": " + why);
  };
  std::vector<EnsembleMember*> live;
  for (auto& m : members)
    if (!m.rejected) live.push_back(&m);
  if (live.size() < 3) throw std::invalid_argument("defect rejection needs at least three approximants");

  for (auto* m : live)
    if (!m->physical) note(*m, "no positive real singularity");
  std::vector<HPFloat> radii;
  for (auto* m : live)
    if (!m->rejected) radii.push_back(abs(m->physical->location));
  if (radii.empty()) throw std::runtime_error("every approximant is defective; widen the configuration grid");
  std::sort(radii.begin(), radii.end());
  const HPFloat median = radii.size() % 2 ? radii[radii.size() / 2]
                                          : (radii[radii.size() / 2 - 1] + radii[radii.size() / 2]) / 2L;
  const HPFloat cut = median * HPFloat(1.0 - delta, median.precision());
  for (auto* m : live) {
    if (m->rejected) continue;
    for (const auto& s : m->singularities) {
      if (abs(s.location) < cut) {
        note(*m, "spurious singularity at |z| = " + abs(s.location).to_string(8) + " inside the bulk radius");
        break;
      }
    }
  }

  std::vector<EnsembleMember*> kept;
  for (auto* m : live)
    if (!m->rejected) kept.push_back(m);
  if (kept.empty()) throw std::runtime_error("every approximant is defective; widen the configuration grid");
  if (kept.size() >= 3) {
    const Precision p = median.precision();
    const HPFloat floor = median * pow(HPFloat(10L, p), -static_cast<long>(p.digits) + 10);
    std::vector<EnsembleMember*> outliers;
    for (auto* m : kept) {
      std::vector<HPFloat> others;
      for (auto* o : kept)
        if (o != m) others.push_back(o->physical->location.re);
      const HPFloat mu = mean_of(others, p);
      const HPFloat sd = max(std_of(others, mu, p), floor);
      if (abs(m->physical->location.re - mu) > sd * HPFloat(sigmas, p)) outliers.push_back(m);
    }
    if (outliers.size() < kept.size()) {
      for (auto* m : outliers) note(*m, "critical point outside the ensemble spread");
    }
  }
}

std::vector<DAConfig> default_grid(std::size_t terms, std::vector<int> orders, int l_min, int l_max, DAArithmetic mode) {
  std::vector<DAConfig> grid;
  for (int M : orders) {
    for (int L = l_min; L <= l_max; ++L) {
      const long sum = static_cast<long>(terms) - L - (M + 1);  // sum of N_k
      if (sum < M + 1) continue;
      const long lo = std::max(0L, sum / (M + 1) - 2);
      std::vector<int> d(static_cast<std::size_t>(M) + 1, 0);
      // Enumerate tuples with entries in [base, base+2] for every base near the mean.
      std::vector<std::vector<int>> found;
      for (long base = lo; base <= sum / (M + 1); ++base) {
        std::vector<int> t(static_cast<std::size_t>(M) + 1, static_cast<int>(base));
        while (true) {
          long s = 0;
          int mn = t[0], mx = t[0];
          for (int v : t) {
            s += v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
          }
          if (s == sum && mn == base && mx - mn <= 2 && t.back() >= 1) found.push_back(t);
          std::size_t k = 0;
          while (k < t.size() && t[k] == base + 2) t[k++] = static_cast<int>(base);
          if (k == t.size()) break;
          ++t[k];
        }
      }
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      for (auto& t : found) grid.push_back({M, t, L, mode});
    }
  }
  return grid;
}

std::size_t PredictionEnsemble::survivors() const {
  return static_cast<std::size_t>(std::count_if(members.begin(), members.end(), [](const auto& m) { return !m.rejected; }));
}

ExactSeries PredictionEnsemble::apply(const ExactSeries& s) const {
  ExactSeries out = s;
  out.tail = coefficients;
  out.tail_ratios = ratios;
  return out;
}

std::string PredictionEnsemble::to_json() const {
  nlohmann::ordered_json j;
  j["source"] = source;
  j["first_index"] = first_index;
  j["failed_constructions"] = failed;
  j["survivors"] = survivors();
  j["z_c"] = {{"mean", zc_mean.to_string(16)}, {"std", zc_std.to_string(4)}};
  j["exponent"] = {{"mean", exponent_mean.to_string(12)}, {"std", exponent_std.to_string(4)}};
  auto& ms = j["members"] = nlohmann::json::array();
  for (const auto& m : members) {
    nlohmann::ordered_json e;
    e["config"] = m.config.key();
    if (m.physical) {
      e["z_c"] = m.physical->location.re.to_string(16);
      if (m.physical->exponent) e["exponent"] = m.physical->exponent->to_string(12);
    }
    e["rejected"] = m.rejected;
    if (m.rejected) e["reason"] = m.reason;
    ms.push_back(std::move(e));
  }
  auto dump = [&](const std::vector<Predicted>& v, const std::vector<int>& digits) {
    nlohmann::ordered_json a = nlohmann::json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
      a.push_back({{"n", first_index + static_cast<long>(i)},
                   {"value", v[i].value.to_string(30)},
                   {"uncertainty", v[i].uncertainty.to_string(4)},
                   {"agreed_digits", digits[i]}});
    }
    return a;
  };
  j["coefficients"] = dump(coefficients, coefficient_digits);
  j["ratios"] = dump(ratios, ratio_digits);
  j["exclusions"] = exclusions;
  return j.dump(2);
}

PredictionEnsemble extend_series(const ExactSeries& s, std::size_t count, const std::vector<DAConfig>& grid,
                                 const EnsembleOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty approximant grid");
  const Precision prec = options.precision;
  PredictionEnsemble ens;
  ens.source = s.name;
  ens.first_index = s.offset + static_cast<long>(s.coeffs.size());

  // Deterministic order: results are stored by sorted configuration key.
  std::vector<DAConfig> configs = grid;
  std::sort(configs.begin(), configs.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  std::vector<std::optional<EnsembleMember>> slots(configs.size());
  std::vector<BigRational> data;
  for (const auto& c : s.coeffs) data.emplace_back(c);
  const std::size_t known = data.size();

  auto work = [&](std::size_t idx) {
    const DAConfig& cfg = configs[idx];
    if (cfg.unknowns() > known) return;
    try {
      DiffApproximant da = build_da(data, cfg, prec);
      EnsembleMember m;
      m.config = cfg;
      m.singularities = singularities(da);
      m.physical = physical_singularity(m.singularities);
      // A DA that consumed fewer terms than available first predicts known ones.
      const std::size_t skip = known - da.consumed();
      std::vector<HPFloat> pred = predict_coefficients(da, skip + count);
      if (pred.size() > skip) m.coefficients.assign(pred.begin() + static_cast<long>(skip), pred.end());
      HPFloat prev(data.back(), prec);
      for (const auto& c : m.coefficients) {
        m.ratios.push_back(c / prev);
        prev = c;
      }
      slots[idx] = std::move(m);
    } catch (const DefectiveConstruction&) {
    } catch (const RootFindingError&) {
    }
  };

  bool exact = std::any_of(configs.begin(), configs.end(), [](const auto& c) { return c.mode == DAArithmetic::Exact; });
  unsigned threads = std::max(1u, options.threads);
  if (exact) threads = std::min(threads, std::max(1u, options.max_exact_concurrency));
  if (threads == 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (slots[i]) {
      ens.members.push_back(std::move(*slots[i]));
    } else if (configs[i].unknowns() <= known) {
      ++ens.failed;
    }
  }
  if (ens.members.empty()) throw std::runtime_error(s.name + ": no approximant could be constructed");
  if (ens.members.size() >= 3) reject_defective(ens.members, options.delta, options.outlier_sigmas, &ens.exclusions);

  std::vector<HPFloat> zc, ex;
  for (const auto& m : ens.members) {
    if (m.rejected || !m.physical) continue;
    zc.push_back(m.physical->location.re);
    if (m.physical->exponent) ex.push_back(*m.physical->exponent);
  }
  ens.zc_mean = zc.empty() ? HPFloat(prec) : mean_of(zc, prec);
  ens.zc_std = std_of(zc, ens.zc_mean, prec);
  ens.exponent_mean = ex.empty() ? HPFloat(prec) : mean_of(ex, prec);
  ens.exponent_std = std_of(ex, ens.exponent_mean, prec);

  // Aggregate index by index over surviving members that reached it, leaving
  // out members that stray from the median at that index. The reported
  // uncertainty is kept non-decreasing with distance and never drops below the
  // working precision.
  const HPFloat eps = pow(HPFloat(10L, prec), -static_cast<long>(prec.digits) + 10);
  HPFloat coef_floor(prec), ratio_floor(prec);
  std::vector<std::optional<long>> first_out(ens.members.size());
  auto kept = [](const std::vector<HPFloat>& v, const std::vector<bool>& out) {
    std::vector<HPFloat> k;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!out[i]) k.push_back(v[i]);
    return k;
  };
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<HPFloat> cs, rs;
    std::vector<std::size_t> who;
    for (std::size_t i = 0; i < ens.members.size(); ++i) {
      const auto& m = ens.members[i];
      if (m.rejected || j >= m.coefficients.size()) continue;
      cs.push_back(m.coefficients[j]);
      rs.push_back(m.ratios[j]);
      who.push_back(i);
    }
    if (cs.empty()) break;
    const auto c_out = robust_outliers(cs, options.prediction_sigmas, eps);
    const auto r_out = robust_outliers(rs, options.prediction_sigmas, eps);
    const long n = ens.first_index + static_cast<long>(j);
    for (std::size_t k = 0; k < who.size(); ++k)
      if ((c_out[k] || r_out[k]) && !first_out[who[k]]) first_out[who[k]] = n;
    cs = kept(cs, c_out);
    rs = kept(rs, r_out);
    const HPFloat cm = mean_of(cs, prec), rm = mean_of(rs, prec);
    coef_floor = max(max(coef_floor, std_of(cs, cm, prec)), abs(cm) * eps);
    ratio_floor = max(max(ratio_floor, std_of(rs, rm, prec)), abs(rm) * eps);
    ens.coefficients.push_back({cm, coef_floor});
    ens.ratios.push_back({rm, ratio_floor});
    ens.coefficient_digits.push_back(agreed_digits(cs, prec));
    ens.ratio_digits.push_back(agreed_digits(rs, prec));
  }
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    if (first_out[i]) {
      ens.exclusions.push_back(ens.members[i].config.key() + ": prediction outlier from n = " +
                               std::to_string(*first_out[i]));
    }
  }
  return ens;
}

}  // namespace papseries
