#include "papseries/cli/pipeline.hpp"

#include "papseries/analysis/ratio.hpp"
#include "papseries/analysis/stretched.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace papseries {

namespace {

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

// Extrapolation over the default window; missing or degenerate input yields nothing.
std::optional<TailFit> tail(const EstimatorSeq& seq, double p, int degree = 1) {
  if (seq.size() < 4) return std::nullopt;
  try {
    return extrapolate_tail(seq, p, 0, degree);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<TailFit> tail_exponents(const EstimatorSeq& seq, const std::vector<double>& exps) {
  if (seq.size() < exps.size() + 4) return std::nullopt;
  try {
    return extrapolate_exponents(seq, exps, std::max(default_window(seq), exps.size() + 4));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

EstimatorSeq upto(const EstimatorSeq& s, long last) {
  if (s.empty()) return s;
  EstimatorSeq w = s.window(s.n.front(), last);
  w.label = s.label;
  w.abscissa_exponent = s.abscissa_exponent;
  return w;
}

void add_plot(AnalysisReport& rep, const std::string& name, EstimatorSeq seq, double p) {
  if (seq.empty()) return;
  seq.abscissa_exponent = p;
  rep.plots.push_back({name, std::move(seq), p});
}

void add(AnalysisReport& rep, std::string name, HPFloat v, std::optional<HPFloat> err, std::string method) {
  rep.estimates.push_back({std::move(name), std::move(v), std::move(err), std::move(method)});
}

EstimatorSeq map_values(const EstimatorSeq& s, const std::function<HPFloat(long, const HPFloat&)>& f,
                        std::string label) {
  EstimatorSeq out;
  out.label = std::move(label);
  out.first_predicted = s.first_predicted;
  for (std::size_t i = 0; i < s.size(); ++i) out.push(s.n[i], f(s.n[i], s.values[i]));
  return out;
}

void attach_bounds(AnalysisReport& rep, const ExactSeries& s, const AnalysisOptions& o) {
  if (!o.bounds) return;
  try {
    rep.bounds = stieltjes_bounds(s.prefix(s.coeffs.size()), o.precision);
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("no Stieltjes bound: ") + e.what());
  }
}

// Decay exponents of r_n - mu for the stretched form.
std::vector<double> ratio_correction_exponents(double sigma, std::size_t count) {
  std::vector<double> out{1.0 - sigma};
  for (double e : mu1_correction_exponents(sigma, count)) out.push_back(e + 1.0 - sigma);
  out.resize(count);
  return out;
}

}  // namespace

const ReportedValue& AnalysisReport::estimate(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e;
  throw std::out_of_range(series + ": no estimate named " + name);
}

bool AnalysisReport::has(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return true;
  return false;
}

long reliable_limit(const EstimatorSeq& r, double tol) {
  if (r.empty()) return 0;
  long last = r.n.front() - 1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!r.errors.empty() && !r.errors[i].is_zero()) {
      if ((r.errors[i] / abs(r.values[i])).to_double() > tol) break;
    }
    last = r.n[i];
  }
  return last;
}

PreparedSeries prepare_series(const ExactSeries& s, const AnalysisOptions& o) {
  PreparedSeries out;
  out.series = s;
  if (o.extend > 0) {
    EnsembleOptions eo;
    eo.precision = o.precision;
    eo.threads = o.threads;
    const PredictionEnsemble ens = extend_series(s, o.extend, default_grid(s.coeffs.size(), o.orders), eo);
    out.series = ens.apply(s);
    ExtensionSummary x;
    x.exact_terms = s.coeffs.size();
    x.predicted = ens.ratios.size();
    x.members = ens.members.size();
    x.survivors = ens.survivors();
    x.failed = ens.failed;
    x.orders = o.orders;
    x.zc_mean = ens.zc_mean;
    x.zc_std = ens.zc_std;
    x.exponent_mean = ens.exponent_mean;
    x.exponent_std = ens.exponent_std;
    out.extension = x;
  }
  const EstimatorSeq r = ratios(out.series, o.precision);
  const long last = reliable_limit(r, o.reliable_tolerance);
  if (out.extension) out.extension->reliable_until = last;
  out.ratios = upto(r, last);
  out.log_coefficients = upto(log_coefficients(out.series, o.precision), last);
  return out;
}

AnalysisReport analyze_powerlaw(const ExactSeries& s, const AnalysisOptions& o) {
  AnalysisReport rep;
  rep.series = s.name;
  rep.mode = "powerlaw";
  const PreparedSeries prep = prepare_series(s, o);
  rep.extension = prep.extension;
  const EstimatorSeq& r = prep.ratios;
  if (r.size() < 8) throw std::invalid_argument(s.name + ": too few ratios for a power-law analysis");
  const Precision P = o.precision;

  rep.diagnostics = {"ratios", "linear intercepts", "quadratic intercepts", "cubic intercepts", "exponent estimators",
                     "mu-free exponent estimators", "Delta exponent", "four-parameter ratio fit", "amplitude fit"};
  const EstimatorSeq l1 = intercepts(r, 1), l2 = intercepts(r, 2), l3 = intercepts(r, 3);
  add_plot(rep, "ratios", r, 1.0);
  add_plot(rep, "linear_intercepts", l1, 2.0);
  add_plot(rep, "quadratic_intercepts", l2, 3.0);
  add_plot(rep, "cubic_intercepts", l3, 4.0);

  const auto mu2 = tail(l2, 3.0), mu3 = tail(l3, 4.0), mu1 = tail(l1, 2.0);
  if (!mu2) throw std::domain_error(s.name + ": quadratic intercepts could not be extrapolated");
  if (mu1) add(rep, "mu_linear_intercepts", mu1->intercept, std::nullopt, "l_n linear in n^-2");
  if (mu3) add(rep, "mu_cubic_intercepts", mu3->intercept, std::nullopt, "l3_n linear in n^-4");
  std::optional<HPFloat> mu_err;
  if (mu3) mu_err = abs(mu2->intercept - mu3->intercept);
  add(rep, "mu_quadratic_intercepts", mu2->intercept, mu_err, "l2_n linear in n^-3; error = |l2 - l3 limit|");
  const HPFloat mu = o.mu ? *o.mu : mu2->intercept;
  add(rep, "mu", mu, o.mu ? std::nullopt : mu_err, o.mu ? "given" : "quadratic intercepts");

  // g_n = n (r_n / mu - 1) and its linear extrapolants.
  const EstimatorSeq gn = map_values(r, [&](long n, const HPFloat& v) { return (v / mu - 1L) * n; }, "g_n");
  const EstimatorSeq g2 = intercepts(gn, 1);
  add_plot(rep, "g_given_mu", gn, 1.0);
  add_plot(rep, "g_given_mu_extrapolants", g2, 2.0);
  const auto gfit = tail(gn, 1.0), gfit2 = tail(gn, 1.0, 2);
  if (!gfit) throw std::domain_error(s.name + ": exponent estimators could not be extrapolated");
  std::optional<HPFloat> g_err;
  if (gfit2) g_err = abs(gfit->intercept - gfit2->intercept);
  add(rep, "g", gfit->intercept, g_err, "n(r_n/mu - 1) linear in 1/n; error = |linear - quadratic|");

  // mu-free: n^2 (1 - r_n / r_{n-1}) -> g.
  const EstimatorSeq dt = map_values(divergence_test(r), [](long, const HPFloat& v) { return -v; }, "g_mu_free");
  add_plot(rep, "g_mu_free", dt, 1.0);
  if (const auto f = tail(dt, 1.0)) add(rep, "g_mu_free", f->intercept, std::nullopt, "n^2(1 - r_n/r_{n-1}) linear in 1/n");

  const EstimatorSeq de = delta_exponent(r, mu, gfit->intercept);
  add_plot(rep, "delta_exponent", de, 1.0);
  if (const auto f = tail(de, 1.0)) add(rep, "Delta", f->intercept, std::nullopt, "log-log gradient linear in 1/n");

  const FitTrace fit = fit_ratios_powerlaw(r);
  std::optional<HPFloat> h, j, fit_mu, fit_g;
  if (fit.size() > 0) {
    const EstimatorSeq fm = fit.param("mu"), fg = fit.param("mu_g"), fh = fit.param("mu_h"), fj = fit.param("mu_j");
    add_plot(rep, "fit_mu", fm, 3.0);
    add_plot(rep, "fit_mu_g", fg, 1.5);
    add_plot(rep, "fit_mu_h", fh, 1.0);
    add_plot(rep, "fit_mu_j", fj, 1.0);
    if (const auto f = tail(fm, 3.0)) add(rep, "fit_mu", f->intercept, std::nullopt, "4-point ratio fit, linear in n^-3");
    if (const auto f = tail(fg, 1.5)) add(rep, "fit_mu_g", f->intercept, std::nullopt, "4-point ratio fit, linear in n^-3/2");
    const std::size_t k = fit.size() - 1;
    const HPFloat& fmu = fit.estimates[k][0];
    add(rep, "fit_mu_h", fit.estimates[k][2], std::nullopt, "4-point ratio fit, last window");
    add(rep, "fit_mu_j", fit.estimates[k][3], std::nullopt, "4-point ratio fit, last window");
    fit_mu = fmu;
    fit_g = fit.estimates[k][1] / fmu;
    h = fit.estimates[k][2] / fmu;
    j = fit.estimates[k][3] / fmu;
  }

  const HPFloat g_amp = o.g ? *o.g : gfit->intercept;
  const EstimatorSeq& logc = prep.log_coefficients;
  add_plot(rep, "amplitude", amplitude_estimates(logc, mu, g_amp), 1.0);
  const FitTrace amp = fit_amplitude(logc, g_amp);
  std::optional<HPFloat> C;
  if (amp.size() > 0) {
    const std::size_t k = amp.size() - 1;
    C = exp(amp.estimates[k][1]);
    add(rep, "C", *C, std::nullopt,
        std::string("3-point amplitude fit with g = ") + g_amp.to_string(8) + (o.g ? " (given)" : " (estimated)") +
            ", last window");
    add(rep, "amplitude_fit_mu", exp(amp.estimates[k][0]), std::nullopt, "3-point amplitude fit, last window");
    add_plot(rep, "amplitude_fit_log_C", amp.param("log_C"), 1.0);
  }

  // The ratio expansion must use parameters fitted together; mixing the
  // intercept mu with the fitted h and j shifts r_n by several parts in 10^4.
  if (fit_mu && !o.mu) {
    rep.model.mu = *fit_mu;
    rep.model.g = *fit_g;
    rep.notes.push_back("model ratio expansion: mu, g, h, j from the last window of the four-parameter ratio fit");
    rep.model.h = h;
    rep.model.j = j;
  } else {
    rep.model.mu = mu;
    rep.model.g = gfit->intercept;
  }
  rep.model.C = C;
  rep.model.mu_err = mu_err.value_or(HPFloat(P));
  rep.model.g_err = g_err.value_or(HPFloat(P));
  attach_bounds(rep, s, o);
  return rep;
}

namespace {

AnalysisReport stretched_from(const std::string& name, const EstimatorSeq& r, const EstimatorSeq& logc,
                              const BigRational& sigma_q, const AnalysisOptions& o) {
  AnalysisReport rep;
  rep.series = name;
  rep.mode = "stretched";
  if (r.size() < 12) throw std::invalid_argument(name + ": too few ratios for a stretched-exponential analysis");
  const Precision P = o.precision;
  const HPFloat sigma(sigma_q, P);
  const double sd = sigma_q.get_d();
  if (!(sd > 0.0 && sd < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");

  rep.diagnostics = {"ratios", "ratio growth fit", "sigma estimators (mu-free)", "divergence test"};
  add_plot(rep, "ratios", r, 1.0 - sd);
  const auto rexp = ratio_correction_exponents(sd, 4);
  const auto mu_fit = tail_exponents(r, rexp);
  if (!mu_fit) throw std::domain_error(name + ": ratios could not be extrapolated");
  add(rep, "mu_ratios", mu_fit->intercept, std::nullopt, "r_n fitted with known correction exponents");
  const HPFloat mu = o.mu ? *o.mu : mu_fit->intercept;
  add(rep, "mu", mu, std::nullopt, o.mu ? "given" : "ratio fit");

  const EstimatorSeq rr = sigma_unknown_mu(logc, UnknownMuMethod::RatioOfRatios);
  const EstimatorSeq rt = sigma_unknown_mu(logc, UnknownMuMethod::RootRatio);
  add_plot(rep, "sigma_ratio_of_ratios", rr, 1.0);
  add_plot(rep, "sigma_root_ratio", rt, 1.0);
  if (const auto f = tail(rr, 1.0)) add(rep, "sigma_ratio_of_ratios", f->intercept, std::nullopt, "linear in 1/n");
  if (const auto f = tail(rt, 1.0)) add(rep, "sigma_root_ratio", f->intercept, std::nullopt, "linear in 1/n");
  add_plot(rep, "divergence_test", divergence_test(r), sd);

  const EstimatorSeq sk = sigma_known_mu(r, mu, KnownMuMethod::GradientLogRatio);
  const EstimatorSeq sdiff = sigma_known_mu(r, mu, KnownMuMethod::GradientLogDiff);
  rep.diagnostics.push_back("sigma estimators (mu known)");
  add_plot(rep, "sigma_known_mu", sk, 1.0);
  add_plot(rep, "sigma_known_mu_diff", sdiff, 1.0);
  if (const auto f = tail(sk, 1.0)) add(rep, "sigma_known_mu", f->intercept, std::nullopt, "gradient on l_n, linear in 1/n");
  if (const auto f = tail(sdiff, 1.0))
    add(rep, "sigma_known_mu_diff", f->intercept, std::nullopt, "gradient on log differences, linear in 1/n");

  rep.diagnostics.push_back("mu1 estimator");
  const Mu1Estimate m1 = mu1_estimate(r, mu, sigma);
  add_plot(rep, "sigma_log_mu1", m1.sequence, sd);
  add(rep, "sigma_log_mu1", m1.sigma_log_mu1, std::nullopt, "(r_n/mu - 1) n^(1-sigma), 4 known correction exponents");
  add(rep, "log_mu1_ratios", m1.log_mu1, std::nullopt, "sigma log mu1 / sigma");

  HPFloat log_mu1 = m1.log_mu1, g(P);
  std::optional<HPFloat> C;
  bool have_g = false;
  rep.diagnostics.push_back("3-point coefficient fit");
  const FitTrace fit = fit_log_coeffs_3pt(logc, mu, sigma);
  if (fit.size() >= 4) {
    const EstimatorSeq fl = fit.param("log_mu1"), fg = fit.param("g"), fc = fit.param("log_C");
    add_plot(rep, "fit_log_mu1", fl, 1.5);
    add_plot(rep, "fit_g", fg, 1.5);
    add_plot(rep, "fit_log_C", fc, 2.5);
    if (const auto f = tail(fl, 1.5)) {
      log_mu1 = f->intercept;
      add(rep, "log_mu1", log_mu1, std::nullopt, "3-point fit of log c_n - n log mu, linear in n^-3/2");
    }
    if (const auto f = tail(fg, 1.5)) {
      g = f->intercept;
      have_g = true;
      add(rep, "g", g, std::nullopt, "3-point fit, linear in n^-3/2");
    }
    if (const auto f = tail(fc, 2.5)) {
      C = exp(f->intercept);
      add(rep, "C", *C, std::nullopt, "3-point fit, log C linear in n^-5/2");
    }
  }
  if (!have_g) rep.notes.push_back("g not estimated: 3-point fit had too few windows");
  add(rep, "mu1", exp(log_mu1), std::nullopt, rep.has("log_mu1") ? "exp(log_mu1)" : "exp(log_mu1_ratios)");

  rep.model.mu = mu;
  rep.model.g = g;
  rep.model.mu1 = exp(log_mu1);
  rep.model.sigma = sigma_q;
  rep.model.C = C;
  rep.model.mu_err = HPFloat(P);
  rep.model.g_err = HPFloat(P);
  return rep;
}

}  // namespace

AnalysisReport analyze_stretched(const ExactSeries& s, const BigRational& sigma, const AnalysisOptions& o) {
  const PreparedSeries prep = prepare_series(s, o);
  AnalysisReport rep = stretched_from(s.name, prep.ratios, prep.log_coefficients, sigma, o);
  rep.extension = prep.extension;
  attach_bounds(rep, s, o);
  return rep;
}

AnalysisReport analyze_stretched(const RationalSeries& s, const BigRational& sigma, const AnalysisOptions& o) {
  return stretched_from(s.name, ratios(s, o.precision), log_coefficients(s, o.precision), sigma, o);
}

std::string plot_columns(const PlotSeries& plot) {
  std::ostringstream o;
  o << "# " << plot.name << ": x = n^-" << fmt(plot.abscissa) << ", value\n";
  const Precision p = plot.seq.values.empty() ? Precision{} : plot.seq.values.front().precision();
  const HPFloat e(-plot.abscissa, p);
  for (std::size_t i = 0; i < plot.seq.size(); ++i) {
    o << power_of_index(plot.seq.n[i], e).to_string(12) << ' ' << plot.seq.values[i].to_string(15) << '\n';
  }
  return o.str();
}

std::string AnalysisReport::to_json() const {
  nlohmann::ordered_json j;
  j["series"] = series;
  j["mode"] = mode;
  j["diagnostics"] = diagnostics;
  auto& est = j["estimates"] = nlohmann::ordered_json::array();
  for (const auto& e : estimates) {
    nlohmann::ordered_json v{{"name", e.name}, {"value", e.value.to_string(12)}};
    if (e.error) v["error"] = e.error->to_string(3);
    v["method"] = e.method;
    est.push_back(v);
  }
  nlohmann::ordered_json m;
  m["mu"] = model.mu.to_string(12);
  m["g"] = model.g.to_string(8);
  if (model.sigma) m["sigma"] = model.sigma->get_str();
  if (model.mu1) m["mu1"] = model.mu1->to_string(8);
  if (model.C) m["C"] = model.C->to_string(8);
  if (model.h) m["h"] = model.h->to_string(8);
  if (model.j) m["j"] = model.j->to_string(8);
  j["model"] = m;
  if (extension) {
    const auto& x = *extension;
    j["extension"] = {{"exact_terms", x.exact_terms},
                      {"predicted", x.predicted},
                      {"orders", x.orders},
                      {"members", x.members},
                      {"survivors", x.survivors},
                      {"failed", x.failed},
                      {"reliable_until", x.reliable_until},
                      {"z_c", x.zc_mean.to_string(16)},
                      {"z_c_std", x.zc_std.to_string(3)},
                      {"exponent", x.exponent_mean.to_string(10)},
                      {"exponent_std", x.exponent_std.to_string(3)}};
  }
  if (bounds) j["bounds"] = nlohmann::ordered_json::parse(bounds->to_json());
  if (!notes.empty()) j["notes"] = notes;
  return j.dump(2);
}

std::string AnalysisReport::to_csv() const {
  std::ostringstream o;
  o << "name,value,error,method\n";
  for (const auto& e : estimates) {
    o << e.name << ',' << e.value.to_string(12) << ',' << (e.error ? e.error->to_string(3) : "") << ",\"" << e.method
      << "\"\n";
  }
  return o.str();
}

std::string AnalysisReport::to_text() const {
  std::ostringstream o;
  o << series << " (" << mode << ")\n";
  if (extension) {
    o << "extension: " << extension->exact_terms << " exact + " << extension->predicted << " predicted, "
      << extension->survivors << "/" << extension->members << " approximants kept, reliable to n = "
      << extension->reliable_until << "\n";
  }
  for (const auto& e : estimates) {
    o << "  " << e.name << " = " << e.value.to_string(10);
    if (e.error) o << " +- " << e.error->to_string(2);
    o << "   [" << e.method << "]\n";
  }
  if (bounds) {
    o << "  log-convex bound = " << bounds->logconvex_bound.to_string(8) << "\n";
    o << "  Stieltjes bound = " << bounds->max_bound.to_string(8) << (bounds->conjectural ? " (conjectural)" : "")
      << "\n";
  }
  for (const auto& n : notes) o << "  note: " << n << "\n";
  return o.str();
}

}  // namespace papseries
